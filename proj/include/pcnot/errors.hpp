// Copyright 2026 The pcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pcnot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Port or registry problems: overlapping labels in a tensor product,
/// mismatched registries, unknown port names.
class RegistryError : public Error {
 public:
  using Error::Error;
};

class ZeroNormError : public Error {
 public:
  using Error::Error;
};

class PhotonCapError : public Error {
 public:
  using Error::Error;
};

class NonUnitaryElementError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-facing configuration: bad overlaps, bad scenario files,
/// truncation tails that are too heavy, and similar.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcnot
