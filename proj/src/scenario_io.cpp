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

#include "pcnot/scenario_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "pcnot/errors.hpp"

namespace pcnot {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read(const json& j, const char* key, const std::string& where, T& out) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ElementKind element_from_json(const json& e) {
  const auto type = get<std::string>(e, "type", "circuit element");
  if (type == "beam-splitter") {
    check_keys(e, "beam-splitter", {"type", "ports", "reflectivity"});
    BeamSplitter b;
    read(e, "reflectivity", type, b.reflectivity);
    return b;
  }
  if (type == "polarizing-bs") {
    check_keys(e, "polarizing-bs", {"type", "ports", "basis_deg"});
    PolarizingBS b;
    read(e, "basis_deg", type, b.basis_angle_deg);
    return b;
  }
  if (type == "wave-plate") {
    check_keys(e, "wave-plate", {"type", "ports", "angle_deg"});
    WavePlate w;
    read(e, "angle_deg", type, w.angle_deg);
    return w;
  }
  if (type == "basis-rotator") {
    check_keys(e, "basis-rotator", {"type", "ports", "angle_deg"});
    BasisRotator r;
    read(e, "angle_deg", type, r.angle_deg);
    return r;
  }
  if (type == "phase-shifter") {
    check_keys(e, "phase-shifter", {"type", "ports", "phase_deg"});
    PhaseShifter p;
    read(e, "phase_deg", type, p.phase_deg);
    return p;
  }
  throw ConfigError("unknown circuit element type '" + type + "'");
}

json element_to_json(const OpticalElement& e) {
  json j;
  j["ports"] = e.ports;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, BeamSplitter>) {
          j["type"] = "beam-splitter";
          j["reflectivity"] = k.reflectivity;
        } else if constexpr (std::is_same_v<K, PolarizingBS>) {
          j["type"] = "polarizing-bs";
          j["basis_deg"] = k.basis_angle_deg;
        } else if constexpr (std::is_same_v<K, WavePlate>) {
          j["type"] = "wave-plate";
          j["angle_deg"] = k.angle_deg;
        } else if constexpr (std::is_same_v<K, BasisRotator>) {
          j["type"] = "basis-rotator";
          j["angle_deg"] = k.angle_deg;
        } else if constexpr (std::is_same_v<K, PhaseShifter>) {
          j["type"] = "phase-shifter";
          j["phase_deg"] = k.phase_deg;
        } else {
          throw ConfigError("polarizers belong to analyzer settings, not circuits");
        }
      },
      e.kind);
  return j;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<double> sweep_values(const json& s) {
  const bool has_values = s.contains("values");
  const bool has_range = s.contains("start") || s.contains("stop") || s.contains("points");
  if (has_values && has_range) throw ConfigError("sweep takes either values or start/stop/points");
  if (has_values) {
    auto v = get<std::vector<double>>(s, "values", "sweep");
    if (v.empty()) throw ConfigError("sweep.values must not be empty");
    return v;
  }
  if (!has_range) return {};
  const double start = get<double>(s, "start", "sweep");
  const double stop = get<double>(s, "stop", "sweep");
  const int points = get<int>(s, "points", "sweep");
  if (points < 2) throw ConfigError("sweep.points must be at least 2");
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(start + (stop - start) * i / (points - 1));
  return v;
}

std::string header(const Scenario& sc) {
  return "# scenario=" + sc.name + ",experiment=" + experiment_name(sc.experiment) +
         ",scenario_hash=" + hex64(scenario_hash(sc)) + ",seed=" + std::to_string(sc.counting.seed) +
         ",mode=" + (sc.mode == RunMode::kExact ? "exact" : "sampled") + "\n";
}

json fit_json(const FitResult& f) {
  return {{"amplitude", f.amplitude},
          {"offset", f.offset},
          {"phase_deg", f.phase_deg},
          {"frequency", f.frequency},
          {"visibility", f.visibility},
          {"amplitude_stderr", f.amplitude_stderr},
          {"offset_stderr", f.offset_stderr},
          {"phase_stderr_deg", f.phase_stderr_deg},
          {"frequency_stderr", f.frequency_stderr},
          {"visibility_stderr", f.visibility_stderr},
          {"residual_norm", f.residual_norm},
          {"iterations", f.iterations},
          {"converged", f.converged}};
}

std::string stderr_text(const std::optional<std::uint64_t>& count) {
  return count ? num(std::sqrt(static_cast<double>(*count))) : "0";
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

DistinguishabilityConfig overlaps_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("overlaps must be an object of \"X-Y\": value entries");
  std::map<std::pair<std::string, std::string>, double> m;
  for (const auto& [k, v] : j.items()) {
    const auto dash = k.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == k.size() || k.find('-', dash + 1) != std::string::npos) {
      throw ConfigError("overlap key '" + k + "' must look like \"A-C\"");
    }
    if (!v.is_number()) throw ConfigError("overlap '" + k + "' must be a number");
    m[{k.substr(0, dash), k.substr(dash + 1)}] = v.get<double>();
  }
  return DistinguishabilityConfig(std::move(m));
}

DistinguishabilityConfig load_overlap_file(const std::string& path) {
  return overlaps_from_json(parse_file(path));
}

Scenario scenario_from_json(const json& j) {
  check_keys(j, "scenario", {"name", "experiment", "preset", "circuit", "mode", "sources", "sweep", "counting", "fit"});
  Scenario sc;
  read(j, "name", "scenario", sc.name);
  if (j.contains("experiment")) sc.experiment = parse_experiment(get<std::string>(j, "experiment", "scenario"));
  read(j, "preset", "scenario", sc.preset);
  const LinearOpticalGate base = preset(sc.preset);
  if (j.contains("circuit")) {
    const json& c = j.at("circuit");
    check_keys(c, "circuit", {"elements"});
    OpticalCircuit circuit(base.circuit.registry());
    const json& elements = c.at("elements");
    if (!elements.is_array()) throw ConfigError("circuit.elements must be an array");
    for (const auto& e : elements) {
      circuit.add(element_from_json(e), get<std::vector<std::string>>(e, "ports", "circuit element"));
    }
    sc.circuit = std::move(circuit);
  }
  if (j.contains("mode")) {
    const auto m = get<std::string>(j, "mode", "scenario");
    if (m == "exact") {
      sc.mode = RunMode::kExact;
    } else if (m == "sampled") {
      sc.mode = RunMode::kSampled;
    } else {
      throw ConfigError("mode must be exact or sampled");
    }
  }
  if (j.contains("sources")) {
    const json& s = j.at("sources");
    check_keys(s, "sources", {"ancilla_plate_deg", "overlaps", "target", "fiber_rotation_deg"});
    read(s, "ancilla_plate_deg", "sources", sc.sources.spdc.ancilla_plate_deg);
    read(s, "fiber_rotation_deg", "sources", sc.sources.fiber_rotation_deg);
    if (s.contains("overlaps")) {
      const json& o = s.at("overlaps");
      if (o.is_string()) {
        const auto name = o.get<std::string>();
        if (name == "ideal") {
          sc.sources.overlap_preset = OverlapPreset::kIdeal;
        } else if (name == "paper-like") {
          sc.sources.overlap_preset = OverlapPreset::kPaperLike;
        } else {
          throw ConfigError("unknown overlap preset '" + name + "'");
        }
      } else {
        sc.sources.overlap_preset = OverlapPreset::kCustom;
        sc.sources.overlaps = overlaps_from_json(o);
      }
    }
    if (s.contains("target")) {
      const json& t = s.at("target");
      check_keys(t, "sources.target", {"kind", "mean_photon_number", "max_photons"});
      const auto kind = get<std::string>(t, "kind", "sources.target");
      if (kind == "single-photon") {
        if (t.contains("mean_photon_number") || t.contains("max_photons")) {
          throw ConfigError("single-photon target takes no pulse parameters");
        }
        sc.sources.target.single_photon = true;
      } else if (kind == "weak-coherent") {
        sc.sources.target.single_photon = false;
        read(t, "mean_photon_number", "sources.target", sc.sources.target.mean_photon_number);
        read(t, "max_photons", "sources.target", sc.sources.target.max_photons);
      } else {
        throw ConfigError("target kind must be single-photon or weak-coherent");
      }
    }
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep", {"values", "start", "stop", "points", "control_input_deg", "target_input_deg",
                            "control_analyzer_deg", "target_visibility"});
    sc.sweep.values = sweep_values(s);
    read(s, "control_input_deg", "sweep", sc.sweep.control_input_deg);
    read(s, "target_input_deg", "sweep", sc.sweep.target_input_deg);
    read(s, "control_analyzer_deg", "sweep", sc.sweep.control_analyzer_deg);
    read(s, "target_visibility", "sweep", sc.sweep.target_visibility);
  }
  if (j.contains("counting")) {
    const json& c = j.at("counting");
    check_keys(c, "counting", {"trials", "efficiency", "seed"});
    read(c, "trials", "counting", sc.counting.trials_per_setting);
    read(c, "efficiency", "counting", sc.counting.detector_efficiency);
    read(c, "seed", "counting", sc.counting.seed);
  }
  if (j.contains("fit")) {
    const json& f = j.at("fit");
    check_keys(f, "fit", {"free_period"});
    read(f, "free_period", "fit", sc.fit.free_period);
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(parse_file(path)); }

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["experiment"] = experiment_name(sc.experiment);
  j["preset"] = sc.preset;
  j["mode"] = sc.mode == RunMode::kExact ? "exact" : "sampled";
  if (sc.circuit) {
    json elements = json::array();
    for (const auto& e : sc.circuit->elements()) elements.push_back(element_to_json(e));
    j["circuit"] = {{"elements", elements}};
  }
  json s;
  s["ancilla_plate_deg"] = sc.sources.spdc.ancilla_plate_deg;
  s["fiber_rotation_deg"] = sc.sources.fiber_rotation_deg;
  switch (sc.sources.overlap_preset) {
    case OverlapPreset::kIdeal:
      s["overlaps"] = "ideal";
      break;
    case OverlapPreset::kPaperLike:
      s["overlaps"] = "paper-like";
      break;
    case OverlapPreset::kCustom: {
      json o = json::object();
      for (const auto& [k, v] : sc.sources.overlaps.pairs()) o[k.first + "-" + k.second] = v;
      s["overlaps"] = o;
      break;
    }
  }
  if (sc.sources.target.single_photon) {
    s["target"] = {{"kind", "single-photon"}};
  } else {
    s["target"] = {{"kind", "weak-coherent"},
                   {"mean_photon_number", sc.sources.target.mean_photon_number},
                   {"max_photons", sc.sources.target.max_photons}};
  }
  j["sources"] = s;
  json sw;
  if (!sc.sweep.values.empty()) sw["values"] = sc.sweep.values;
  sw["control_input_deg"] = sc.sweep.control_input_deg;
  sw["target_input_deg"] = sc.sweep.target_input_deg;
  sw["control_analyzer_deg"] = sc.sweep.control_analyzer_deg;
  sw["target_visibility"] = sc.sweep.target_visibility;
  j["sweep"] = sw;
  j["counting"] = {{"trials", sc.counting.trials_per_setting},
                   {"efficiency", sc.counting.detector_efficiency},
                   {"seed", sc.counting.seed}};
  j["fit"] = {{"free_period", sc.fit.free_period}};
  return j;
}

std::string canonical_json(const Scenario& sc) { return scenario_to_json(sc).dump(); }

std::uint64_t scenario_hash(const Scenario& sc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(sc)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunOutput run_scenario(const Scenario& sc, OutputFormat format) {
  sc.validate();
  std::ostringstream csv;
  csv << header(sc);
  json results;
  RunOutput out;

  switch (sc.experiment) {
    case Experiment::kTruthTable: {
      const TruthTableReport r = run_truth_table(sc);
      csv << "input_control,input_target,output_control,output_target,theta_c_deg,theta_t_deg,"
             "probability,count,stderr\n";
      json rows = json::array();
      for (int in = 0; in < 4; ++in) {
        for (int o = 0; o < 4; ++o) {
          std::optional<std::uint64_t> count;
          if (r.counts) count = (*r.counts)[in][o];
          csv << (in >> 1) << ',' << (in & 1) << ',' << (o >> 1) << ',' << (o & 1) << ','
              << num(90.0 * (o >> 1)) << ',' << num(90.0 * (o & 1)) << ',' << num(r.probability[in][o]) << ','
              << (count ? std::to_string(*count) : "") << ',' << stderr_text(count) << '\n';
        }
        rows.push_back(r.probability[in]);
      }
      csv << "# error_fraction=" << num(r.error_fraction) << '\n';
      results = {{"probability", rows}, {"error_fraction", r.error_fraction}};
      if (r.counts) results["counts"] = *r.counts;
      out.violations = r.violations;
      break;
    }
    case Experiment::kFringe: {
      const FringeReport r = run_fringe(sc);
      csv << "theta_c_deg,theta_t_deg,probability,count,stderr\n";
      for (const auto& p : r.points) {
        csv << num(r.control_analyzer_deg) << ',' << num(p.theta_deg) << ',' << num(p.probability) << ','
            << (p.count ? std::to_string(*p.count) : "") << ',' << stderr_text(p.count) << '\n';
      }
      csv << "# fit amplitude=" << num(r.fit.amplitude) << ",offset=" << num(r.fit.offset)
          << ",phase_deg=" << num(r.fit.phase_deg) << ",visibility=" << num(r.fit.visibility)
          << ",visibility_stderr=" << num(r.fit.visibility_stderr) << ",residual_norm=" << num(r.fit.residual_norm)
          << '\n';
      results = {{"fit", fit_json(r.fit)}};
      out.violations = r.violations;
      break;
    }
    case Experiment::kHom: {
      csv << "overlap,probability,visibility\n";
      json rows = json::array();
      for (const auto& p : run_hom_scan(sc)) {
        csv << num(p.overlap) << ',' << num(p.coincidence) << ',' << num(p.visibility) << '\n';
        rows.push_back({{"overlap", p.overlap}, {"probability", p.coincidence}, {"visibility", p.visibility}});
      }
      results = {{"points", rows}};
      break;
    }
    case Experiment::kThreePhotonScan: {
      csv << "overlap_t,visibility,stderr\n";
      json rows = json::array();
      for (const auto& p : run_three_photon_scan(sc)) {
        csv << num(p.overlap) << ',' << num(p.visibility) << ',' << num(p.visibility_stderr) << '\n';
        rows.push_back({{"overlap_t", p.overlap}, {"visibility", p.visibility}});
      }
      results = {{"points", rows}};
      break;
    }
    case Experiment::kChsh: {
      const ChshReport r = run_chsh(sc);
      csv << "label,visibility,a_deg,b_deg,a_prime_deg,b_prime_deg,s_value\n";
      json rows = json::array();
      for (const auto& row : r.rows) {
        csv << row.label << ',' << num(row.visibility) << ',' << num(r.angles.a) << ',' << num(r.angles.b) << ','
            << num(r.angles.a_prime) << ',' << num(r.angles.b_prime) << ',' << num(row.s_value) << '\n';
        rows.push_back({{"label", row.label}, {"visibility", row.visibility}, {"s_value", row.s_value}});
      }
      results = {{"rows", rows}};
      break;
    }
    case Experiment::kCalibrate: {
      const CalibrationResult r = calibrate(sc);
      csv << "target_visibility,overlap_ac,overlap_t,achieved_visibility,iterations\n";
      csv << num(r.target_visibility) << ',' << num(r.overlap_ac) << ',' << num(r.overlap_t) << ','
          << num(r.achieved_visibility) << ',' << r.iterations << '\n';
      results = {{"target_visibility", r.target_visibility},
                 {"overlap_ac", r.overlap_ac},
                 {"overlap_t", r.overlap_t},
                 {"achieved_visibility", r.achieved_visibility},
                 {"iterations", r.iterations}};
      break;
    }
  }

  if (format == OutputFormat::kCsv) {
    for (const auto& v : out.violations) csv << "# violation: " << v << '\n';
    out.text = csv.str();
  } else {
    json summary = {{"scenario", sc.name},
                    {"experiment", experiment_name(sc.experiment)},
                    {"scenario_hash", hex64(scenario_hash(sc))},
                    {"seed", sc.counting.seed},
                    {"mode", sc.mode == RunMode::kExact ? "exact" : "sampled"},
                    {"results", results},
                    {"violations", out.violations}};
    out.text = summary.dump(2) + "\n";
  }
  return out;
}

}  // namespace pcnot
