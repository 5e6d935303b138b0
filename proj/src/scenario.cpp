#include "mixflow/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mixflow {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ConfigError(path + ": " + reason);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      fail(path + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required key");
  return *it;
}

double require_number(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

bool optional_bool(const json& obj, const std::string& path, const char* key, bool dflt) {
  auto it = obj.find(key);
  if (it == obj.end()) return dflt;
  if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

VehicleClassSpec parse_class(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  reject_unknown_keys(obj, path, {"length_m", "width_m", "gamma", "tau_s", "v_max_ms", "ao_max"});
  VehicleClassSpec spec;
  spec.length = require_number(obj, path, "length_m");
  spec.width = require_number(obj, path, "width_m");
  spec.gamma = require_number(obj, path, "gamma");
  spec.tau = require_number(obj, path, "tau_s");
  spec.v_max = require_number(obj, path, "v_max_ms");
  spec.ao_max = require_number(obj, path, "ao_max");
  return spec;
}

json class_to_json(const VehicleClassSpec& s) {
  return json{{"length_m", s.length}, {"width_m", s.width},   {"gamma", s.gamma},
              {"tau_s", s.tau},       {"v_max_ms", s.v_max},  {"ao_max", s.ao_max}};
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(doc, "config",
                      {"road", "time", "classes", "mix", "initial", "solver", "output"});

  ScenarioConfig cfg;

  const json& road = require(doc, "config", "road");
  if (!road.is_object()) fail("road", "expected an object");
  reject_unknown_keys(road, "road", {"length_m", "width_m", "cells"});
  cfg.road.length = require_number(road, "road", "length_m");
  cfg.road.width = require_number(road, "road", "width_m");
  const json& cells = require(road, "road", "cells");
  if (!cells.is_number_integer()) fail("road.cells", "expected an integer");
  cfg.road.cells = cells.get<int>();

  const json& time = require(doc, "config", "time");
  if (!time.is_object()) fail("time", "expected an object");
  reject_unknown_keys(time, "time", {"dt_s", "duration_s", "cfl_max", "adaptive_dt", "snapshots_s"});
  cfg.time.dt = require_number(time, "time", "dt_s");
  cfg.time.duration = require_number(time, "time", "duration_s");
  cfg.time.cfl_max = time.contains("cfl_max") ? require_number(time, "time", "cfl_max") : 1.0;
  cfg.time.adaptive_dt = optional_bool(time, "time", "adaptive_dt", false);
  if (time.contains("snapshots_s")) {
    const json& snaps = time["snapshots_s"];
    if (!snaps.is_array()) fail("time.snapshots_s", "expected an array of times");
    for (const auto& t : snaps) {
      if (!t.is_number()) fail("time.snapshots_s", "expected numbers");
      cfg.time.snapshot_times.push_back(t.get<double>());
    }
  }

  const json& classes = require(doc, "config", "classes");
  if (!classes.is_object()) fail("classes", "expected an object");
  reject_unknown_keys(classes, "classes", {"motorcycle", "car"});
  cfg.classes.motorcycle = parse_class(require(classes, "classes", "motorcycle"), "classes.motorcycle");
  cfg.classes.car = parse_class(require(classes, "classes", "car"), "classes.car");

  const json& mix = require(doc, "config", "mix");
  if (!mix.is_object()) fail("mix", "expected an object");
  reject_unknown_keys(mix, "mix", {"delta"});
  cfg.delta = require_number(mix, "mix", "delta");

  const json& initial = require(doc, "config", "initial");
  if (!initial.is_object()) fail("initial", "expected an object");
  reject_unknown_keys(initial, "initial", {"segments"});
  const json& segments = require(initial, "initial", "segments");
  if (!segments.is_array() || segments.empty())
    fail("initial.segments", "expected a non-empty array");
  int seg_index = 0;
  for (const auto& seg : segments) {
    std::string path = "initial.segments[" + std::to_string(seg_index++) + "]";
    if (!seg.is_object()) fail(path, "expected an object");
    reject_unknown_keys(seg, path, {"x_from", "x_to", "rho"});
    InitialSegment s;
    s.x_from = require_number(seg, path, "x_from");
    s.x_to = require_number(seg, path, "x_to");
    s.rho = require_number(seg, path, "rho");
    cfg.initial.push_back(s);
  }

  if (doc.contains("solver")) {
    const json& solver = doc["solver"];
    if (!solver.is_object()) fail("solver", "expected an object");
    reject_unknown_keys(solver, "solver", {"entropy_fix", "source"});
    if (solver.contains("entropy_fix")) {
      try {
        cfg.solver.entropy_fix = entropy_fix_mode_from_string(require_string(solver, "solver", "entropy_fix"));
      } catch (const ConfigError& e) {
        fail("solver.entropy_fix", e.what());
      }
    }
    if (solver.contains("source")) {
      try {
        cfg.solver.source = source_mode_from_string(require_string(solver, "solver", "source"));
      } catch (const ConfigError& e) {
        fail("solver.source", e.what());
      }
    }
  }

  if (doc.contains("output")) {
    const json& output = doc["output"];
    if (!output.is_object()) fail("output", "expected an object");
    reject_unknown_keys(output, "output", {"directory", "formats", "node_coordinates"});
    if (output.contains("directory"))
      cfg.output.directory = require_string(output, "output", "directory");
    if (output.contains("formats")) {
      const json& formats = output["formats"];
      if (!formats.is_array()) fail("output.formats", "expected an array");
      cfg.output.csv = false;
      cfg.output.svg = false;
      for (const auto& f : formats) {
        if (!f.is_string()) fail("output.formats", "expected strings");
        std::string name = f.get<std::string>();
        if (name == "csv") cfg.output.csv = true;
        else if (name == "svg") cfg.output.svg = true;
        else fail("output.formats", "unknown format '" + name + "' (expected csv or svg)");
      }
    }
    cfg.output.node_coordinates = optional_bool(output, "output", "node_coordinates", false);
  }

  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json segments = json::array();
  for (const auto& s : cfg.initial)
    segments.push_back(json{{"x_from", s.x_from}, {"x_to", s.x_to}, {"rho", s.rho}});

  json formats = json::array();
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.svg) formats.push_back("svg");

  json doc{
      {"road", {{"length_m", cfg.road.length}, {"width_m", cfg.road.width}, {"cells", cfg.road.cells}}},
      {"time",
       {{"dt_s", cfg.time.dt},
        {"duration_s", cfg.time.duration},
        {"cfl_max", cfg.time.cfl_max},
        {"adaptive_dt", cfg.time.adaptive_dt},
        {"snapshots_s", cfg.time.snapshot_times}}},
      {"classes",
       {{"motorcycle", class_to_json(cfg.classes.motorcycle)}, {"car", class_to_json(cfg.classes.car)}}},
      {"mix", {{"delta", cfg.delta}}},
      {"initial", {{"segments", segments}}},
      {"solver",
       {{"entropy_fix", to_string(cfg.solver.entropy_fix)}, {"source", to_string(cfg.solver.source)}}},
      {"output",
       {{"directory", cfg.output.directory},
        {"formats", formats},
        {"node_coordinates", cfg.output.node_coordinates}}}};
  return doc.dump(2) + "\n";
}

void validate(const ScenarioConfig& cfg) {
  try {
    validate(Grid{cfg.road.length, cfg.road.cells});
  } catch (const std::invalid_argument& e) {
    fail("road", e.what());
  }
  if (!(std::isfinite(cfg.road.width) && cfg.road.width > 0))
    fail("road.width_m", "must be positive");
  try {
    validate(cfg.time);
  } catch (const std::invalid_argument& e) {
    fail("time", e.what());
  }
  try {
    validate(cfg.classes.motorcycle);
  } catch (const std::invalid_argument& e) {
    fail("classes.motorcycle", e.what());
  }
  try {
    validate(cfg.classes.car);
  } catch (const std::invalid_argument& e) {
    fail("classes.car", e.what());
  }
  if (!(std::isfinite(cfg.delta) && cfg.delta > 0 && cfg.delta < 1))
    fail("mix.delta",
         "must lie strictly between 0 and 1; the one-class limits make the shared-occupancy "
         "split degenerate");

  // Segments must tile [0, length): sorted, gap-free, non-overlapping.
  auto segs = cfg.initial;
  std::sort(segs.begin(), segs.end(),
            [](const InitialSegment& a, const InitialSegment& b) { return a.x_from < b.x_from; });
  double tol = 1e-9 * cfg.road.length;
  double cursor = 0;
  int i = 0;
  for (const auto& s : segs) {
    std::string path = "initial.segments[" + std::to_string(i++) + "]";
    if (!(std::isfinite(s.rho) && s.rho >= 0 && s.rho <= 1))
      fail(path + ".rho", "total density must lie in [0, 1]");
    if (s.x_to <= s.x_from) fail(path, "x_to must exceed x_from");
    if (s.x_from > cursor + tol)
      fail(path, "gap before this segment; segments must cover the road");
    if (s.x_from < cursor - tol) fail(path, "overlaps the previous segment");
    cursor = s.x_to;
  }
  if (std::abs(cursor - cfg.road.length) > tol)
    fail("initial.segments", "segments must cover [0, road length)");
}

std::vector<double> report_coordinates(const ScenarioConfig& cfg) {
  Grid g = cfg.grid();
  std::vector<double> x(static_cast<size_t>(g.cells));
  for (int j = 0; j < g.cells; ++j)
    x[static_cast<size_t>(j)] =
        cfg.output.node_coordinates ? (j + 1) * g.dx() : (j + 0.5) * g.dx();
  return x;
}

ConservedField build_initial_condition(const ScenarioConfig& cfg) {
  validate(cfg);
  ModelParams params = cfg.params();
  Grid g = cfg.grid();

  ConservedField field;
  field.time = 0;
  field.cells.resize(static_cast<size_t>(g.cells));
  for (int j = 0; j < g.cells; ++j) {
    double center = (j + 0.5) * g.dx();
    double total = 0;
    for (const auto& s : cfg.initial)
      if (center >= s.x_from && center < s.x_to) total = s.rho;
    PrimitiveCell w;
    w.rho = split_density(total, params.mix);
    for (auto c : kVehicleClasses) w.v[c] = equilibrium_velocity(c, w.rho[c], params);
    field.cells[static_cast<size_t>(j)] = primitive_to_conserved(w, params);
  }
  return field;
}

}  // namespace mixflow
