#include "mixflow/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixflow/svg_plot.hpp"

namespace mixflow {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

json per_class_json(const PerClass<double>& v) {
  return json{{"motorcycle", v.motorcycle}, {"car", v.car}};
}

PerClass<double> per_class_from(const json& v) {
  return {v.at("motorcycle").get<double>(), v.at("car").get<double>()};
}

std::vector<double> column(const std::vector<PrimitiveCell>& cells, VehicleClass c,
                           bool velocity) {
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& w : cells) out.push_back(velocity ? w.v[c] : w.rho[c]);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0) return "0";  // covers -0
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_snapshot_csv(const Snapshot& s, const std::vector<double>& x,
                        const std::filesystem::path& file) {
  if (x.size() != s.cells.size())
    throw std::invalid_argument("snapshot and coordinate sizes differ");
  auto out = open_out(file);
  out << "x,rho_m,v_m,rho_c,v_c\n";
  for (size_t j = 0; j < x.size(); ++j) {
    const auto& w = s.cells[j];
    out << format_double(x[j]) << ',' << format_double(w.rho.motorcycle) << ','
        << format_double(w.v.motorcycle) << ',' << format_double(w.rho.car) << ','
        << format_double(w.v.car) << '\n';
  }
}

SnapshotCsv read_snapshot_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,rho_m,v_m,rho_c,v_c")
    throw std::runtime_error(file.string() + ": unexpected snapshot header");
  SnapshotCsv csv;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 5> vals{};
    size_t pos = 0;
    for (size_t i = 0; i < 5; ++i) {
      size_t comma = i < 4 ? line.find(',', pos) : line.size();
      if (comma == std::string::npos)
        throw std::runtime_error(file.string() + ": short row");
      vals[i] = std::stod(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    csv.x.push_back(vals[0]);
    PrimitiveCell w;
    w.rho = {vals[1], vals[3]};
    w.v = {vals[2], vals[4]};
    csv.cells.push_back(w);
  }
  return csv;
}

void write_trace(const SimulationTrace& t, const std::filesystem::path& file) {
  auto out = open_out(file);

  json config_line{{"record", "config"},
                   {"config", json::parse(serialize_scenario(t.config))}};
  out << config_line.dump() << '\n';

  for (const auto& s : t.snapshots) {
    json line{{"record", "snapshot"},
              {"step", s.step},
              {"time", s.time},
              {"rho_m", column(s.cells, VehicleClass::motorcycle, false)},
              {"v_m", column(s.cells, VehicleClass::motorcycle, true)},
              {"rho_c", column(s.cells, VehicleClass::car, false)},
              {"v_c", column(s.cells, VehicleClass::car, true)}};
    out << line.dump() << '\n';
  }

  for (const auto& d : t.steps) {
    json line{{"record", "diagnostics"}, {"step", d.step},
              {"time", d.time},          {"dt", d.dt},
              {"nu", d.nu},              {"rho_total_min", d.rho_total_min},
              {"rho_total_max", d.rho_total_max},
              {"v_min", per_class_json(d.v_min)},
              {"v_max", per_class_json(d.v_max)}};
    out << line.dump() << '\n';
  }

  json status{{"record", "status"},
              {"completed", t.completed},
              {"failed_step", t.failed_step},
              {"error", t.error}};
  out << status.dump() << '\n';
}

SimulationTrace read_trace(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());

  SimulationTrace t;
  bool have_config = false;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::string kind = rec.at("record").get<std::string>();
    if (kind == "config") {
      t.config = parse_scenario(rec.at("config").dump());
      t.x = report_coordinates(t.config);
      have_config = true;
    } else if (kind == "snapshot") {
      Snapshot s;
      s.step = rec.at("step").get<int>();
      s.time = rec.at("time").get<double>();
      auto rho_m = rec.at("rho_m").get<std::vector<double>>();
      auto v_m = rec.at("v_m").get<std::vector<double>>();
      auto rho_c = rec.at("rho_c").get<std::vector<double>>();
      auto v_c = rec.at("v_c").get<std::vector<double>>();
      for (size_t j = 0; j < rho_m.size(); ++j) {
        PrimitiveCell w;
        w.rho = {rho_m[j], rho_c[j]};
        w.v = {v_m[j], v_c[j]};
        s.cells.push_back(w);
      }
      t.snapshots.push_back(std::move(s));
    } else if (kind == "diagnostics") {
      StepDiagnostics d;
      d.step = rec.at("step").get<int>();
      d.time = rec.at("time").get<double>();
      d.dt = rec.at("dt").get<double>();
      d.nu = rec.at("nu").get<double>();
      d.rho_total_min = rec.at("rho_total_min").get<double>();
      d.rho_total_max = rec.at("rho_total_max").get<double>();
      d.v_min = per_class_from(rec.at("v_min"));
      d.v_max = per_class_from(rec.at("v_max"));
      t.steps.push_back(d);
    } else if (kind == "status") {
      t.completed = rec.at("completed").get<bool>();
      t.failed_step = rec.at("failed_step").get<int>();
      t.error = rec.at("error").get<std::string>();
    } else {
      throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                               ": unknown record kind '" + kind + "'");
    }
  }
  if (!have_config) throw std::runtime_error(file.string() + ": trace has no config record");
  return t;
}

std::string stability_csv(const std::vector<StabilityRecord>& records) {
  std::ostringstream out;
  out << "delta,rho0,k,class,lhs,rhs,margin,max_re_r,stable\n";
  for (const auto& r : records) {
    out << format_double(r.delta) << ',' << format_double(r.rho0) << ',' << format_double(r.k)
        << ',' << to_string(r.cls) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
        << ',' << format_double(r.margin) << ',' << format_double(r.max_re_r) << ','
        << (r.stable ? "true" : "false") << '\n';
  }
  return out.str();
}

RunArtifacts write_run_outputs(const SimulationTrace& t, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunArtifacts artifacts;

  artifacts.trace_file = out_dir / "trace.ndjson";
  write_trace(t, artifacts.trace_file);

  if (t.config.output.csv) {
    for (const auto& s : t.snapshots) {
      auto file = out_dir / ("snapshot_t" + format_double(s.time) + ".csv");
      write_snapshot_csv(s, t.x, file);
      artifacts.snapshot_files.push_back(file);
    }
  }
  if (t.config.output.svg && !t.snapshots.empty())
    artifacts.plot_files = render_plots(t, out_dir / "plots");
  return artifacts;
}

}  // namespace mixflow
