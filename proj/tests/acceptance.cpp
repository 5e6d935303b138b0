// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
// with the measured quantities; the process exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mixflow/integrator.hpp"
#include "mixflow/io.hpp"
#include "mixflow/riemann.hpp"
#include "mixflow/scenario.hpp"
#include "mixflow/stability.hpp"
#include "test_helpers.hpp"

using namespace mixflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

fs::path config_path(const char* name) {
  return fs::path(MIXFLOW_SOURCE_DIR) / "configs" / name;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1. linearization properties over random state pairs ------------------

Outcome roe_property_suite() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = testing::reference_params(0.2);
  testing::StateSampler sampler(20260813);

  bool real_ok = true;
  double min_det = 1e300, consistency = 0, reconstruction = 0;
  double ratio_lo = 1e300, ratio_hi = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ConservedCell ul = sampler.draw(p);
    ConservedCell ur = sampler.draw(p);
    RoePropertyReport r = verify_roe_properties(ul, ur, p);
    real_ok = real_ok && r.lambdas_real;
    min_det = std::min(min_det, std::abs(r.eigenvector_det));
    consistency = std::max(consistency, r.consistency_error);
    reconstruction = std::max(reconstruction, r.reconstruction_error);
    ratio_lo = std::min(ratio_lo, r.halving_ratio);
    ratio_hi = std::max(ratio_hi, r.halving_ratio);
  }

  // Same sweep with unit pressure exponents, where the flux difference is
  // asked to match the linearization to rounding.
  PerClass<VehicleClassSpec> unit = testing::reference_classes();
  unit.motorcycle.gamma = 1.0;
  unit.car.gamma = 1.0;
  auto p1 = ModelParams::make(unit, MixSpec{0.2, 12.0});
  testing::StateSampler sampler1(20260813);
  double unit_residual = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ConservedCell ul = sampler1.draw(p1);
    ConservedCell ur = sampler1.draw(p1);
    unit_residual = std::max(unit_residual,
                             verify_roe_properties(ul, ur, p1).conservation_residual);
  }

  double secs = elapsed_s(t0);
  bool pass = real_ok && min_det > 1e-12 && consistency <= 1e-12 &&
              reconstruction <= 1e-10 && ratio_lo >= 3.5 && ratio_hi <= 4.5 &&
              unit_residual <= 1e-10 && secs < 5.0;
  std::string detail = "real spectra " + std::string(real_ok ? "ok" : "VIOLATED") +
                       ", min|det|=" + num(min_det) + ", consistency=" + num(consistency) +
                       ", reconstruction=" + num(reconstruction) + ", halving ratio [" +
                       num(ratio_lo) + "," + num(ratio_hi) +
                       "], gamma=1 residual=" + num(unit_residual) + " (limit 1e-10), " +
                       num(secs) + "s (limit 5s)";
  return {pass, detail};
}

// --- 2. jacobian vs finite differences ------------------------------------

Outcome jacobian_suite() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = testing::reference_params(0.2);
  testing::StateSampler sampler(7);

  double max_rel = 0, max_pair = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ConservedCell u = sampler.draw(p);
    Matrix4 a = jacobian(u, p);
    Vec4 base = to_vec4(u);
    for (size_t col = 0; col < 4; ++col) {
      double h = 1e-7 * std::max(1.0, std::abs(base[col]));
      Vec4 up = base, dn = base;
      up[col] += h;
      dn[col] -= h;
      Vec4 fu = physical_flux(cell_from_vec4(up), p);
      Vec4 fd = physical_flux(cell_from_vec4(dn), p);
      for (size_t row = 0; row < 4; ++row) {
        double est = (fu[row] - fd[row]) / (2 * h);
        double rel = std::abs(a(static_cast<int>(row), static_cast<int>(col)) - est) /
                     std::max(1.0, std::abs(a(static_cast<int>(row), static_cast<int>(col))));
        max_rel = std::max(max_rel, rel);
      }
    }

    EigenStructure es = eigenstructure(u, p);
    for (size_t k = 0; k < 4; ++k)
      max_pair = std::max(max_pair, inf_norm(a.apply(es.r[k]) - es.lambda[k] * es.r[k]));
  }

  double secs = elapsed_s(t0);
  bool pass = max_rel <= 1e-6 && max_pair <= 1e-10 && secs < 1.0;
  return {pass, "fd relative error=" + num(max_rel) + ", eigenpair residual=" + num(max_pair) +
                    ", " + num(secs) + "s (limit 1s)"};
}

// --- 3. exact mass conservation on the ring -------------------------------

PerClass<double> class_totals(const Snapshot& s) {
  PerClass<double> sum{0, 0};
  for (const auto& cell : s.cells)
    for (auto c : kVehicleClasses) sum[c] += cell.rho[c];
  return sum;
}

double conservation_drift(ScenarioConfig cfg, SourceMode source) {
  cfg.solver.source = source;
  cfg.time.snapshot_times = {0, cfg.time.duration};
  cfg.output.svg = false;
  SimulationTrace t = run_scenario(cfg);
  if (!t.completed || t.snapshots.size() != 2) return 1e300;
  PerClass<double> a = class_totals(t.snapshots.front());
  PerClass<double> b = class_totals(t.snapshots.back());
  double drift = 0;
  for (auto c : kVehicleClasses) drift = std::max(drift, std::abs(b[c] - a[c]) / a[c]);
  return drift;
}

Outcome conservation_suite() {
  auto t0 = std::chrono::steady_clock::now();
  ScenarioConfig cfg = load_scenario(config_path("freeway_d20.json"));
  double off = conservation_drift(cfg, SourceMode::off);
  double on = conservation_drift(cfg, SourceMode::at_n);
  double secs = elapsed_s(t0);
  bool pass = off <= 1e-12 && on <= 1e-12 && secs < 1.0;
  return {pass, "relative drift source-off=" + num(off) + ", source-on=" + num(on) + ", " +
                    num(secs) + "s (limit 1s)"};
}

// --- 4/5/6. scenario envelope, relaxed end state, cfl ceiling -------------

struct RunSummary {
  std::string name;
  SimulationTrace trace;
};

std::vector<RunSummary> run_all_scenarios() {
  std::vector<RunSummary> out;
  for (const char* name : {"freeway_d20.json", "freeway_d90.json", "congested_d20.json",
                           "congested_d90.json"}) {
    ScenarioConfig cfg = load_scenario(config_path(name));
    cfg.output.svg = false;
    out.push_back({name, run_scenario(cfg)});
  }
  return out;
}

Outcome bounds_suite(const std::vector<RunSummary>& runs) {
  bool pass = true;
  std::string worst;
  double rho_lo = 1e300, rho_hi = -1e300, v_lo = 1e300, excess = -1e300;
  for (const auto& run : runs) {
    if (!run.trace.completed) return {false, run.name + " did not complete: " + run.trace.error};
    const auto& cls = run.trace.config.classes;
    for (const auto& d : run.trace.steps) {
      rho_lo = std::min(rho_lo, d.rho_total_min);
      rho_hi = std::max(rho_hi, d.rho_total_max);
      for (auto c : kVehicleClasses) {
        v_lo = std::min(v_lo, d.v_min[c]);
        excess = std::max(excess, d.v_max[c] - cls[c].v_max);
      }
    }
  }
  pass = rho_lo >= 0 && rho_hi <= 1.0 && v_lo >= 0 && excess <= 1e-9;
  return {pass, "rho_total in [" + num(rho_lo) + "," + num(rho_hi) + "], min v=" + num(v_lo) +
                    ", max v-v_max=" + num(excess) + " (limit 1e-9)"};
}

Outcome relaxation_suite(const std::vector<RunSummary>& runs) {
  bool pass = true;
  std::string detail;
  for (const auto& run : runs) {
    if (run.name.find("freeway") == std::string::npos) continue;
    const SimulationTrace& t = run.trace;
    if (!t.completed || t.snapshots.empty()) return {false, run.name + " incomplete"};
    const Snapshot& last = t.snapshots.back();
    PerClass<double> vmin{1e300, 1e300};
    for (const auto& cell : last.cells)
      for (auto c : kVehicleClasses) vmin[c] = std::min(vmin[c], cell.v[c]);
    double floor_m = 0.9 * t.config.classes.motorcycle.v_max;
    double floor_c = 0.9 * t.config.classes.car.v_max;
    pass = pass && vmin.motorcycle >= floor_m && vmin.car >= floor_c;
    if (!detail.empty()) detail += "; ";
    detail += run.name.substr(0, run.name.find('.')) + " min v_m=" + num(vmin.motorcycle) +
              " (floor " + num(floor_m) + "), min v_c=" + num(vmin.car) + " (floor " +
              num(floor_c) + ")";
  }
  return {pass, detail};
}

Outcome cfl_suite(const std::vector<RunSummary>& runs) {
  double ceiling = 13.8 * 0.05 / 5 + 1e-9;
  double max_nu = 0;
  for (const auto& run : runs) {
    if (run.name.find("freeway") == std::string::npos) continue;
    for (const auto& d : run.trace.steps) max_nu = std::max(max_nu, d.nu);
  }
  return {max_nu <= ceiling && max_nu > 0,
          "max cfl=" + num(max_nu) + " (ceiling " + num(ceiling) + ")"};
}

// --- 7. stability analysis over the reference grid ------------------------

Outcome stability_suite() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> deltas{0.2, 0.9};
  std::vector<double> rhos;
  for (int j = 0; j < 10; ++j) rhos.push_back(0.05 + j * (0.9 - 0.05) / 9);
  auto cls = testing::reference_classes();

  auto records = stability_map(deltas, rhos, default_wavenumbers(), cls, 12.0);
  size_t closed_stable = 0, damped = 0;
  double worst_re = -1e300;
  for (const auto& r : records) {
    closed_stable += r.stable;
    damped += r.max_re_r < 0;
    worst_re = std::max(worst_re, r.max_re_r);
  }

  double max_residual = 0;
  for (double d : deltas) {
    auto p = ModelParams::make(cls, MixSpec{d, 12.0});
    for (double rho : rhos)
      for (double k : default_wavenumbers())
        max_residual = std::max(
            max_residual, growth_rate_residual(PerturbationSpec::at_equilibrium(rho, k, p), p));
  }

  double secs = elapsed_s(t0);
  bool pass = closed_stable == records.size() && damped == records.size() &&
              max_residual <= 1e-10 && secs < 1.0;
  return {pass, "closed-form stable " + std::to_string(closed_stable) + "/" +
                    std::to_string(records.size()) + ", damped roots " + std::to_string(damped) +
                    "/" + std::to_string(records.size()) + ", max Re=" + num(worst_re) +
                    ", root residual=" + num(max_residual) + ", " + num(secs) + "s (limit 1s)"};
}

// --- 8. flow increases with the motorcycle share --------------------------

Outcome flow_monotonicity_suite() {
  auto cls = testing::reference_classes();
  double prev = -1e300;
  bool increasing = true;
  std::string values;
  for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    auto p = ModelParams::make(cls, MixSpec{delta, 12.0});
    auto rho = split_density(0.4, p.mix);
    double q = 0;
    for (auto c : kVehicleClasses) q += rho[c] * equilibrium_velocity(c, rho[c], p);
    increasing = increasing && q > prev;
    prev = q;
    if (!values.empty()) values += " < ";
    values += num(q);
  }
  return {increasing, "total flow at rho=0.4: " + values};
}

// --- 9. cars jam before motorcycles ----------------------------------------

double jam_density(VehicleClass c, const ModelParams& p) {
  auto stopped = [&](double rho_total) {
    return equilibrium_velocity(c, split_density(rho_total, p.mix)[c], p) <= 0;
  };
  double lo = 1e-9, hi = 1.0;
  while (!stopped(hi) && hi < 1e6) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (stopped(mid) ? hi : lo) = mid;
  }
  return hi;
}

Outcome jam_ordering_suite() {
  auto p = ModelParams::make(testing::reference_classes(), MixSpec{0.9, 12.0});
  double car = jam_density(VehicleClass::car, p);
  double moto = jam_density(VehicleClass::motorcycle, p);
  return {car < moto,
          "smallest stopping density: cars " + num(car) + ", motorcycles " + num(moto)};
}

// --- 10. determinism and lossless text formats -----------------------------

Outcome determinism_suite() {
  ScenarioConfig cfg = load_scenario(config_path("freeway_d20.json"));
  cfg.output.svg = false;

  fs::path base = fs::temp_directory_path() / "mixflow_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  RunArtifacts first = write_run_outputs(run_scenario(cfg), base / "run1");
  RunArtifacts second = write_run_outputs(run_scenario(cfg), base / "run2");
  if (first.snapshot_files.size() != second.snapshot_files.size() ||
      first.snapshot_files.empty())
    return {false, "snapshot file sets differ"};

  bool identical = true;
  for (size_t i = 0; i < first.snapshot_files.size(); ++i)
    identical = identical && slurp(first.snapshot_files[i]) == slurp(second.snapshot_files[i]);

  std::string once = serialize_scenario(cfg);
  bool config_lossless = serialize_scenario(parse_scenario(once)) == once;

  SnapshotCsv read = read_snapshot_csv(first.snapshot_files.back());
  Snapshot copy;
  copy.cells = read.cells;
  fs::path rewritten = base / "rewritten.csv";
  write_snapshot_csv(copy, read.x, rewritten);
  bool csv_lossless = slurp(rewritten) == slurp(first.snapshot_files.back());

  bool pass = identical && config_lossless && csv_lossless;
  return {pass, std::string("repeated runs byte-identical: ") + (identical ? "yes" : "NO") +
                    ", config round trip: " + (config_lossless ? "lossless" : "LOSSY") +
                    ", csv round trip: " + (csv_lossless ? "lossless" : "LOSSY")};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  criteria.emplace_back("roe linearization properties", roe_property_suite);
  criteria.emplace_back("jacobian and eigenstructure", jacobian_suite);
  criteria.emplace_back("ring mass conservation", conservation_suite);

  std::vector<RunSummary> runs = run_all_scenarios();
  criteria.emplace_back("state bounds in all scenarios", [&] { return bounds_suite(runs); });
  criteria.emplace_back("freeway relaxation to near free flow",
                        [&] { return relaxation_suite(runs); });
  criteria.emplace_back("cfl ceiling", [&] { return cfl_suite(runs); });
  criteria.emplace_back("linear stability verdicts", stability_suite);
  criteria.emplace_back("flow monotone in motorcycle share", flow_monotonicity_suite);
  criteria.emplace_back("jam ordering", jam_ordering_suite);
  criteria.emplace_back("determinism and lossless io", determinism_suite);

  int passed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o = criteria[i].second();
    passed += o.pass;
    std::printf("[%2zu] %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
