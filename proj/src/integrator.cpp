#include "mixflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixflow/scenario.hpp"

namespace mixflow {

void validate(const Grid& g) {
  if (!(std::isfinite(g.length) && g.length > 0))
    throw std::invalid_argument("road length must be positive");
  if (g.cells < 4) throw std::invalid_argument("grid needs at least 4 cells");
}

void validate(const TimeControls& t) {
  if (!(std::isfinite(t.dt) && t.dt > 0)) throw std::invalid_argument("dt must be positive");
  if (!(std::isfinite(t.duration) && t.duration > 0))
    throw std::invalid_argument("duration must be positive");
  if (!(t.cfl_max > 0 && t.cfl_max <= 1))
    throw std::invalid_argument("cfl_max must lie in (0, 1]");
  for (double s : t.snapshot_times)
    if (!(std::isfinite(s) && s >= 0 && s <= t.duration))
      throw std::invalid_argument("snapshot times must lie within [0, duration]");
}

SourceMode source_mode_from_string(const std::string& s) {
  if (s == "off") return SourceMode::off;
  if (s == "n") return SourceMode::at_n;
  if (s == "star") return SourceMode::at_star;
  throw ConfigError("unknown source mode '" + s + "' (expected off, n or star)");
}

std::string to_string(SourceMode m) {
  switch (m) {
    case SourceMode::off: return "off";
    case SourceMode::at_n: return "n";
    case SourceMode::at_star: return "star";
  }
  return "";
}

double max_wave_speed(const ConservedField& f, const ModelParams& p) {
  double s = 0;
  for (const auto& cell : f.cells) {
    for (auto c : kVehicleClasses) {
      double rho = cell.rho[c];
      if (rho < kVacuumDensity) continue;
      double gamma = p.cls[c].gamma;
      double pr = pressure(rho, p.psi[c], gamma);
      double v = cell.x[c] / rho - pr;
      s = std::max(s, std::max(std::abs(v), std::abs(v - gamma * pr)));
    }
  }
  return s;
}

double cfl_number(const ConservedField& f, double dt, double dx, const ModelParams& p) {
  return dt / dx * max_wave_speed(f, p);
}

std::vector<Vec4> interface_fluxes(const ConservedField& f, const ModelParams& p,
                                   EntropyFixMode mode) {
  auto ring = apply_periodic_bc(f);
  long n = static_cast<long>(f.cells.size());
  std::vector<Vec4> fluxes(static_cast<size_t>(n));
  // Entry j sits between cells j and j+1; the wrap interface is computed
  // once and shared by both end cells.
  for (long j = 0; j < n; ++j)
    fluxes[static_cast<size_t>(j)] = numerical_flux(ring[j], ring[j + 1], p, mode);
  return fluxes;
}

ConservedField homogeneous_step(const ConservedField& f, double dt, const Grid& g,
                                const ModelParams& p, const SolverOptions& opt,
                                double cfl_max) {
  double nu = cfl_number(f, dt, g.dx(), p);
  if (nu > cfl_max)
    throw StepRejectedError("CFL number " + std::to_string(nu) + " exceeds limit " +
                            std::to_string(cfl_max));

  auto fluxes = interface_fluxes(f, p, opt.entropy_fix);
  long n = static_cast<long>(f.cells.size());
  double lam = dt / g.dx();

  ConservedField out;
  out.time = f.time + dt;
  out.cells.resize(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j) {
    const Vec4& right = fluxes[static_cast<size_t>(j)];
    const Vec4& left = fluxes[static_cast<size_t>((j + n - 1) % n)];
    Vec4 u = to_vec4(f.cells[static_cast<size_t>(j)]) - lam * (right - left);
    for (auto c : kVehicleClasses) {
      double rho = u[c == VehicleClass::motorcycle ? 0 : 2];
      if (!std::isfinite(rho) || rho < -kVacuumDensity)
        throw NonphysicalStateError("density blow-up in cell " + std::to_string(j) +
                                        " (" + to_string(c) + ")",
                                    static_cast<int>(j));
    }
    out.cells[static_cast<size_t>(j)] = cell_from_vec4(u);
  }
  return out;
}

ConservedField step(const ConservedField& f, double dt, const Grid& g, const ModelParams& p,
                    const SolverOptions& opt, double cfl_max) {
  ConservedField star = homogeneous_step(f, dt, g, p, opt, cfl_max);
  if (opt.source == SourceMode::off) return star;

  const ConservedField& eval = opt.source == SourceMode::at_n ? f : star;
  long n = static_cast<long>(f.cells.size());
  for (long j = 0; j < n; ++j) {
    PrimitiveCell w;
    try {
      w = conserved_to_primitive(eval.cells[static_cast<size_t>(j)], p);
    } catch (const NonphysicalStateError& e) {
      throw NonphysicalStateError(std::string(e.what()) + " in cell " + std::to_string(j),
                                  static_cast<int>(j));
    }
    Vec4 s = relaxation_source(w, p);
    auto& cell = star.cells[static_cast<size_t>(j)];
    cell.x.motorcycle += dt * s[1];
    cell.x.car += dt * s[3];
  }
  return star;
}

SimulationTrace run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  ModelParams params = cfg.params();
  Grid grid = cfg.grid();

  SimulationTrace trace;
  trace.config = cfg;
  trace.x = report_coordinates(cfg);

  ConservedField field = build_initial_condition(cfg);

  auto primitives = [&](const ConservedField& f) {
    std::vector<PrimitiveCell> cells;
    cells.reserve(f.cells.size());
    for (const auto& u : f.cells) cells.push_back(conserved_to_primitive(u, params));
    return cells;
  };

  auto diagnostics = [&](const ConservedField& f, int step_index, double dt_used,
                         double nu) {
    StepDiagnostics d;
    d.step = step_index;
    d.time = f.time;
    d.dt = dt_used;
    d.nu = nu;
    d.rho_total_min = std::numeric_limits<double>::infinity();
    d.rho_total_max = -std::numeric_limits<double>::infinity();
    for (auto c : kVehicleClasses) {
      d.v_min[c] = std::numeric_limits<double>::infinity();
      d.v_max[c] = -std::numeric_limits<double>::infinity();
    }
    for (const auto& u : f.cells) {
      PrimitiveCell w = conserved_to_primitive(u, params);
      double total = w.rho.motorcycle + w.rho.car;
      d.rho_total_min = std::min(d.rho_total_min, total);
      d.rho_total_max = std::max(d.rho_total_max, total);
      for (auto c : kVehicleClasses) {
        d.v_min[c] = std::min(d.v_min[c], w.v[c]);
        d.v_max[c] = std::max(d.v_max[c], w.v[c]);
      }
    }
    return d;
  };

  // Snapshot times resolve to the nearest completed step.
  std::vector<std::pair<int, double>> wanted;
  for (double t : cfg.time.snapshot_times)
    wanted.emplace_back(static_cast<int>(std::llround(t / cfg.time.dt)), t);
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               wanted.end());

  auto record_snapshot = [&](const ConservedField& f, int step_index) {
    for (const auto& [idx, t] : wanted)
      if (idx == step_index) {
        trace.snapshots.push_back(Snapshot{step_index, f.time, primitives(f)});
        return;
      }
  };

  int total_steps = static_cast<int>(std::llround(cfg.time.duration / cfg.time.dt));
  double dx = grid.dx();

  try {
    double dt0 = cfg.time.dt;
    if (cfg.time.adaptive_dt) {
      dt0 = std::min(dt0, cfg.time.duration);
      double speed = max_wave_speed(field, params);
      if (speed > 0) dt0 = std::min(dt0, cfg.time.cfl_max * dx / speed);
    }
    trace.steps.push_back(diagnostics(field, 0, dt0, cfl_number(field, dt0, dx, params)));
    record_snapshot(field, 0);

    if (cfg.time.adaptive_dt) {
      std::vector<double> pending;
      for (const auto& [idx, t] : wanted)
        if (idx > 0) pending.push_back(t);
      std::sort(pending.begin(), pending.end());
      size_t next = 0;
      int n = 0;
      const double t_end = cfg.time.duration;
      while (field.time < t_end * (1 - 1e-12)) {
        double dt = std::min(cfg.time.dt, t_end - field.time);
        double speed = max_wave_speed(field, params);
        if (speed > 0) dt = std::min(dt, cfg.time.cfl_max * dx / speed);
        double nu = cfl_number(field, dt, dx, params);
        field = step(field, dt, grid, params, cfg.solver, cfg.time.cfl_max);
        ++n;
        trace.steps.push_back(diagnostics(field, n, dt, nu));
        while (next < pending.size() && field.time >= pending[next] - dt / 2) {
          trace.snapshots.push_back(Snapshot{n, field.time, primitives(field)});
          ++next;
        }
      }
    } else {
      for (int n = 1; n <= total_steps; ++n) {
        double nu = cfl_number(field, cfg.time.dt, dx, params);
        field = step(field, cfg.time.dt, grid, params, cfg.solver, cfg.time.cfl_max);
        // One multiplication per step keeps snapshot times free of summation
        // drift (1200 * 0.05 is exactly 60, a sum of 0.05s is not).
        field.time = n * cfg.time.dt;
        trace.steps.push_back(diagnostics(field, n, cfg.time.dt, nu));
        record_snapshot(field, n);
      }
    }
    trace.completed = true;
  } catch (const std::exception& e) {
    trace.completed = false;
    trace.failed_step = static_cast<int>(trace.steps.size());
    trace.error = e.what();
  }
  return trace;
}

}  // namespace mixflow
