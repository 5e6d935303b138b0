#pragma once

#include <vector>

#include "mixflow/riemann.hpp"

namespace mixflow {

// Uniform periodic mesh of cells_count cells covering [0, length].
struct Grid {
  double length = 0;
  int cells = 0;

  double dx() const { return length / cells; }
};

void validate(const Grid& g);

struct TimeControls {
  double dt = 0;
  double duration = 0;
  double cfl_max = 1.0;
  bool adaptive_dt = false;
  std::vector<double> snapshot_times;
};

void validate(const TimeControls& t);

enum class SourceMode { off, at_n, at_star };

SourceMode source_mode_from_string(const std::string& s);
std::string to_string(SourceMode m);

struct SolverOptions {
  EntropyFixMode entropy_fix = EntropyFixMode::harten_hyman;
  SourceMode source = SourceMode::at_n;
};

struct ConservedField {
  std::vector<ConservedCell> cells;
  double time = 0;
};

// Wrapping index view over the ring of cells.
struct PeriodicView {
  const ConservedField& field;

  const ConservedCell& operator[](long j) const {
    long n = static_cast<long>(field.cells.size());
    long w = ((j % n) + n) % n;
    return field.cells[static_cast<size_t>(w)];
  }
};

inline PeriodicView apply_periodic_bc(const ConservedField& f) { return PeriodicView{f}; }

double max_wave_speed(const ConservedField& f, const ModelParams& p);

double cfl_number(const ConservedField& f, double dt, double dx, const ModelParams& p);

// One flux per interface; entry j is the interface between cells j and j+1,
// entry cells-1 wraps to the (last, first) pair and is reused as the left
// boundary of cell 0.
std::vector<Vec4> interface_fluxes(const ConservedField& f, const ModelParams& p,
                                   EntropyFixMode mode);

// Conservative advection update. Rejects the step if the CFL number exceeds
// cfl_max; a negative post-update density is reported as a blow-up with the
// offending cell index.
ConservedField homogeneous_step(const ConservedField& f, double dt, const Grid& g,
                                const ModelParams& p, const SolverOptions& opt,
                                double cfl_max);

// Advection followed by the relaxation source, applied to X only. The source
// coefficients come from the step-start state by default or from the
// post-advection state under SourceMode::at_star.
ConservedField step(const ConservedField& f, double dt, const Grid& g, const ModelParams& p,
                    const SolverOptions& opt, double cfl_max);

struct ScenarioConfig;
struct SimulationTrace;

// Runs a configured scenario to its duration, collecting snapshots and
// per-step diagnostics. Deterministic; a blow-up ends the run early with the
// partial trace and the failing step recorded.
SimulationTrace run_scenario(const ScenarioConfig& cfg);

}  // namespace mixflow
