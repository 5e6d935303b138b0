#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixflow/integrator.hpp"

namespace mixflow {

struct RoadConfig {
  double length = 0;
  double width = 0;
  int cells = 0;
};

// Piecewise-constant initial total density; [x_from, x_to) claims the cells
// whose centers it covers. Segments must tile the road without gaps or
// overlap.
struct InitialSegment {
  double x_from = 0;
  double x_to = 0;
  double rho = 0;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool svg = true;
  bool node_coordinates = false;
};

struct ScenarioConfig {
  RoadConfig road;
  TimeControls time;
  PerClass<VehicleClassSpec> classes;
  double delta = 0.5;
  std::vector<InitialSegment> initial;
  SolverOptions solver;
  OutputConfig output;

  MixSpec mix() const { return MixSpec{delta, road.width}; }
  ModelParams params() const { return ModelParams::make(classes, mix()); }
  Grid grid() const { return Grid{road.length, road.cells}; }
};

// Parse/serialize round-trips are lossless; unknown keys are rejected so a
// typo cannot silently fall back to a default. Parse failures report the
// byte offset, validation failures the dotted field path.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& file);
std::string serialize_scenario(const ScenarioConfig& cfg);
void validate(const ScenarioConfig& cfg);

// Cell positions used in every report: centers (j - 1/2) * dx, or nodes
// j * dx when output.node_coordinates is set.
std::vector<double> report_coordinates(const ScenarioConfig& cfg);

// Total density per cell from the segments, split by the mix, started at the
// equilibrium speeds.
ConservedField build_initial_condition(const ScenarioConfig& cfg);

struct Snapshot {
  int step = 0;
  double time = 0;
  std::vector<PrimitiveCell> cells;
};

struct StepDiagnostics {
  int step = 0;
  double time = 0;
  double dt = 0;
  double nu = 0;  // CFL number of the step that produced this state
  double rho_total_min = 0;
  double rho_total_max = 0;
  PerClass<double> v_min;
  PerClass<double> v_max;
};

struct SimulationTrace {
  ScenarioConfig config;
  std::vector<double> x;
  std::vector<Snapshot> snapshots;
  std::vector<StepDiagnostics> steps;
  bool completed = false;
  int failed_step = -1;
  std::string error;
};

}  // namespace mixflow
