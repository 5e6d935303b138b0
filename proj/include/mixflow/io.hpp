#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixflow/scenario.hpp"
#include "mixflow/stability.hpp"

namespace mixflow {

// Shortest decimal form that reads back to the same double; "-0" collapses
// to "0". Used by every text artifact so repeated runs are byte-identical.
std::string format_double(double v);

// Columns x,rho_m,v_m,rho_c,v_c; LF line endings; rows ascend in x.
void write_snapshot_csv(const Snapshot& s, const std::vector<double>& x,
                        const std::filesystem::path& file);

struct SnapshotCsv {
  std::vector<double> x;
  std::vector<PrimitiveCell> cells;
};

SnapshotCsv read_snapshot_csv(const std::filesystem::path& file);

// Newline-delimited JSON; a "record" field tags each line as config,
// snapshot, diagnostics or status.
void write_trace(const SimulationTrace& t, const std::filesystem::path& file);
SimulationTrace read_trace(const std::filesystem::path& file);

std::string stability_csv(const std::vector<StabilityRecord>& records);

// Everything one simulate invocation leaves on disk.
struct RunArtifacts {
  std::filesystem::path trace_file;
  std::vector<std::filesystem::path> snapshot_files;
  std::vector<std::filesystem::path> plot_files;
};

RunArtifacts write_run_outputs(const SimulationTrace& t, const std::filesystem::path& out_dir);

}  // namespace mixflow
