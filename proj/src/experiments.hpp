#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "metrics.hpp"
#include "model.hpp"

namespace copd {

struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

struct RunOptions {
  // Scan weights, counts and fraction sums after every MC step and throw
  // InvariantError on the first violation.
  bool invariant_checks = false;
  // Receives a copy of the end state when non-null.
  Grid* final_grid = nullptr;
};

// Builds the lattice from `seed`, executes config.steps MC steps recording a
// sample after each, captures snapshots at config.snapshot_steps and tail
// averages the last config.tail_window samples. Identical (config, seed)
// give identical results on every platform.
RunResult run_simulation(const SimConfig& config, uint64_t seed,
                         const RunOptions& options = {});

struct ReplicateBatch {
  std::vector<RunResult> runs;
  Aggregate aggregate;
};

// Replicate k runs with seed derive_seed(base_seed, point_index, k). Runs
// execute on up to `jobs` worker threads (0 = hardware concurrency); the
// batch content does not depend on the pool size.
ReplicateBatch run_replicates(const SimConfig& config, uint64_t base_seed,
                              uint32_t n, uint32_t jobs = 1,
                              uint64_t point_index = 0);

struct SweepAxis {
  std::string param;  // b | l | big_delta | small_delta | abstainer_fraction
  std::vector<double> values;
};

struct SweepSpec {
  SimConfig base;
  std::vector<SweepAxis> axes;  // cartesian product, lexicographic order
};

struct SweepOptions {
  std::filesystem::path out_dir;
  uint32_t jobs = 1;          // 0 = hardware concurrency
  bool write_outputs = true;  // per-replicate timeseries + snapshots
};

struct SweepRow {
  uint64_t point_index = 0;
  SimConfig config;     // resolved point config
  Aggregate aggregate;  // meaningful when error is empty
  std::string error;    // validation failure; the point was skipped
};

// Runs every grid point with base.replicates replicates each and writes
// summary.csv, manifest.csv and the per-replicate output tree under
// out_dir. Rows come back in point order regardless of execution order, and
// repeated invocations with the same base_seed produce byte-identical
// files. Invalid points become rows with a non-empty error field.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, uint64_t base_seed,
                                const SweepOptions& options);

// Applies one axis value; abstainer_fraction also forces the seeding mode
// to biased_fraction. Throws std::invalid_argument on unknown names.
void apply_sweep_value(SimConfig& config, const std::string& param,
                       double value);

const std::vector<std::string>& sweep_parameter_names();

// A strategy is present when its tail fraction exceeds `threshold`. Labels:
// C-dominant / D-dominant / A-dominant when alone, else CD / CA / DA / CDA.
std::string classify_fractions(const std::array<double, 3>& fractions,
                               double threshold = 0.01);
std::string classify_outcome(const RunResult& result, double threshold = 0.01);

// Relative per-replicate directory, e.g. "point_0003/rep_01".
std::filesystem::path replicate_dir(uint64_t point_index, uint32_t replicate);

std::string summary_csv(const std::vector<SweepRow>& rows);
inline constexpr char kSummaryHeader[] =
    "b,l,big_delta,small_delta,seeding,mean_rho_c,sd_rho_c,mean_rho_d,"
    "sd_rho_d,mean_rho_a,sd_rho_a,replicates,error";

}  // namespace copd
