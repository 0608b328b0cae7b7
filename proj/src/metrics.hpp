#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "model.hpp"

namespace copd {

struct WindowError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MixedConfigsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FractionSample {
  uint64_t step = 0;
  double rho_c = 0.0;
  double rho_d = 0.0;
  double rho_a = 0.0;
  double mean_w = 1.0;  // diagnostic extra column
};

struct RunResult {
  std::vector<FractionSample> series;       // one per MC step, plus step 0
  std::array<double, 3> final_fractions{};  // tail average (C, D, A)
  std::map<uint64_t, std::vector<Strategy>> snapshots;
  uint32_t snapshot_side = 0;
  std::string config_digest;
  uint64_t seed = 0;
};

struct Aggregate {
  std::array<double, 3> mean{};
  std::array<double, 3> sd{};  // sample standard deviation; 0 for n=1
  uint32_t replicates = 0;
};

// Exact integer strategy counts divided by N. mean_w is left at its default;
// the run loop fills it.
FractionSample record_fractions(const Grid& grid, uint64_t step);

// Componentwise mean of the last `window` samples. Throws WindowError when
// window is 0 or exceeds the series length.
std::array<double, 3> tail_average(std::span<const FractionSample> series,
                                   uint64_t window);

// Componentwise mean and sample standard deviation of final_fractions.
// Requires at least one result and identical config digests.
Aggregate aggregate_replicates(std::span<const RunResult> results);
Aggregate aggregate_fractions(std::span<const std::array<double, 3>> finals);

enum class SnapshotFormat : uint8_t { text_grid = 0, portable_pixmap = 1 };

// text_grid: side lines of side characters from {C,D,A}, each newline
// terminated. portable_pixmap: binary P6, one pixel per cell, cooperators
// blue (0,0,255), defectors red (255,0,0), abstainers green (0,255,0).
std::string export_snapshot(std::span<const Strategy> strategies,
                            uint32_t side, SnapshotFormat format);
std::string export_snapshot(const Grid& grid, SnapshotFormat format);

// Inverse of the text_grid export. Throws ParseError-like IoError on
// malformed input; side_out receives the grid side when non-null.
std::vector<Strategy> parse_snapshot_text(const std::string& text,
                                          uint32_t* side_out = nullptr);

inline constexpr char kTimeseriesHeader[] = "step,rho_c,rho_d,rho_a,mean_w";

// Header plus one row per sample, fractions with six decimals.
std::string timeseries_csv(const RunResult& result);
void write_timeseries_csv(const RunResult& result,
                          const std::filesystem::path& path);

}  // namespace copd
