#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "config_file.hpp"
#include "rng.hpp"

namespace copd {

namespace {

uint32_t resolve_jobs(uint32_t jobs) {
  if (jobs != 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs tasks [0, count) on up to `jobs` threads. The first exception, by
// task index, is rethrown after all workers finish.
template <typename Fn>
void parallel_for(uint64_t count, uint32_t jobs, Fn&& fn) {
  const uint32_t workers =
      static_cast<uint32_t>(std::min<uint64_t>(resolve_jobs(jobs), count));
  if (workers <= 1) {
    for (uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (uint32_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const uint64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_invariants(const Grid& grid, const FractionSample& sample) {
  const double lo = grid.weight_floor();
  const double hi = grid.weight_ceil();
  for (double w : grid.edge_values())
    if (!(w >= lo && w <= hi))
      throw InvariantError("edge weight " + format_double(w) +
                           " escaped [" + format_double(lo) + ", " +
                           format_double(hi) + "]");
  const auto counts = grid.strategy_counts();
  if (counts[0] + counts[1] + counts[2] != grid.cells())
    throw InvariantError("strategy counts do not sum to the population");
  const double sum = sample.rho_c + sample.rho_d + sample.rho_a;
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvariantError("fraction sum drifted from 1: " +
                         format_double(sum));
}

}  // namespace

RunResult run_simulation(const SimConfig& config, uint64_t seed,
                         const RunOptions& options) {
  require_valid(config);

  Rng rng(seed);
  Grid grid =
      Grid::build(config.side, config.coev.small_delta, config.seeding, rng);
  const Dynamics dynamics(config.game, config.coev);
  const std::set<uint64_t> snapshot_at(config.snapshot_steps.begin(),
                                       config.snapshot_steps.end());

  RunResult result;
  result.seed = seed;
  result.config_digest = config_digest(config);
  result.snapshot_side = config.side;
  result.series.reserve(config.steps + 1);

  auto record = [&](uint64_t step) {
    FractionSample sample = record_fractions(grid, step);
    sample.mean_w = grid.mean_weight();
    result.series.push_back(sample);
    if (snapshot_at.count(step))
      result.snapshots.emplace(
          step, std::vector<Strategy>(grid.strategies().begin(),
                                      grid.strategies().end()));
    if (options.invariant_checks) check_invariants(grid, sample);
  };

  record(0);
  for (uint64_t step = 1; step <= config.steps; ++step) {
    dynamics.mc_step(grid, rng);
    record(step);
  }

  result.final_fractions = tail_average(result.series, config.tail_window);
  if (options.final_grid) *options.final_grid = grid;
  return result;
}

ReplicateBatch run_replicates(const SimConfig& config, uint64_t base_seed,
                              uint32_t n, uint32_t jobs,
                              uint64_t point_index) {
  require_valid(config);
  if (n == 0) throw std::invalid_argument("replicate count must be positive");
  ReplicateBatch batch;
  batch.runs.resize(n);
  parallel_for(n, jobs, [&](uint64_t k) {
    batch.runs[k] =
        run_simulation(config, derive_seed(base_seed, point_index, k));
  });
  batch.aggregate = aggregate_replicates(batch.runs);
  return batch;
}

const std::vector<std::string>& sweep_parameter_names() {
  static const std::vector<std::string> names = {
      "b", "l", "big_delta", "small_delta", "abstainer_fraction"};
  return names;
}

void apply_sweep_value(SimConfig& config, const std::string& param,
                       double value) {
  if (param == "b") {
    config.game.b = value;
  } else if (param == "l") {
    config.game.l = value;
  } else if (param == "big_delta") {
    config.coev.big_delta = value;
  } else if (param == "small_delta") {
    config.coev.small_delta = value;
  } else if (param == "abstainer_fraction") {
    config.seeding.mode = SeedingMode::biased_fraction;
    config.seeding.abstainer_fraction = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + param + "'");
  }
}

std::filesystem::path replicate_dir(uint64_t point_index, uint32_t replicate) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "point_%04llu/rep_%02u",
                static_cast<unsigned long long>(point_index), replicate);
  return {buf};
}

namespace {

std::string stat6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string csv_quote(const std::string& raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out.good()) throw IoError("failed writing: " + path.string());
}

void write_snapshots(const RunResult& result,
                     const std::filesystem::path& dir) {
  if (result.snapshots.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& [step, strategies] : result.snapshots) {
    const std::string stem = "step_" + std::to_string(step);
    write_text_file(dir / (stem + ".txt"),
                    export_snapshot(strategies, result.snapshot_side,
                                    SnapshotFormat::text_grid));
    write_text_file(dir / (stem + ".ppm"),
                    export_snapshot(strategies, result.snapshot_side,
                                    SnapshotFormat::portable_pixmap));
  }
}

}  // namespace

std::string summary_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& row : rows) {
    const SimConfig& c = row.config;
    out += format_double(c.game.b) + ",";
    out += format_double(c.game.l) + ",";
    out += format_double(c.coev.big_delta) + ",";
    out += format_double(c.coev.small_delta) + ",";
    out += seeding_descriptor(c.seeding) + ",";
    if (row.error.empty()) {
      const Aggregate& a = row.aggregate;
      out += stat6(a.mean[0]) + "," + stat6(a.sd[0]) + ",";
      out += stat6(a.mean[1]) + "," + stat6(a.sd[1]) + ",";
      out += stat6(a.mean[2]) + "," + stat6(a.sd[2]) + ",";
      out += std::to_string(a.replicates) + ",";
    } else {
      out += ",,,,,,0,";
      out += csv_quote(row.error);
    }
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, uint64_t base_seed,
                                const SweepOptions& options) {
  for (const auto& axis : spec.axes) {
    if (axis.values.empty())
      throw std::invalid_argument("sweep axis '" + axis.param +
                                  "' has no values");
    // Reject unknown parameter names up front.
    SimConfig probe = spec.base;
    apply_sweep_value(probe, axis.param, axis.values.front());
  }

  uint64_t point_count = 1;
  for (const auto& axis : spec.axes) point_count *= axis.values.size();

  // Lexicographic point order: the last axis varies fastest.
  auto point_config = [&](uint64_t index) {
    SimConfig c = spec.base;
    uint64_t rest = index;
    for (size_t a = spec.axes.size(); a-- > 0;) {
      const auto& axis = spec.axes[a];
      apply_sweep_value(c, axis.param, axis.values[rest % axis.values.size()]);
      rest /= axis.values.size();
    }
    return c;
  };

  std::vector<SweepRow> rows(point_count);
  const uint32_t replicates = spec.base.replicates;
  std::vector<uint64_t> runnable;
  for (uint64_t p = 0; p < point_count; ++p) {
    rows[p].point_index = p;
    rows[p].config = point_config(p);
    const auto violations = validate_config(rows[p].config);
    if (!violations.empty())
      rows[p].error = violations_text(violations);
    else
      runnable.push_back(p);
  }

  if (!options.out_dir.empty())
    std::filesystem::create_directories(options.out_dir);

  // One task per (point, replicate); every task writes only its own files.
  std::vector<std::array<double, 3>> finals(runnable.size() *
                                            size_t(replicates));
  const uint64_t tasks = runnable.size() * uint64_t(replicates);
  std::vector<uint64_t> seeds(tasks);
  parallel_for(tasks, options.jobs, [&](uint64_t t) {
    const uint64_t point = runnable[t / replicates];
    const uint32_t rep = static_cast<uint32_t>(t % replicates);
    const uint64_t seed = derive_seed(base_seed, point, rep);
    seeds[t] = seed;
    RunResult result = run_simulation(rows[point].config, seed);
    finals[t] = result.final_fractions;
    if (options.write_outputs && !options.out_dir.empty()) {
      const auto dir = options.out_dir / replicate_dir(point, rep);
      std::filesystem::create_directories(dir);
      write_timeseries_csv(result, dir / "timeseries.csv");
      write_snapshots(result, dir / "snapshots");
    }
  });

  for (size_t i = 0; i < runnable.size(); ++i) {
    const uint64_t p = runnable[i];
    rows[p].aggregate = aggregate_fractions(
        std::span(finals).subspan(i * replicates, replicates));
  }

  if (!options.out_dir.empty()) {
    std::string manifest = "point_index,replicate,seed,path\n";
    for (size_t i = 0; i < runnable.size(); ++i) {
      const uint64_t p = runnable[i];
      for (uint32_t rep = 0; rep < replicates; ++rep) {
        manifest += std::to_string(p) + "," + std::to_string(rep) + "," +
                    std::to_string(seeds[i * replicates + rep]) + "," +
                    replicate_dir(p, rep).generic_string() + "\n";
      }
      std::filesystem::create_directories(options.out_dir /
                                          replicate_dir(p, 0).parent_path());
      write_text_file(
          options.out_dir / replicate_dir(p, 0).parent_path() / "config.txt",
          to_key_values(rows[p].config));
    }
    write_text_file(options.out_dir / "summary.csv", summary_csv(rows));
    write_text_file(options.out_dir / "manifest.csv", manifest);
  }
  return rows;
}

std::string classify_fractions(const std::array<double, 3>& fractions,
                               double threshold) {
  const char letters[3] = {'C', 'D', 'A'};
  std::string present;
  for (size_t k = 0; k < 3; ++k)
    if (fractions[k] > threshold) present += letters[k];
  if (present.size() == 1) return present + "-dominant";
  return present;
}

std::string classify_outcome(const RunResult& result, double threshold) {
  return classify_fractions(result.final_fractions, threshold);
}

}  // namespace copd
