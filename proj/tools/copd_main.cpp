// copd command line frontend. Talks to the simulator exclusively through
// the shared-library C API (copd/copd.h).

#include <copd/copd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

constexpr size_t kErrCap = 4096;

struct ConfigDeleter {
  void operator()(copd_config* c) const { copd_config_free(c); }
};
struct SweepDeleter {
  void operator()(copd_sweep* s) const { copd_sweep_free(s); }
};
using ConfigPtr = std::unique_ptr<copd_config, ConfigDeleter>;
using SweepPtr = std::unique_ptr<copd_sweep, SweepDeleter>;

// Exit codes: 0 ok, 1 validation/config error, 2 runtime or I/O error.
int exit_code_for(copd_status status) {
  switch (status) {
    case COPD_OK: return 0;
    case COPD_ERR_CONSTRAINT:
    case COPD_ERR_PARSE:
    case COPD_ERR_INVALID_ARGUMENT: return 1;
    default: return 2;
  }
}

int fail(copd_status status, const std::string& context, const char* err) {
  std::fprintf(stderr, "copd: %s: %s%s%s\n", context.c_str(),
               copd_status_str(status), err && err[0] ? ": " : "",
               err ? err : "");
  return exit_code_for(status);
}

// "0.1,0.2" or "0:1:0.25" (inclusive range) to a value list.
std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string item =
        comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    if (item.empty()) throw CLI::ValidationError("empty value in list");
    size_t c1 = item.find(':');
    if (c1 != std::string::npos) {
      size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos)
        throw CLI::ValidationError("range needs start:end:step");
      const double start = std::stod(item.substr(0, c1));
      const double end = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
      const double step = std::stod(item.substr(c2 + 1));
      if (step <= 0) throw CLI::ValidationError("range step must be positive");
      for (double v = start; v <= end + 1e-9; v += step) out.push_back(v);
    } else {
      out.push_back(std::stod(item));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct CommonFlags {
  std::string config_path;
  std::string profile = "desk";
  std::string out_dir = "copd_out";
  bool print_config = false;
  unsigned jobs = 0;  // 0 = hardware concurrency
  // Raw flag values, applied as config keys in a fixed order.
  std::vector<std::pair<std::string, std::string>> overrides;
  bool seed_given = false;
  std::string seeding;  // mode[:center|:random]
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_axes) {
  cmd->add_option("--config", flags.config_path, "Config file (key = value)");
  cmd->add_option("--profile", flags.profile, "Defaults profile")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_flag("--print-config", flags.print_config,
                "Echo the resolved configuration before running");
  cmd->add_option("--jobs", flags.jobs,
                  "Worker threads (default: hardware concurrency)");

  auto keyed = [cmd, &flags](const std::string& flag, const std::string& key,
                             const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&flags, key](const std::string& v) {
          flags.overrides.emplace_back(key, v);
        },
        help);
  };
  keyed("--side", "side", "Lattice side (N = side^2)");
  keyed("--steps", "steps", "MC steps");
  keyed("--tail-window", "tail_window", "Steps averaged for final fractions");
  keyed("--replicates", "replicates", "Independent runs per point");
  keyed("--snapshot-steps", "snapshot_steps",
        "Comma-separated MC steps to snapshot");
  cmd->add_option_function<std::string>(
      "--seed",
      [&flags](const std::string& v) {
        flags.overrides.emplace_back("rng_seed", v);
        flags.seed_given = true;
      },
      "Base RNG seed (fallback: config file, then COPD_SEED)");
  cmd->add_option("--seeding", flags.seeding,
                  "unbiased|biased_fraction|single_abstainer[:center|:random]"
                  "|all_abstainers_except_pair");

  if (with_axes) {
    const char* help = "Value, list (1.1,1.2) or range (1.1:1.9:0.1)";
    keyed("--b", "b", help);
    keyed("--l", "l", help);
    keyed("--big-delta", "big_delta", help);
    keyed("--small-delta", "small_delta", help);
    keyed("--abstainer-fraction", "seeding.abstainer_fraction", help);
  } else {
    keyed("--b", "b", "Temptation to defect, 1 < b < 2");
    keyed("--l", "l", "Loner's payoff, 0 <= l < 1");
    keyed("--big-delta", "big_delta", "Link weight step");
    keyed("--small-delta", "small_delta", "Weight heterogeneity bound");
    keyed("--abstainer-fraction", "seeding.abstainer_fraction",
          "Initial abstainer fraction (biased_fraction seeding)");
  }
}

// Profile defaults, then COPD_SEED, then the config file, then flags.
int resolve_config(const CommonFlags& flags, ConfigPtr& cfg,
                   std::vector<std::pair<std::string, std::vector<double>>>* axes) {
  cfg.reset(flags.profile == "paper" ? copd_config_new_paper()
                                     : copd_config_new());
  if (!cfg) return fail(COPD_ERR_INTERNAL, "allocating config", "");
  char err[kErrCap] = {0};

  if (const char* env = std::getenv("COPD_SEED"); env && env[0]) {
    copd_status st = copd_config_set(cfg.get(), "rng_seed", env, err, kErrCap);
    if (st != COPD_OK) return fail(st, "COPD_SEED", err);
  }
  if (!flags.config_path.empty()) {
    copd_status st = copd_config_load_file(cfg.get(), flags.config_path.c_str(),
                                           err, kErrCap);
    if (st != COPD_OK) return fail(st, "loading " + flags.config_path, err);
  }
  for (const auto& [key, value] : flags.overrides) {
    const bool sweepable =
        axes && (key == "b" || key == "l" || key == "big_delta" ||
                 key == "small_delta" || key == "seeding.abstainer_fraction");
    if (sweepable &&
        (value.find(',') != std::string::npos ||
         value.find(':') != std::string::npos)) {
      const std::string axis_name =
          key == "seeding.abstainer_fraction" ? "abstainer_fraction" : key;
      axes->emplace_back(axis_name, parse_value_list(value));
      continue;
    }
    copd_status st =
        copd_config_set(cfg.get(), key.c_str(), value.c_str(), err, kErrCap);
    if (st != COPD_OK) return fail(st, "--" + key, err);
  }
  if (!flags.seeding.empty()) {
    std::string mode = flags.seeding;
    std::string placement;
    if (size_t colon = mode.find(':'); colon != std::string::npos) {
      placement = mode.substr(colon + 1);
      mode = mode.substr(0, colon);
    }
    copd_status st =
        copd_config_set(cfg.get(), "seeding.mode", mode.c_str(), err, kErrCap);
    if (st != COPD_OK) return fail(st, "--seeding", err);
    if (!placement.empty()) {
      st = copd_config_set(cfg.get(), "seeding.placement", placement.c_str(),
                           err, kErrCap);
      if (st != COPD_OK) return fail(st, "--seeding", err);
    }
  }
  return 0;
}

int print_config(const copd_config* cfg) {
  size_t needed = 0;
  if (copd_config_to_string(cfg, nullptr, 0, &needed) != COPD_OK) return 2;
  std::string buf(needed, '\0');
  if (copd_config_to_string(cfg, buf.data(), buf.size(), nullptr) != COPD_OK)
    return 2;
  std::fputs(buf.c_str(), stdout);
  return 0;
}

uint64_t config_seed(const copd_config* cfg) {
  char buf[32] = {0};
  copd_config_get(cfg, "rng_seed", buf, sizeof(buf));
  return std::strtoull(buf, nullptr, 10);
}

int run_command(const CommonFlags& flags, bool is_sweep) {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  ConfigPtr cfg;
  if (int rc = resolve_config(flags, cfg, is_sweep ? &axes : nullptr); rc != 0)
    return rc;
  if (flags.print_config)
    if (int rc = print_config(cfg.get()); rc != 0) return rc;

  char err[kErrCap] = {0};
  copd_status st = copd_config_validate(cfg.get(), err, kErrCap);
  if (st != COPD_OK && axes.empty()) return fail(st, "configuration", err);

  SweepPtr sweep(copd_sweep_new(cfg.get()));
  if (!sweep) return fail(COPD_ERR_INTERNAL, "allocating sweep", "");
  for (const auto& [param, values] : axes) {
    st = copd_sweep_add_axis(sweep.get(), param.c_str(), values.data(),
                             values.size(), err, kErrCap);
    if (st != COPD_OK) return fail(st, "axis " + param, err);
  }

  uint64_t rows = 0;
  st = copd_sweep_run(sweep.get(), config_seed(cfg.get()),
                      flags.out_dir.c_str(), flags.jobs, 1, &rows, err,
                      kErrCap);
  if (st != COPD_OK) return fail(st, "running", err);

  if (is_sweep) {
    std::printf("wrote %llu rows to %s/summary.csv\n",
                static_cast<unsigned long long>(rows), flags.out_dir.c_str());
    return 0;
  }
  copd_aggregate agg{};
  st = copd_sweep_point_aggregate(sweep.get(), 0, &agg);
  if (st != COPD_OK) return fail(st, "collecting aggregate", err);
  char label[16] = {0};
  copd_classify_fractions(&agg.mean, 0.01, label, sizeof(label));
  std::printf(
      "rho_c=%.6f rho_d=%.6f rho_a=%.6f (%s, %u replicates) -> %s\n",
      agg.mean.rho_c, agg.mean.rho_d, agg.mean.rho_a, label, agg.replicates,
      flags.out_dir.c_str());
  return 0;
}

int states_command(const std::string& big_deltas,
                   const std::string& small_deltas) {
  std::vector<double> bds = parse_value_list(big_deltas);
  std::vector<double> sds = parse_value_list(small_deltas);
  std::printf("big_delta,small_delta,count,states\n");
  for (double bd : bds) {
    for (double sd : sds) {
      size_t count = 0;
      copd_status st = copd_reachable_weights(bd, sd, nullptr, 0, &count);
      if (st != COPD_OK) return fail(st, "states", "");
      std::vector<double> values(count);
      st = copd_reachable_weights(bd, sd, values.data(), values.size(), &count);
      if (st != COPD_OK) return fail(st, "states", "");
      std::string joined;
      for (size_t i = 0; i < count; ++i) {
        if (i) joined += ';';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", values[i]);
        joined += buf;
      }
      std::printf("%g,%g,%zu,%s\n", bd, sd, count, joined.c_str());
    }
  }
  return 0;
}

int validate_command(const CommonFlags& flags) {
  ConfigPtr cfg;
  if (int rc = resolve_config(flags, cfg, nullptr); rc != 0) return rc;
  if (flags.print_config)
    if (int rc = print_config(cfg.get()); rc != 0) return rc;
  char err[kErrCap] = {0};
  copd_status st = copd_config_validate(cfg.get(), err, kErrCap);
  if (st != COPD_OK) return fail(st, "configuration", err);
  std::printf("ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coevolutionary optional prisoner's dilemma simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand(
      "run", "Run one configuration (all replicates) and write its outputs");
  add_common_flags(run, run_flags, false);

  CommonFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the cartesian product of list-valued parameter flags");
  add_common_flags(sweep, sweep_flags, true);

  std::string states_bd = "0.2";
  std::string states_sd = "0.3";
  CLI::App* states = app.add_subcommand(
      "states", "Print reachable link-weight states per (big_delta, small_delta)");
  states->add_option("--big-delta", states_bd, "Value, list or range");
  states->add_option("--small-delta", states_sd, "Value, list or range");

  CommonFlags validate_flags;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a configuration against every model constraint");
  add_common_flags(validate, validate_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(run_flags, false);
    if (sweep->parsed()) return run_command(sweep_flags, true);
    if (states->parsed()) return states_command(states_bd, states_sd);
    if (validate->parsed()) return validate_command(validate_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "copd: %s\n", e.what());
    return 2;
  }
  return 0;
}
