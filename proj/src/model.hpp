#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace copd {

// Serialized codes are stable: C=0, D=1, A=2.
enum class Strategy : uint8_t { cooperator = 0, defector = 1, abstainer = 2 };

char strategy_char(Strategy s);

// Normalized weak-PD payoffs: T=b, R=1, P=S=0, plus the loner's payoff L=l.
struct GameParams {
  double b = 1.9;
  double l = 0.0;

  static constexpr double reward = 1.0;
  static constexpr double punishment = 0.0;
  static constexpr double sucker = 0.0;
  double temptation() const { return b; }

  bool operator==(const GameParams&) const = default;
};

// Link-weight step (big_delta) and heterogeneity bound (small_delta).
struct CoevParams {
  double big_delta = 0.0;
  double small_delta = 0.0;

  bool operator==(const CoevParams&) const = default;
};

enum class SeedingMode : uint8_t {
  unbiased = 0,
  biased_fraction = 1,
  single_abstainer = 2,
  all_abstainers_except_pair = 3,
};

enum class Placement : uint8_t { random_cell = 0, center_cell = 1 };

struct SeedingSpec {
  SeedingMode mode = SeedingMode::unbiased;
  double abstainer_fraction = 0.0;               // biased_fraction only
  Placement placement = Placement::random_cell;  // single_abstainer only

  bool operator==(const SeedingSpec&) const = default;
};

struct SimConfig {
  uint32_t side = 50;
  GameParams game;
  CoevParams coev;
  uint64_t steps = 20000;
  uint64_t tail_window = 1000;
  SeedingSpec seeding;
  uint64_t rng_seed = 1;
  uint32_t replicates = 5;
  std::vector<uint64_t> snapshot_steps;

  uint64_t cell_count() const { return uint64_t(side) * side; }

  bool operator==(const SimConfig&) const = default;
};

// side=50, 2e4 steps, tail 1e3, 5 replicates. Runs in seconds per replicate.
SimConfig desk_profile();
// side=102, 1e5 steps, tail 1e3, 10 replicates, as in the source experiments.
SimConfig paper_profile();

struct ConstraintViolation {
  std::string field;
  std::string message;
};

// Checks every type invariant and returns every violated constraint,
// not just the first. Empty vector means the config is valid.
std::vector<ConstraintViolation> validate_config(const SimConfig& config);

std::string violations_text(const std::vector<ConstraintViolation>& violations);

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<ConstraintViolation> v)
      : std::runtime_error(violations_text(v)), violations(std::move(v)) {}
  std::vector<ConstraintViolation> violations;
};

// Throws ConfigError when invalid; otherwise returns the config unchanged.
const SimConfig& require_valid(const SimConfig& config);

// Hex digest over the dynamics-relevant fields (rng_seed and replicates are
// excluded); replicate results must agree on it before aggregation.
std::string config_digest(const SimConfig& config);

// Compact one-token descriptor, e.g. "unbiased", "biased_fraction:0.05",
// "single_abstainer:center". Used in summary CSVs.
std::string seeding_descriptor(const SeedingSpec& seeding);

// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double v);

}  // namespace copd
