#include "model.hpp"

#include <charconv>
#include <cmath>

namespace copd {

char strategy_char(Strategy s) {
  switch (s) {
    case Strategy::cooperator: return 'C';
    case Strategy::defector: return 'D';
    case Strategy::abstainer: return 'A';
  }
  return '?';
}

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

SimConfig desk_profile() {
  SimConfig c;
  c.side = 50;
  c.steps = 20000;
  c.tail_window = 1000;
  c.replicates = 5;
  return c;
}

SimConfig paper_profile() {
  SimConfig c;
  c.side = 102;
  c.steps = 100000;
  c.tail_window = 1000;
  c.replicates = 10;
  return c;
}

namespace {

void check(std::vector<ConstraintViolation>& out, bool ok,
           const char* field, std::string message) {
  if (!ok) out.push_back({field, std::move(message)});
}

}  // namespace

std::vector<ConstraintViolation> validate_config(const SimConfig& c) {
  std::vector<ConstraintViolation> v;
  const double b = c.game.b;
  const double l = c.game.l;
  const double bd = c.coev.big_delta;
  const double sd = c.coev.small_delta;

  check(v, c.side >= 3, "side",
        "side must be at least 3 (got " + std::to_string(c.side) + ")");
  check(v, c.side <= 16384, "side",
        "side must be at most 16384 (got " + std::to_string(c.side) + ")");
  check(v, b > 1.0 && b < 2.0, "b",
        "b must satisfy 1 < b < 2 (got " + format_double(b) + ")");
  check(v, l >= 0.0 && l < 1.0, "l",
        "l must satisfy 0 <= l < 1 (got " + format_double(l) + ")");
  check(v, sd >= 0.0 && sd <= 1.0, "small_delta",
        "small_delta must satisfy 0 <= small_delta <= 1 (got " +
            format_double(sd) + ")");
  check(v, bd >= 0.0, "big_delta",
        "big_delta must be non-negative (got " + format_double(bd) + ")");
  check(v, bd <= sd, "big_delta",
        "big_delta must not exceed small_delta (got " + format_double(bd) +
            " > " + format_double(sd) + ")");
  check(v, c.steps >= 1, "steps", "steps must be positive");
  check(v, c.tail_window >= 1, "tail_window", "tail_window must be positive");
  check(v, c.tail_window <= c.steps, "tail_window",
        "tail_window must not exceed steps (got " +
            std::to_string(c.tail_window) + " > " + std::to_string(c.steps) +
            ")");
  check(v, c.replicates >= 1, "replicates", "replicates must be positive");
  if (c.seeding.mode == SeedingMode::biased_fraction) {
    const double f = c.seeding.abstainer_fraction;
    check(v, f >= 0.0 && f <= 1.0, "seeding.abstainer_fraction",
          "abstainer_fraction must lie in [0, 1] (got " + format_double(f) +
              ")");
  }
  return v;
}

std::string violations_text(const std::vector<ConstraintViolation>& violations) {
  std::string out;
  for (const auto& cv : violations) {
    if (!out.empty()) out += "; ";
    out += cv.field;
    out += ": ";
    out += cv.message;
  }
  return out;
}

const SimConfig& require_valid(const SimConfig& config) {
  auto v = validate_config(config);
  if (!v.empty()) throw ConfigError(std::move(v));
  return config;
}

std::string seeding_descriptor(const SeedingSpec& s) {
  switch (s.mode) {
    case SeedingMode::unbiased:
      return "unbiased";
    case SeedingMode::biased_fraction:
      return "biased_fraction:" + format_double(s.abstainer_fraction);
    case SeedingMode::single_abstainer:
      return std::string("single_abstainer:") +
             (s.placement == Placement::center_cell ? "center" : "random");
    case SeedingMode::all_abstainers_except_pair:
      return "all_abstainers_except_pair";
  }
  return "unknown";
}

}  // namespace copd
