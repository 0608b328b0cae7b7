#include "doctest.h"

#include <algorithm>

#include "config_file.hpp"
#include "model.hpp"
#include "rng.hpp"

using namespace copd;

namespace {

SimConfig headline_config() {
  // The headline parameter set from the source experiments.
  SimConfig c = desk_profile();
  c.side = 102;
  c.game.b = 1.9;
  c.game.l = 0.6;
  c.coev.big_delta = 0.72;
  c.coev.small_delta = 0.8;
  return c;
}

bool violates(const std::vector<ConstraintViolation>& v, const std::string& field) {
  return std::any_of(v.begin(), v.end(),
                     [&](const auto& cv) { return cv.field == field; });
}

}  // namespace

TEST_CASE("headline configuration is valid") {
  CHECK(validate_config(headline_config()).empty());
}

TEST_CASE("b bounds are open") {
  SimConfig c = headline_config();
  c.game.b = 1.0;
  CHECK(violates(validate_config(c), "b"));
  c.game.b = 2.0;
  CHECK(violates(validate_config(c), "b"));
  c.game.b = 2.5;
  CHECK(violates(validate_config(c), "b"));
  c.game.b = 1.0000001;
  CHECK(validate_config(c).empty());
}

TEST_CASE("l admits zero but not one") {
  SimConfig c = headline_config();
  c.game.l = 0.0;  // the CPD reduction
  CHECK(validate_config(c).empty());
  c.game.l = 1.0;
  CHECK(violates(validate_config(c), "l"));
  c.game.l = -0.1;
  CHECK(violates(validate_config(c), "l"));
}

TEST_CASE("big_delta must not exceed small_delta") {
  SimConfig c = headline_config();
  c.coev.big_delta = 0.9;
  c.coev.small_delta = 0.8;
  const auto v = validate_config(c);
  CHECK(violates(v, "big_delta"));
  // Static network reduction: both zero is fine.
  c.coev.big_delta = 0.0;
  c.coev.small_delta = 0.0;
  CHECK(validate_config(c).empty());
  c.coev.small_delta = 1.5;
  CHECK(violates(validate_config(c), "small_delta"));
}

TEST_CASE("geometry and horizon constraints") {
  SimConfig c = headline_config();
  c.side = 2;
  CHECK(violates(validate_config(c), "side"));
  c.side = 3;
  CHECK(validate_config(c).empty());

  c = headline_config();
  c.tail_window = c.steps + 1;
  CHECK(violates(validate_config(c), "tail_window"));
  c.tail_window = c.steps;
  CHECK(validate_config(c).empty());
}

TEST_CASE("every violated constraint is reported, not just the first") {
  SimConfig c = headline_config();
  c.game.b = 0.5;
  c.game.l = 1.2;
  c.coev.big_delta = 0.9;
  c.coev.small_delta = 0.8;
  c.side = 1;
  const auto v = validate_config(c);
  CHECK(v.size() >= 4);
  CHECK(violates(v, "b"));
  CHECK(violates(v, "l"));
  CHECK(violates(v, "big_delta"));
  CHECK(violates(v, "side"));
}

TEST_CASE("validation is idempotent and non-mutating") {
  const SimConfig c = headline_config();
  const SimConfig copy = c;
  (void)validate_config(c);
  CHECK(c == copy);
  CHECK(require_valid(c) == copy);
}

TEST_CASE("biased fraction bounds checked only for that mode") {
  SimConfig c = headline_config();
  c.seeding.mode = SeedingMode::biased_fraction;
  c.seeding.abstainer_fraction = 1.5;
  CHECK(violates(validate_config(c), "seeding.abstainer_fraction"));
  c.seeding.mode = SeedingMode::unbiased;
  CHECK(validate_config(c).empty());
}

TEST_CASE("config round-trips through the key=value format") {
  SimConfig c = headline_config();
  c.seeding.mode = SeedingMode::biased_fraction;
  c.seeding.abstainer_fraction = 0.05;
  c.snapshot_steps = {0, 45, 1113, 100000};
  c.rng_seed = 0xdeadbeefcafe1234ull;

  SimConfig parsed;
  apply_key_values(parsed, to_key_values(c));
  CHECK(parsed == c);
}

TEST_CASE("round-trip over randomized valid configs") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    SimConfig c;
    c.side = 3 + rng.uniform_index(200);
    c.game.b = 1.0 + 0.999 * rng.uniform_unit() + 1e-6;
    c.game.l = 0.999 * rng.uniform_unit();
    c.coev.small_delta = rng.uniform_unit();
    c.coev.big_delta = c.coev.small_delta * rng.uniform_unit();
    c.steps = 1 + rng.uniform_index(100000);
    c.tail_window = 1 + rng.uniform_index(static_cast<uint32_t>(c.steps));
    c.seeding.mode = static_cast<SeedingMode>(rng.uniform_index(4));
    c.seeding.abstainer_fraction = rng.uniform_unit();
    c.seeding.placement = static_cast<Placement>(rng.uniform_index(2));
    c.rng_seed = rng.next_u64();
    c.replicates = 1 + rng.uniform_index(20);
    c.snapshot_steps.clear();
    for (uint32_t k = rng.uniform_index(4); k-- > 0;)
      c.snapshot_steps.push_back(rng.uniform_index(100000));
    REQUIRE(validate_config(c).empty());

    SimConfig parsed;
    apply_key_values(parsed, to_key_values(c));
    CHECK(parsed == c);
  }
}

TEST_CASE("parser rejects unknown keys and bad values") {
  SimConfig c;
  CHECK_THROWS_AS(apply_key_values(c, "nonsense = 3\n"), ParseError);
  CHECK_THROWS_AS(apply_key_values(c, "b = abc\n"), ParseError);
  CHECK_THROWS_AS(apply_key_values(c, "side\n"), ParseError);
  CHECK_THROWS_AS(apply_key_values(c, "seeding.mode = sometimes\n"), ParseError);
  CHECK_THROWS_AS(set_config_key(c, "steps", "-4"), ParseError);
}

TEST_CASE("parser tolerates comments, blanks and partial documents") {
  SimConfig c = desk_profile();
  apply_key_values(c, "# comment\n\n  b = 1.5\n");
  CHECK(c.game.b == 1.5);
  CHECK(c.side == 50);  // untouched
}

TEST_CASE("config digest covers dynamics fields only") {
  SimConfig a = headline_config();
  SimConfig b = a;
  b.rng_seed = 999;
  b.replicates = 3;
  CHECK(config_digest(a) == config_digest(b));
  b.game.l = 0.61;
  CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("seeding descriptors are stable tokens") {
  CHECK(seeding_descriptor({}) == "unbiased");
  CHECK(seeding_descriptor({SeedingMode::biased_fraction, 0.05,
                            Placement::random_cell}) ==
        "biased_fraction:0.05");
  CHECK(seeding_descriptor({SeedingMode::single_abstainer, 0.0,
                            Placement::center_cell}) ==
        "single_abstainer:center");
  CHECK(seeding_descriptor({SeedingMode::all_abstainers_except_pair, 0.0,
                            Placement::random_cell}) ==
        "all_abstainers_except_pair");
}

TEST_CASE("profiles match the documented scales") {
  const SimConfig desk = desk_profile();
  CHECK(desk.side == 50);
  CHECK(desk.steps == 20000);
  CHECK(desk.tail_window == 1000);
  CHECK(desk.replicates == 5);
  const SimConfig paper = paper_profile();
  CHECK(paper.side == 102);
  CHECK(paper.steps == 100000);
  CHECK(paper.tail_window == 1000);
  CHECK(paper.replicates == 10);
}
