#pragma once

#include <stdexcept>
#include <string>

#include "model.hpp"

namespace copd {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value config document ('#' comments, blank lines allowed).
// Keys: side, b, l, big_delta, small_delta, steps, tail_window,
// seeding.mode, seeding.abstainer_fraction, seeding.placement, rng_seed,
// replicates, snapshot_steps (comma-separated list, may be empty).
std::string to_key_values(const SimConfig& config);

// Applies every key=value pair in `text` onto `config`; partial documents
// are fine. Throws ParseError on unknown keys or malformed values.
void apply_key_values(SimConfig& config, const std::string& text);

// Single-key set/get with the same key names and value syntax as the file
// format. Throws ParseError on unknown key or bad value.
void set_config_key(SimConfig& config, const std::string& key,
                    const std::string& value);
std::string get_config_key(const SimConfig& config, const std::string& key);

}  // namespace copd
