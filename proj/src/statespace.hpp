#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "model.hpp"

namespace copd {

struct StateCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Distinct link-weight values reachable from w = 1 under w -> w +/- big_delta
// with clamping into [1 - small_delta, 1 + small_delta].
struct WeightStateSet {
  std::vector<double> values;  // sorted ascending, deduplicated at 1e-9
  size_t count() const { return values.size(); }
};

// Breadth-first closure of {1.0} under the two moves. Values closer than
// 1e-9 are merged to absorb float drift; more than 1e6 states raises
// StateCapError instead of returning a wrong count.
WeightStateSet reachable_weights(const CoevParams& coev);

size_t count_states(const CoevParams& coev);
inline size_t count_states(double big_delta, double small_delta) {
  return count_states(CoevParams{big_delta, small_delta});
}

}  // namespace copd
