#include "statespace.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace copd {

namespace {

constexpr double kDedupTol = 1e-9;
constexpr size_t kStateCap = 1000000;

// Index of a value within tolerance, or npos.
size_t find_close(const std::vector<double>& sorted, double v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v - kDedupTol);
  if (it != sorted.end() && std::abs(*it - v) <= kDedupTol)
    return static_cast<size_t>(it - sorted.begin());
  return static_cast<size_t>(-1);
}

}  // namespace

WeightStateSet reachable_weights(const CoevParams& coev) {
  const double lo = 1.0 - coev.small_delta;
  const double hi = 1.0 + coev.small_delta;
  const double step = coev.big_delta;

  WeightStateSet set;
  set.values.push_back(1.0);
  if (step <= 0.0) return set;

  std::deque<double> frontier{1.0};
  while (!frontier.empty()) {
    const double w = frontier.front();
    frontier.pop_front();
    for (const double next : {std::min(w + step, hi), std::max(w - step, lo)}) {
      if (find_close(set.values, next) != static_cast<size_t>(-1)) continue;
      if (set.values.size() >= kStateCap)
        throw StateCapError("reachable weight set exceeds " +
                            std::to_string(kStateCap) + " states");
      set.values.insert(
          std::lower_bound(set.values.begin(), set.values.end(), next), next);
      frontier.push_back(next);
    }
  }
  return set;
}

size_t count_states(const CoevParams& coev) {
  return reachable_weights(coev).count();
}

}  // namespace copd
