#pragma once

// Straight-line reference implementation of the Monte Carlo procedure,
// kept deliberately naive and independent of the optimized engine: plain
// containers, map-backed edge weights, per-call neighbor arithmetic. Used
// to cross-check trajectories state by state and draw for draw. The
// abstention toggle turns it into the two-strategy variant of the game
// (payoffs never consult the loner's payoff).

#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace copd::testing {

class ReferenceEngine {
 public:
  ReferenceEngine(uint32_t side, std::vector<Strategy> strategies,
                  const GameParams& game, const CoevParams& coev,
                  bool abstention_enabled = true)
      : side_(side),
        n_(side * side),
        game_(game),
        coev_(coev),
        abstention_(abstention_enabled),
        strategies_(std::move(strategies)) {
    for (uint32_t x = 0; x < n_; ++x)
      for (uint32_t y : moore_neighbors(x)) weights_[edge_key(x, y)] = 1.0;
  }

  std::vector<uint32_t> moore_neighbors(uint32_t cell) const {
    const uint32_t r = cell / side_;
    const uint32_t c = cell % side_;
    auto wrap = [&](int64_t v) {
      return static_cast<uint32_t>((v + side_) % side_);
    };
    std::vector<uint32_t> out;
    // NW, N, NE, W, E, SW, S, SE
    const int dr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
    const int dc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    for (int d = 0; d < 8; ++d)
      out.push_back(wrap(int64_t(r) + dr[d]) * side_ + wrap(int64_t(c) + dc[d]));
    return out;
  }

  double payoff_of(Strategy row, Strategy col) const {
    if (abstention_) {
      if (row == Strategy::abstainer || col == Strategy::abstainer)
        return game_.l;
    } else {
      // Two-strategy game: abstainers must never appear.
      if (row == Strategy::abstainer || col == Strategy::abstainer)
        std::abort();
    }
    if (row == Strategy::cooperator)
      return col == Strategy::cooperator ? 1.0 : 0.0;
    return col == Strategy::cooperator ? game_.b : 0.0;
  }

  double weight(uint32_t x, uint32_t y) const {
    return weights_.at(edge_key(x, y));
  }

  void elementary_step(Rng& rng) {
    const uint32_t x = rng.uniform_index(n_);
    const std::vector<uint32_t> nbr = moore_neighbors(x);

    double u[8];
    double acc = 0.0;
    for (int d = 0; d < 8; ++d) {
      u[d] = weight(x, nbr[d]) * payoff_of(strategies_[x], strategies_[nbr[d]]);
      acc += u[d];
    }
    const double mean = acc / 8.0;

    const double eps = 1e-12;
    const double lo = 1.0 - coev_.small_delta;
    const double hi = 1.0 + coev_.small_delta;
    for (int d = 0; d < 8; ++d) {
      double w = weight(x, nbr[d]);
      if (u[d] > mean + eps) w += coev_.big_delta;
      else if (u[d] < mean - eps) w -= coev_.big_delta;
      if (w > hi) w = hi;
      if (w < lo) w = lo;
      weights_[edge_key(x, nbr[d])] = w;
    }

    double acc2 = 0.0;
    for (int d = 0; d < 8; ++d)
      acc2 += weight(x, nbr[d]) * payoff_of(strategies_[x], strategies_[nbr[d]]);

    const uint32_t y = nbr[rng.uniform_index(8)];
    double acc_y = 0.0;
    for (uint32_t z : moore_neighbors(y))
      acc_y += weight(y, z) * payoff_of(strategies_[y], strategies_[z]);

    if (acc_y > acc2) {
      double p = (acc_y - acc2) / (8.0 * (game_.b - 0.0));
      if (p < 0.0) p = 0.0;
      if (p > 1.0) p = 1.0;
      if (rng.uniform_unit() < p) strategies_[x] = strategies_[y];
    }
  }

  void mc_step(Rng& rng) {
    for (uint32_t i = 0; i < n_; ++i) elementary_step(rng);
  }

  const std::vector<Strategy>& strategies() const { return strategies_; }

  // Exact state comparison against the optimized engine's grid.
  bool matches(const Grid& grid) const {
    if (grid.side() != side_) return false;
    for (uint32_t i = 0; i < n_; ++i)
      if (grid.strategy(i) != strategies_[i]) return false;
    for (uint32_t x = 0; x < n_; ++x)
      for (uint32_t y : moore_neighbors(x))
        if (grid.edge_weight(x, y) != weight(x, y)) return false;
    return true;
  }

 private:
  static std::pair<uint32_t, uint32_t> make_key(uint32_t a, uint32_t b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::pair<uint32_t, uint32_t> edge_key(uint32_t x, uint32_t y) const {
    return make_key(x, y);
  }

  uint32_t side_;
  uint32_t n_;
  GameParams game_;
  CoevParams coev_;
  bool abstention_;
  std::vector<Strategy> strategies_;
  std::map<std::pair<uint32_t, uint32_t>, double> weights_;
};

}  // namespace copd::testing
