#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace copd {

struct InvalidSideError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotAdjacentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Moore-8 neighbors of `cell` on a side-by-side torus, in the fixed order
// NW, N, NE, W, E, SW, S, SE. Pure function of (side, cell); this order is
// normative for utility summation and RNG reproducibility.
std::array<uint32_t, 8> neighbors_of(uint32_t side, uint32_t cell);

// Periodic square lattice of agents with one shared weight per undirected
// edge, confined to [1 - small_delta, 1 + small_delta]. Each cell owns its
// E, S, SE and SW edges in a flat array of length 4N, so every undirected
// edge has exactly one slot.
class Grid {
 public:
  // All cooperators, every weight exactly 1.0.
  Grid(uint32_t side, double small_delta);

  // Assigns strategies per the seeding spec. Draw order is normative:
  //  - unbiased: one index-in-3 draw per cell, in cell order;
  //  - biased_fraction f: round(f*N) abstainers; if the C/D remainder is
  //    odd, one index-in-2 draw decides which side gets the extra agent;
  //    then one Fisher-Yates shuffle of the whole array (N-1 draws);
  //  - single_abstainer: placement draw first when random, then the odd
  //    remainder draw if needed, then a Fisher-Yates shuffle of the N-1
  //    cooperator/defector cells;
  //  - all_abstainers_except_pair: one draw for the cooperator cell, one
  //    index-in-(N-1) draw for the defector cell among the rest.
  static Grid build(uint32_t side, double small_delta,
                    const SeedingSpec& seeding, Rng& rng);

  uint32_t side() const { return side_; }
  uint32_t cells() const { return n_; }

  Strategy strategy(uint32_t cell) const { return strategies_[cell]; }
  void set_strategy(uint32_t cell, Strategy s) { strategies_[cell] = s; }
  std::span<const Strategy> strategies() const { return strategies_; }

  std::array<uint32_t, 8> neighbors(uint32_t cell) const {
    return neighbors_of(side_, cell);
  }

  // Shared undirected value; get(x, y) == get(y, x). Setting clamps into
  // [1 - small_delta, 1 + small_delta]. Throws NotAdjacentError when x and
  // y are not Moore neighbors.
  double edge_weight(uint32_t x, uint32_t y) const;
  void set_edge_weight(uint32_t x, uint32_t y, double w);

  double weight_floor() const { return lo_; }
  double weight_ceil() const { return hi_; }

  std::span<const double> edge_values() const { return weights_; }
  std::array<uint64_t, 3> strategy_counts() const;
  // Mean over all 4N edge slots, summed in slot order.
  double mean_weight() const;

  // Hot-path access: 8 neighbor indices / weight slots per cell.
  const uint32_t* neighbor_row(uint32_t cell) const {
    return &neighbor_table_[size_t(cell) * 8];
  }
  const uint32_t* slot_row(uint32_t cell) const {
    return &slot_table_[size_t(cell) * 8];
  }
  double* weight_data() { return weights_.data(); }
  const double* weight_data() const { return weights_.data(); }

  bool operator==(const Grid&) const = default;

 private:
  uint32_t edge_slot(uint32_t x, uint32_t y) const;  // throws NotAdjacentError

  uint32_t side_ = 0;
  uint32_t n_ = 0;
  double lo_ = 1.0;
  double hi_ = 1.0;
  std::vector<Strategy> strategies_;
  std::vector<double> weights_;
  std::vector<uint32_t> neighbor_table_;
  std::vector<uint32_t> slot_table_;
};

}  // namespace copd
