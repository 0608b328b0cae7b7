#pragma once

#include <array>

#include "lattice.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace copd {

// Absolute tolerance for the three-way comparison in the link update. The
// all-equal utility configuration must land in the "unchanged" branch even
// after accumulated floating-point drift.
inline constexpr double kUtilityTieEps = 1e-12;

// Row player's payoff: (C,C)=1, (C,D)=0, (D,C)=b, (D,D)=0, and any pairing
// involving an abstainer pays l to both players.
double payoff(Strategy row, Strategy col, const GameParams& game);

// Edge weight times payoff, for adjacent x and y. Throws NotAdjacentError.
double utility(const Grid& grid, uint32_t x, uint32_t y,
               const GameParams& game);

struct UtilityView {
  std::array<double, 8> per_neighbor{};  // fixed NW..SE neighbor order
  double total = 0.0;                    // summed left to right
  double mean = 0.0;                     // total / 8
};

struct AdoptionRecord {
  bool adopted = false;
  uint32_t source = 0;       // the drawn neighbor
  double probability = 0.0;  // clamped to [0,1]; 0 when U_y <= U_x
};

// The update pipeline bound to one (game, coev) parameter set. RNG use per
// elementary step is normative for reproducibility: one draw selects the
// agent, one the neighbor, and a third is consumed only when the imitation
// branch is taken.
class Dynamics {
 public:
  Dynamics(const GameParams& game, const CoevParams& coev);

  // Per-neighbor utilities of `cell` from current weights, in fixed order.
  UtilityView accumulated_utility(const Grid& grid, uint32_t cell) const;

  // Steps each of the 8 edges by +/- big_delta against the pre-update mean
  // utility (all 8 decisions use the same snapshot), clamping each result
  // into [1 - small_delta, 1 + small_delta] immediately.
  void update_link_weights(Grid& grid, uint32_t cell) const;

  // Recomputes U_x from the just-updated weights, draws one neighbor y and
  // imitates its strategy with probability (U_y - U_x) / (8 (T - P)) when
  // U_y > U_x. The Bernoulli draw happens only in that branch.
  AdoptionRecord attempt_strategy_adoption(Grid& grid, uint32_t cell,
                                           Rng& rng) const;

  // One random agent: link update, then adoption attempt.
  void elementary_step(Grid& grid, Rng& rng) const;

  // N = side^2 elementary steps.
  void mc_step(Grid& grid, Rng& rng) const;

  double payoff_between(Strategy row, Strategy col) const {
    return table_[static_cast<size_t>(row) * 3 + static_cast<size_t>(col)];
  }

 private:
  double utility_sum(const Grid& grid, uint32_t cell) const;

  std::array<double, 9> table_{};  // payoff by 3*row + col
  double weight_step_ = 0.0;
  double prob_denom_ = 1.0;  // 8 (T - P)
};

}  // namespace copd
