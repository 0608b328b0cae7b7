#include "dynamics.hpp"

#include <algorithm>

namespace copd {

double payoff(Strategy row, Strategy col, const GameParams& game) {
  if (row == Strategy::abstainer || col == Strategy::abstainer) return game.l;
  if (row == Strategy::cooperator)
    return col == Strategy::cooperator ? GameParams::reward
                                       : GameParams::sucker;
  return col == Strategy::cooperator ? game.b : GameParams::punishment;
}

double utility(const Grid& grid, uint32_t x, uint32_t y,
               const GameParams& game) {
  return grid.edge_weight(x, y) * payoff(grid.strategy(x), grid.strategy(y), game);
}

Dynamics::Dynamics(const GameParams& game, const CoevParams& coev) {
  for (size_t row = 0; row < 3; ++row)
    for (size_t col = 0; col < 3; ++col)
      table_[row * 3 + col] = payoff(static_cast<Strategy>(row),
                                     static_cast<Strategy>(col), game);
  weight_step_ = coev.big_delta;
  prob_denom_ = 8.0 * (game.temptation() - GameParams::punishment);
}

UtilityView Dynamics::accumulated_utility(const Grid& grid,
                                          uint32_t cell) const {
  UtilityView view;
  const uint32_t* nbr = grid.neighbor_row(cell);
  const uint32_t* slot = grid.slot_row(cell);
  const double* w = grid.weight_data();
  const double* row =
      table_.data() + static_cast<size_t>(grid.strategy(cell)) * 3;
  for (uint32_t d = 0; d < 8; ++d) {
    const double u = w[slot[d]] * row[static_cast<size_t>(grid.strategy(nbr[d]))];
    view.per_neighbor[d] = u;
    view.total += u;
  }
  view.mean = view.total / 8.0;
  return view;
}

double Dynamics::utility_sum(const Grid& grid, uint32_t cell) const {
  const uint32_t* nbr = grid.neighbor_row(cell);
  const uint32_t* slot = grid.slot_row(cell);
  const double* w = grid.weight_data();
  const double* row =
      table_.data() + static_cast<size_t>(grid.strategy(cell)) * 3;
  double total = 0.0;
  for (uint32_t d = 0; d < 8; ++d)
    total += w[slot[d]] * row[static_cast<size_t>(grid.strategy(nbr[d]))];
  return total;
}

void Dynamics::update_link_weights(Grid& grid, uint32_t cell) const {
  const UtilityView view = accumulated_utility(grid, cell);
  const uint32_t* slot = grid.slot_row(cell);
  double* w = grid.weight_data();
  const double lo = grid.weight_floor();
  const double hi = grid.weight_ceil();
  for (uint32_t d = 0; d < 8; ++d) {
    double value = w[slot[d]];
    if (view.per_neighbor[d] > view.mean + kUtilityTieEps)
      value = std::min(value + weight_step_, hi);
    else if (view.per_neighbor[d] < view.mean - kUtilityTieEps)
      value = std::max(value - weight_step_, lo);
    w[slot[d]] = value;
  }
}

AdoptionRecord Dynamics::attempt_strategy_adoption(Grid& grid, uint32_t cell,
                                                   Rng& rng) const {
  const double own = utility_sum(grid, cell);
  const uint32_t pick = rng.uniform_index(8);
  const uint32_t source = grid.neighbor_row(cell)[pick];
  const double other = utility_sum(grid, source);

  AdoptionRecord record;
  record.source = source;
  if (other > own) {
    record.probability = std::clamp((other - own) / prob_denom_, 0.0, 1.0);
    if (rng.uniform_unit() < record.probability) {
      grid.set_strategy(cell, grid.strategy(source));
      record.adopted = true;
    }
  }
  return record;
}

void Dynamics::elementary_step(Grid& grid, Rng& rng) const {
  const uint32_t cell = rng.uniform_index(grid.cells());
  update_link_weights(grid, cell);
  attempt_strategy_adoption(grid, cell, rng);
}

void Dynamics::mc_step(Grid& grid, Rng& rng) const {
  const uint32_t n = grid.cells();
  for (uint32_t i = 0; i < n; ++i) elementary_step(grid, rng);
}

}  // namespace copd
