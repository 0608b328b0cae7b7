#include "lattice.hpp"

#include <algorithm>
#include <cmath>

namespace copd {

std::array<uint32_t, 8> neighbors_of(uint32_t side, uint32_t cell) {
  const uint32_t r = cell / side;
  const uint32_t c = cell % side;
  const uint32_t rm = (r + side - 1) % side;
  const uint32_t rp = (r + 1) % side;
  const uint32_t cm = (c + side - 1) % side;
  const uint32_t cp = (c + 1) % side;
  return {
      rm * side + cm,  // NW
      rm * side + c,   // N
      rm * side + cp,  // NE
      r * side + cm,   // W
      r * side + cp,   // E
      rp * side + cm,  // SW
      rp * side + c,   // S
      rp * side + cp,  // SE
  };
}

namespace {

// Owned-edge dimensions, slot = cell * 4 + dim.
enum : uint32_t { kEast = 0, kSouth = 1, kSouthEast = 2, kSouthWest = 3 };

// Slot of the edge toward neighbor direction d (NW..SE order). Edges to the
// north-west/north/north-east/west are owned by that neighbor.
uint32_t slot_for_direction(const std::array<uint32_t, 8>& nbr, uint32_t cell,
                            uint32_t d) {
  switch (d) {
    case 0: return nbr[0] * 4 + kSouthEast;  // NW
    case 1: return nbr[1] * 4 + kSouth;      // N
    case 2: return nbr[2] * 4 + kSouthWest;  // NE
    case 3: return nbr[3] * 4 + kEast;       // W
    case 4: return cell * 4 + kEast;         // E
    case 5: return cell * 4 + kSouthWest;    // SW
    case 6: return cell * 4 + kSouth;        // S
    default: return cell * 4 + kSouthEast;   // SE
  }
}

}  // namespace

Grid::Grid(uint32_t side, double small_delta) {
  if (side < 3)
    throw InvalidSideError("lattice side must be at least 3, got " +
                           std::to_string(side));
  side_ = side;
  n_ = side * side;
  lo_ = 1.0 - small_delta;
  hi_ = 1.0 + small_delta;
  strategies_.assign(n_, Strategy::cooperator);
  weights_.assign(size_t(n_) * 4, 1.0);
  neighbor_table_.resize(size_t(n_) * 8);
  slot_table_.resize(size_t(n_) * 8);
  for (uint32_t cell = 0; cell < n_; ++cell) {
    auto nbr = neighbors_of(side, cell);
    for (uint32_t d = 0; d < 8; ++d) {
      neighbor_table_[size_t(cell) * 8 + d] = nbr[d];
      slot_table_[size_t(cell) * 8 + d] = slot_for_direction(nbr, cell, d);
    }
  }
}

uint32_t Grid::edge_slot(uint32_t x, uint32_t y) const {
  if (x >= n_ || y >= n_)
    throw NotAdjacentError("cell index out of range");
  const uint32_t* nbr = neighbor_row(x);
  for (uint32_t d = 0; d < 8; ++d)
    if (nbr[d] == y) return slot_row(x)[d];
  throw NotAdjacentError("cells " + std::to_string(x) + " and " +
                         std::to_string(y) + " are not Moore neighbors");
}

double Grid::edge_weight(uint32_t x, uint32_t y) const {
  return weights_[edge_slot(x, y)];
}

void Grid::set_edge_weight(uint32_t x, uint32_t y, double w) {
  weights_[edge_slot(x, y)] = std::clamp(w, lo_, hi_);
}

std::array<uint64_t, 3> Grid::strategy_counts() const {
  std::array<uint64_t, 3> counts{};
  for (Strategy s : strategies_) counts[static_cast<size_t>(s)]++;
  return counts;
}

double Grid::mean_weight() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum / static_cast<double>(weights_.size());
}

namespace {

void fisher_yates(std::vector<Strategy>& a, Rng& rng) {
  if (a.size() < 2) return;
  for (uint32_t i = static_cast<uint32_t>(a.size()) - 1; i >= 1; --i) {
    uint32_t j = rng.uniform_index(i + 1);
    std::swap(a[i], a[j]);
  }
}

// Split m cells between C and D as evenly as possible; one draw resolves
// the odd cell.
std::pair<uint64_t, uint64_t> split_cd(uint64_t m, Rng& rng) {
  uint64_t nc = m / 2;
  uint64_t nd = m / 2;
  if (m % 2 != 0) {
    if (rng.uniform_index(2) == 0)
      ++nc;
    else
      ++nd;
  }
  return {nc, nd};
}

}  // namespace

Grid Grid::build(uint32_t side, double small_delta, const SeedingSpec& seeding,
                 Rng& rng) {
  Grid grid(side, small_delta);
  const uint32_t n = grid.cells();

  switch (seeding.mode) {
    case SeedingMode::unbiased: {
      for (uint32_t i = 0; i < n; ++i)
        grid.strategies_[i] = static_cast<Strategy>(rng.uniform_index(3));
      break;
    }
    case SeedingMode::biased_fraction: {
      const uint64_t na = static_cast<uint64_t>(
          std::llround(seeding.abstainer_fraction * static_cast<double>(n)));
      auto [nc, nd] = split_cd(n - na, rng);
      std::vector<Strategy> a;
      a.reserve(n);
      a.insert(a.end(), nc, Strategy::cooperator);
      a.insert(a.end(), nd, Strategy::defector);
      a.insert(a.end(), na, Strategy::abstainer);
      fisher_yates(a, rng);
      grid.strategies_ = std::move(a);
      break;
    }
    case SeedingMode::single_abstainer: {
      const uint32_t pos = seeding.placement == Placement::random_cell
                               ? rng.uniform_index(n)
                               : (side / 2) * side + side / 2;
      auto [nc, nd] = split_cd(n - 1, rng);
      std::vector<Strategy> rest;
      rest.reserve(n - 1);
      rest.insert(rest.end(), nc, Strategy::cooperator);
      rest.insert(rest.end(), nd, Strategy::defector);
      fisher_yates(rest, rng);
      uint32_t k = 0;
      for (uint32_t i = 0; i < n; ++i)
        grid.strategies_[i] = (i == pos) ? Strategy::abstainer : rest[k++];
      break;
    }
    case SeedingMode::all_abstainers_except_pair: {
      const uint32_t c_pos = rng.uniform_index(n);
      uint32_t d_pos = rng.uniform_index(n - 1);
      if (d_pos >= c_pos) ++d_pos;
      std::fill(grid.strategies_.begin(), grid.strategies_.end(),
                Strategy::abstainer);
      grid.strategies_[c_pos] = Strategy::cooperator;
      grid.strategies_[d_pos] = Strategy::defector;
      break;
    }
  }
  return grid;
}

}  // namespace copd
