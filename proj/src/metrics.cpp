#include "metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace copd {

FractionSample record_fractions(const Grid& grid, uint64_t step) {
  const auto counts = grid.strategy_counts();
  const double n = static_cast<double>(grid.cells());
  FractionSample s;
  s.step = step;
  s.rho_c = static_cast<double>(counts[0]) / n;
  s.rho_d = static_cast<double>(counts[1]) / n;
  s.rho_a = static_cast<double>(counts[2]) / n;
  return s;
}

std::array<double, 3> tail_average(std::span<const FractionSample> series,
                                   uint64_t window) {
  if (window == 0 || window > series.size())
    throw WindowError("tail window " + std::to_string(window) +
                      " does not fit a series of length " +
                      std::to_string(series.size()));
  std::array<double, 3> sum{};
  for (size_t i = series.size() - window; i < series.size(); ++i) {
    sum[0] += series[i].rho_c;
    sum[1] += series[i].rho_d;
    sum[2] += series[i].rho_a;
  }
  const double w = static_cast<double>(window);
  return {sum[0] / w, sum[1] / w, sum[2] / w};
}

Aggregate aggregate_fractions(std::span<const std::array<double, 3>> finals) {
  if (finals.empty())
    throw MixedConfigsError("cannot aggregate zero replicates");
  Aggregate agg;
  agg.replicates = static_cast<uint32_t>(finals.size());
  for (const auto& f : finals)
    for (size_t k = 0; k < 3; ++k) agg.mean[k] += f[k];
  for (size_t k = 0; k < 3; ++k) agg.mean[k] /= finals.size();
  if (finals.size() > 1) {
    std::array<double, 3> ss{};
    for (const auto& f : finals)
      for (size_t k = 0; k < 3; ++k) {
        const double d = f[k] - agg.mean[k];
        ss[k] += d * d;
      }
    for (size_t k = 0; k < 3; ++k)
      agg.sd[k] = std::sqrt(ss[k] / (finals.size() - 1));
  }
  return agg;
}

Aggregate aggregate_replicates(std::span<const RunResult> results) {
  if (results.empty())
    throw MixedConfigsError("cannot aggregate zero replicates");
  for (const auto& r : results)
    if (r.config_digest != results.front().config_digest)
      throw MixedConfigsError(
          "replicate results come from different configurations");
  std::vector<std::array<double, 3>> finals;
  finals.reserve(results.size());
  for (const auto& r : results) finals.push_back(r.final_fractions);
  return aggregate_fractions(finals);
}

std::string export_snapshot(std::span<const Strategy> strategies,
                            uint32_t side, SnapshotFormat format) {
  std::string out;
  if (format == SnapshotFormat::text_grid) {
    out.reserve(size_t(side) * (side + 1));
    for (uint32_t r = 0; r < side; ++r) {
      for (uint32_t c = 0; c < side; ++c)
        out += strategy_char(strategies[size_t(r) * side + c]);
      out += '\n';
    }
    return out;
  }
  char header[48];
  std::snprintf(header, sizeof(header), "P6\n%u %u\n255\n", side, side);
  out = header;
  out.reserve(out.size() + strategies.size() * 3);
  for (Strategy s : strategies) {
    switch (s) {
      case Strategy::cooperator: out += '\x00'; out += '\x00'; out += '\xff'; break;
      case Strategy::defector: out += '\xff'; out += '\x00'; out += '\x00'; break;
      case Strategy::abstainer: out += '\x00'; out += '\xff'; out += '\x00'; break;
    }
  }
  return out;
}

std::string export_snapshot(const Grid& grid, SnapshotFormat format) {
  return export_snapshot(grid.strategies(), grid.side(), format);
}

std::vector<Strategy> parse_snapshot_text(const std::string& text,
                                          uint32_t* side_out) {
  std::vector<Strategy> out;
  uint32_t side = 0;
  uint32_t rows = 0;
  size_t line_start = 0;
  while (line_start < text.size()) {
    size_t nl = text.find('\n', line_start);
    if (nl == std::string::npos)
      throw IoError("snapshot text: missing trailing newline");
    const size_t len = nl - line_start;
    if (side == 0)
      side = static_cast<uint32_t>(len);
    else if (len != side)
      throw IoError("snapshot text: ragged line length");
    for (size_t i = line_start; i < nl; ++i) {
      switch (text[i]) {
        case 'C': out.push_back(Strategy::cooperator); break;
        case 'D': out.push_back(Strategy::defector); break;
        case 'A': out.push_back(Strategy::abstainer); break;
        default:
          throw IoError(std::string("snapshot text: unexpected character '") +
                        text[i] + "'");
      }
    }
    ++rows;
    line_start = nl + 1;
  }
  if (rows != side)
    throw IoError("snapshot text: expected a square grid");
  if (side_out) *side_out = side;
  return out;
}

std::string timeseries_csv(const RunResult& result) {
  std::string out = kTimeseriesHeader;
  out += '\n';
  char row[160];
  for (const auto& s : result.series) {
    std::snprintf(row, sizeof(row), "%llu,%.6f,%.6f,%.6f,%.6f\n",
                  static_cast<unsigned long long>(s.step), s.rho_c, s.rho_d,
                  s.rho_a, s.mean_w);
    out += row;
  }
  return out;
}

void write_timeseries_csv(const RunResult& result,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open timeseries csv for writing: " + path.string());
  const std::string text = timeseries_csv(result);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out.good())
    throw IoError("failed writing timeseries csv: " + path.string());
}

}  // namespace copd
