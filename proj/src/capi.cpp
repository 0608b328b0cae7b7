#include "copd/copd.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

#include "config_file.hpp"
#include "experiments.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "statespace.hpp"

using namespace copd;

struct copd_config {
  SimConfig value;
};

struct copd_result {
  RunResult value;
};

struct copd_sweep {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  bool ran = false;
};

namespace {

void copy_err(char* err, size_t errcap, const std::string& message) {
  if (!err || errcap == 0) return;
  const size_t n = std::min(errcap - 1, message.size());
  std::memcpy(err, message.data(), n);
  err[n] = '\0';
}

copd_status copy_out(char* buf, size_t cap, const std::string& text) {
  if (!buf) return COPD_ERR_INVALID_ARGUMENT;
  if (cap < text.size() + 1) return COPD_ERR_BUFFER_TOO_SMALL;
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return COPD_OK;
}

copd_status render_snapshot(const copd_result* result, uint64_t step,
                            copd_snapshot_format format, std::string& out) {
  auto it = result->value.snapshots.find(step);
  if (it == result->value.snapshots.end()) return COPD_ERR_INVALID_ARGUMENT;
  const SnapshotFormat f = format == COPD_SNAPSHOT_PPM
                               ? SnapshotFormat::portable_pixmap
                               : SnapshotFormat::text_grid;
  out = export_snapshot(it->second, result->value.snapshot_side, f);
  return COPD_OK;
}

// Maps exceptions from the C++ core onto status codes.
template <typename Fn>
copd_status guarded(char* err, size_t errcap, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    copy_err(err, errcap, e.what());
    return COPD_ERR_CONSTRAINT;
  } catch (const ParseError& e) {
    copy_err(err, errcap, e.what());
    return COPD_ERR_PARSE;
  } catch (const IoError& e) {
    copy_err(err, errcap, e.what());
    return COPD_ERR_IO;
  } catch (const std::invalid_argument& e) {
    copy_err(err, errcap, e.what());
    return COPD_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    copy_err(err, errcap, "out of memory");
    return COPD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    copy_err(err, errcap, e.what());
    return COPD_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* copd_status_str(copd_status status) {
  switch (status) {
    case COPD_OK: return "COPD_OK";
    case COPD_ERR_INVALID_ARGUMENT: return "COPD_ERR_INVALID_ARGUMENT";
    case COPD_ERR_CONSTRAINT: return "COPD_ERR_CONSTRAINT";
    case COPD_ERR_PARSE: return "COPD_ERR_PARSE";
    case COPD_ERR_IO: return "COPD_ERR_IO";
    case COPD_ERR_BUFFER_TOO_SMALL: return "COPD_ERR_BUFFER_TOO_SMALL";
    case COPD_ERR_INTERNAL: return "COPD_ERR_INTERNAL";
  }
  return "COPD_ERR_UNKNOWN";
}

const char* copd_version(void) { return "1.0.0"; }

copd_config* copd_config_new(void) {
  return new (std::nothrow) copd_config{desk_profile()};
}

copd_config* copd_config_new_paper(void) {
  return new (std::nothrow) copd_config{paper_profile()};
}

copd_config* copd_config_clone(const copd_config* cfg) {
  if (!cfg) return nullptr;
  return new (std::nothrow) copd_config{cfg->value};
}

void copd_config_free(copd_config* cfg) { delete cfg; }

copd_status copd_config_set(copd_config* cfg, const char* key,
                            const char* value, char* err, size_t errcap) {
  if (!cfg || !key || !value) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(err, errcap, [&] {
    set_config_key(cfg->value, key, value);
    return COPD_OK;
  });
}

copd_status copd_config_get(const copd_config* cfg, const char* key,
                            char* buf, size_t cap) {
  if (!cfg || !key) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    return copy_out(buf, cap, get_config_key(cfg->value, key));
  });
}

copd_status copd_config_load_file(copd_config* cfg, const char* path,
                                  char* err, size_t errcap) {
  if (!cfg || !path) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(err, errcap, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      copy_err(err, errcap, std::string("cannot open config file: ") + path);
      return COPD_ERR_IO;
    }
    std::ostringstream text;
    text << in.rdbuf();
    apply_key_values(cfg->value, text.str());
    return COPD_OK;
  });
}

copd_status copd_config_save_file(const copd_config* cfg, const char* path) {
  if (!cfg || !path) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) return COPD_ERR_IO;
    out << to_key_values(cfg->value);
    out.flush();
    return out.good() ? COPD_OK : COPD_ERR_IO;
  });
}

copd_status copd_config_to_string(const copd_config* cfg, char* buf,
                                  size_t cap, size_t* needed) {
  if (!cfg) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    const std::string text = to_key_values(cfg->value);
    if (needed) *needed = text.size() + 1;
    if (!buf) return needed ? COPD_OK : COPD_ERR_INVALID_ARGUMENT;
    return copy_out(buf, cap, text);
  });
}

copd_status copd_config_validate(const copd_config* cfg, char* err,
                                 size_t errcap) {
  if (!cfg) return COPD_ERR_INVALID_ARGUMENT;
  const auto violations = validate_config(cfg->value);
  if (violations.empty()) return COPD_OK;
  copy_err(err, errcap, violations_text(violations));
  return COPD_ERR_CONSTRAINT;
}

copd_status copd_run(const copd_config* cfg, uint64_t seed, copd_result** out,
                     char* err, size_t errcap) {
  if (!cfg || !out) return COPD_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(err, errcap, [&] {
    auto* result = new copd_result{run_simulation(cfg->value, seed)};
    *out = result;
    return COPD_OK;
  });
}

void copd_result_free(copd_result* result) { delete result; }

uint64_t copd_result_series_len(const copd_result* result) {
  return result ? result->value.series.size() : 0;
}

copd_status copd_result_sample(const copd_result* result, uint64_t index,
                               copd_sample* out) {
  if (!result || !out || index >= result->value.series.size())
    return COPD_ERR_INVALID_ARGUMENT;
  const FractionSample& s = result->value.series[index];
  *out = {s.step, s.rho_c, s.rho_d, s.rho_a, s.mean_w};
  return COPD_OK;
}

copd_status copd_result_final(const copd_result* result, copd_fractions* out) {
  if (!result || !out) return COPD_ERR_INVALID_ARGUMENT;
  const auto& f = result->value.final_fractions;
  *out = {f[0], f[1], f[2]};
  return COPD_OK;
}

uint64_t copd_result_seed(const copd_result* result) {
  return result ? result->value.seed : 0;
}

copd_status copd_result_write_timeseries_csv(const copd_result* result,
                                             const char* path) {
  if (!result || !path) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    write_timeseries_csv(result->value, path);
    return COPD_OK;
  });
}

uint32_t copd_result_snapshot_count(const copd_result* result) {
  return result ? static_cast<uint32_t>(result->value.snapshots.size()) : 0;
}

copd_status copd_result_snapshot_step(const copd_result* result,
                                      uint32_t index, uint64_t* step) {
  if (!result || !step || index >= result->value.snapshots.size())
    return COPD_ERR_INVALID_ARGUMENT;
  auto it = result->value.snapshots.begin();
  std::advance(it, index);
  *step = it->first;
  return COPD_OK;
}

copd_status copd_result_snapshot(const copd_result* result, uint64_t step,
                                 copd_snapshot_format format, void* buf,
                                 size_t cap, size_t* written) {
  if (!result) return COPD_ERR_INVALID_ARGUMENT;
  if (format != COPD_SNAPSHOT_TEXT && format != COPD_SNAPSHOT_PPM)
    return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    std::string bytes;
    const copd_status st = render_snapshot(result, step, format, bytes);
    if (st != COPD_OK) return st;
    if (written) *written = bytes.size();
    if (!buf) return written ? COPD_OK : COPD_ERR_INVALID_ARGUMENT;
    if (cap < bytes.size()) return COPD_ERR_BUFFER_TOO_SMALL;
    std::memcpy(buf, bytes.data(), bytes.size());
    return COPD_OK;
  });
}

copd_status copd_result_write_snapshot(const copd_result* result,
                                       uint64_t step,
                                       copd_snapshot_format format,
                                       const char* path) {
  if (!result || !path) return COPD_ERR_INVALID_ARGUMENT;
  if (format != COPD_SNAPSHOT_TEXT && format != COPD_SNAPSHOT_PPM)
    return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    std::string bytes;
    const copd_status st = render_snapshot(result, step, format, bytes);
    if (st != COPD_OK) return st;
    std::ofstream out(path, std::ios::binary);
    if (!out) return COPD_ERR_IO;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    return out.good() ? COPD_OK : COPD_ERR_IO;
  });
}

copd_status copd_classify_fractions(const copd_fractions* fractions,
                                    double threshold, char* buf, size_t cap) {
  if (!fractions) return COPD_ERR_INVALID_ARGUMENT;
  return copy_out(buf, cap,
                  classify_fractions(
                      {fractions->rho_c, fractions->rho_d, fractions->rho_a},
                      threshold));
}

uint64_t copd_replicate_seed(uint64_t base_seed, uint64_t point_index,
                             uint64_t replicate_index) {
  return derive_seed(base_seed, point_index, replicate_index);
}

copd_status copd_run_replicates(const copd_config* cfg, uint64_t base_seed,
                                uint32_t n, uint32_t jobs,
                                copd_result** results, copd_aggregate* agg,
                                char* err, size_t errcap) {
  if (!cfg || n == 0) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(err, errcap, [&] {
    ReplicateBatch batch = run_replicates(cfg->value, base_seed, n, jobs);
    if (agg) {
      const Aggregate& a = batch.aggregate;
      *agg = {{a.mean[0], a.mean[1], a.mean[2]},
              {a.sd[0], a.sd[1], a.sd[2]},
              a.replicates};
    }
    if (results) {
      for (uint32_t k = 0; k < n; ++k) {
        results[k] = new (std::nothrow) copd_result{std::move(batch.runs[k])};
        if (!results[k]) {
          while (k-- > 0) copd_result_free(results[k]);
          copy_err(err, errcap, "out of memory");
          return COPD_ERR_INTERNAL;
        }
      }
    }
    return COPD_OK;
  });
}

copd_status copd_reachable_weights(double big_delta, double small_delta,
                                   double* values, size_t cap, size_t* count) {
  if (!count && !values) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, 0, [&] {
    const WeightStateSet set =
        reachable_weights(CoevParams{big_delta, small_delta});
    if (count) *count = set.count();
    if (!values) return COPD_OK;
    if (cap < set.count()) return COPD_ERR_BUFFER_TOO_SMALL;
    std::memcpy(values, set.values.data(), set.count() * sizeof(double));
    return COPD_OK;
  });
}

copd_sweep* copd_sweep_new(const copd_config* base) {
  if (!base) return nullptr;
  auto* sweep = new (std::nothrow) copd_sweep;
  if (sweep) sweep->spec.base = base->value;
  return sweep;
}

void copd_sweep_free(copd_sweep* sweep) { delete sweep; }

copd_status copd_sweep_add_axis(copd_sweep* sweep, const char* param,
                                const double* values, size_t n, char* err,
                                size_t errcap) {
  if (!sweep || !param || !values || n == 0) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(err, errcap, [&] {
    SimConfig probe = sweep->spec.base;
    apply_sweep_value(probe, param, values[0]);  // validates the name
    sweep->spec.axes.push_back(
        {param, std::vector<double>(values, values + n)});
    return COPD_OK;
  });
}

copd_status copd_sweep_run(copd_sweep* sweep, uint64_t base_seed,
                           const char* out_dir, uint32_t jobs,
                           int write_outputs, uint64_t* rows, char* err,
                           size_t errcap) {
  if (!sweep || !out_dir) return COPD_ERR_INVALID_ARGUMENT;
  return guarded(err, errcap, [&] {
    SweepOptions options;
    options.out_dir = out_dir;
    options.jobs = jobs;
    options.write_outputs = write_outputs != 0;
    sweep->rows = run_sweep(sweep->spec, base_seed, options);
    sweep->ran = true;
    if (rows) *rows = sweep->rows.size();
    return COPD_OK;
  });
}

uint64_t copd_sweep_point_count(const copd_sweep* sweep) {
  return sweep && sweep->ran ? sweep->rows.size() : 0;
}

copd_status copd_sweep_point_aggregate(const copd_sweep* sweep,
                                       uint64_t point_index,
                                       copd_aggregate* agg) {
  if (!sweep || !agg || !sweep->ran || point_index >= sweep->rows.size())
    return COPD_ERR_INVALID_ARGUMENT;
  const SweepRow& row = sweep->rows[point_index];
  if (!row.error.empty()) return COPD_ERR_CONSTRAINT;
  const Aggregate& a = row.aggregate;
  *agg = {{a.mean[0], a.mean[1], a.mean[2]},
          {a.sd[0], a.sd[1], a.sd[2]},
          a.replicates};
  return COPD_OK;
}

copd_status copd_sweep_point_error(const copd_sweep* sweep,
                                   uint64_t point_index, char* buf,
                                   size_t cap) {
  if (!sweep || !sweep->ran || point_index >= sweep->rows.size())
    return COPD_ERR_INVALID_ARGUMENT;
  return copy_out(buf, cap, sweep->rows[point_index].error);
}

}  // extern "C"
