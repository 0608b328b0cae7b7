#include "config_file.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace copd {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (r.ec != std::errc{} || r.ptr != value.data() + value.size())
    throw ParseError(key + ": expected a number, got '" + value + "'");
  return out;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  uint64_t out = 0;
  auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (r.ec != std::errc{} || r.ptr != value.data() + value.size())
    throw ParseError(key + ": expected a non-negative integer, got '" + value +
                     "'");
  return out;
}

std::string seeding_mode_token(SeedingMode m) {
  switch (m) {
    case SeedingMode::unbiased: return "unbiased";
    case SeedingMode::biased_fraction: return "biased_fraction";
    case SeedingMode::single_abstainer: return "single_abstainer";
    case SeedingMode::all_abstainers_except_pair:
      return "all_abstainers_except_pair";
  }
  return "unbiased";
}

SeedingMode parse_seeding_mode(const std::string& value) {
  if (value == "unbiased") return SeedingMode::unbiased;
  if (value == "biased_fraction") return SeedingMode::biased_fraction;
  if (value == "single_abstainer") return SeedingMode::single_abstainer;
  if (value == "all_abstainers_except_pair")
    return SeedingMode::all_abstainers_except_pair;
  throw ParseError(
      "seeding.mode: expected one of unbiased|biased_fraction|"
      "single_abstainer|all_abstainers_except_pair, got '" +
      value + "'");
}

std::string snapshot_steps_token(const std::vector<uint64_t>& steps) {
  std::string out;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(steps[i]);
  }
  return out;
}

std::vector<uint64_t> parse_snapshot_steps(const std::string& value) {
  std::vector<uint64_t> out;
  std::string v = trim(value);
  if (v.empty()) return out;
  size_t pos = 0;
  while (pos <= v.size()) {
    size_t comma = v.find(',', pos);
    std::string item =
        trim(comma == std::string::npos ? v.substr(pos) : v.substr(pos, comma - pos));
    out.push_back(parse_u64("snapshot_steps", item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string to_key_values(const SimConfig& c) {
  std::ostringstream out;
  out << "side = " << c.side << "\n";
  out << "b = " << format_double(c.game.b) << "\n";
  out << "l = " << format_double(c.game.l) << "\n";
  out << "big_delta = " << format_double(c.coev.big_delta) << "\n";
  out << "small_delta = " << format_double(c.coev.small_delta) << "\n";
  out << "steps = " << c.steps << "\n";
  out << "tail_window = " << c.tail_window << "\n";
  out << "seeding.mode = " << seeding_mode_token(c.seeding.mode) << "\n";
  out << "seeding.abstainer_fraction = "
      << format_double(c.seeding.abstainer_fraction) << "\n";
  out << "seeding.placement = "
      << (c.seeding.placement == Placement::center_cell ? "center" : "random")
      << "\n";
  out << "rng_seed = " << c.rng_seed << "\n";
  out << "replicates = " << c.replicates << "\n";
  out << "snapshot_steps = " << snapshot_steps_token(c.snapshot_steps) << "\n";
  return out.str();
}

void set_config_key(SimConfig& c, const std::string& key,
                    const std::string& value) {
  if (key == "side") {
    uint64_t side = parse_u64(key, value);
    if (side > 0xffffffffull) throw ParseError("side: value out of range");
    c.side = static_cast<uint32_t>(side);
  } else if (key == "b") {
    c.game.b = parse_real(key, value);
  } else if (key == "l") {
    c.game.l = parse_real(key, value);
  } else if (key == "big_delta") {
    c.coev.big_delta = parse_real(key, value);
  } else if (key == "small_delta") {
    c.coev.small_delta = parse_real(key, value);
  } else if (key == "steps") {
    c.steps = parse_u64(key, value);
  } else if (key == "tail_window") {
    c.tail_window = parse_u64(key, value);
  } else if (key == "seeding.mode") {
    c.seeding.mode = parse_seeding_mode(trim(value));
  } else if (key == "seeding.abstainer_fraction") {
    c.seeding.abstainer_fraction = parse_real(key, value);
  } else if (key == "seeding.placement") {
    std::string v = trim(value);
    if (v == "random")
      c.seeding.placement = Placement::random_cell;
    else if (v == "center")
      c.seeding.placement = Placement::center_cell;
    else
      throw ParseError("seeding.placement: expected random|center, got '" + v +
                       "'");
  } else if (key == "rng_seed") {
    c.rng_seed = parse_u64(key, value);
  } else if (key == "replicates") {
    uint64_t n = parse_u64(key, value);
    if (n > 0xffffffffull) throw ParseError("replicates: value out of range");
    c.replicates = static_cast<uint32_t>(n);
  } else if (key == "snapshot_steps") {
    c.snapshot_steps = parse_snapshot_steps(value);
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

std::string get_config_key(const SimConfig& c, const std::string& key) {
  if (key == "side") return std::to_string(c.side);
  if (key == "b") return format_double(c.game.b);
  if (key == "l") return format_double(c.game.l);
  if (key == "big_delta") return format_double(c.coev.big_delta);
  if (key == "small_delta") return format_double(c.coev.small_delta);
  if (key == "steps") return std::to_string(c.steps);
  if (key == "tail_window") return std::to_string(c.tail_window);
  if (key == "seeding.mode") return seeding_mode_token(c.seeding.mode);
  if (key == "seeding.abstainer_fraction")
    return format_double(c.seeding.abstainer_fraction);
  if (key == "seeding.placement")
    return c.seeding.placement == Placement::center_cell ? "center" : "random";
  if (key == "rng_seed") return std::to_string(c.rng_seed);
  if (key == "replicates") return std::to_string(c.replicates);
  if (key == "snapshot_steps") return snapshot_steps_token(c.snapshot_steps);
  throw ParseError("unknown config key '" + key + "'");
}

void apply_key_values(SimConfig& c, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected key = value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    try {
      set_config_key(c, key, value);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string config_digest(const SimConfig& c) {
  // Serialized form minus the per-batch fields.
  SimConfig canon = c;
  canon.rng_seed = 0;
  canon.replicates = 1;
  std::string text = to_key_values(canon);
  uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string(buf);
}

}  // namespace copd
