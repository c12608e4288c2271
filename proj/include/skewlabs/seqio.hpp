#pragma once

// Bit-exact hex codec, append-only run log (JSON lines), and the
// schedule CSV export.
//
// Hex convention, frozen: the string is an n-bit big-endian integer,
// left-padded with zero bits; window bit 0 (the most significant of the
// n bits) is element b_0; bit 1 maps to +1, bit 0 to -1. Merit-factor
// verification does not depend on this choice — complement and reversal
// both preserve every |C_u| — the fixed convention just makes
// round-trips exact. Whitespace is stripped before decoding (published
// payloads are line-wrapped).

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skewlabs/solvers.hpp"

namespace skewlabs {

inline constexpr std::string_view kRunLogSchema = "skewlabs.run/1";

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

/// Decodes a hex string into the n-element ±1 sequence it encodes.
/// Throws std::invalid_argument on non-hex characters or when the value
/// needs more than n bits.
inline std::vector<std::int8_t> decode_hex(std::string_view hex, int n) {
  if (n < 1) throw std::invalid_argument("decode_hex: n must be >= 1");
  std::string digits;
  digits.reserve(hex.size());
  for (const char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (detail::hex_digit(c) < 0)
      throw std::invalid_argument(std::string("decode_hex: not a hex digit: '") +
                                  c + "'");
    digits.push_back(c);
  }
  if (digits.empty()) throw std::invalid_argument("decode_hex: empty input");

  const auto total_bits = static_cast<std::int64_t>(digits.size()) * 4;
  const auto bit_at = [&](std::int64_t g) -> int {  // MSB-first over digits
    const int d = detail::hex_digit(digits[static_cast<std::size_t>(g / 4)]);
    return (d >> (3 - static_cast<int>(g % 4))) & 1;
  };
  // Everything above the low n bits must be zero.
  for (std::int64_t g = 0; g < total_bits - n; ++g)
    if (bit_at(g))
      throw std::invalid_argument(
          "decode_hex: value does not fit in " + std::to_string(n) + " bits");

  std::vector<std::int8_t> seq(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const std::int64_t g = total_bits - n + k;
    seq[static_cast<std::size_t>(k)] =
        static_cast<std::int8_t>(g >= 0 && bit_at(g) ? 1 : -1);
  }
  return seq;
}

/// Inverse of decode_hex; lowercase, leading zero digits stripped
/// (all-(-1) encodes as "0").
inline std::string encode_hex(std::span<const std::int8_t> seq) {
  const int n = static_cast<int>(seq.size());
  if (n < 1) throw std::invalid_argument("encode_hex: empty sequence");
  if (!is_plus_minus_one(seq))
    throw std::invalid_argument("encode_hex: elements must be -1 or +1");
  const int digits = (n + 3) / 4;
  const int pad = digits * 4 - n;
  std::string out;
  out.reserve(static_cast<std::size_t>(digits));
  for (int d = 0; d < digits; ++d) {
    int v = 0;
    for (int j = 0; j < 4; ++j) {
      const int k = d * 4 + j - pad;  // window index of this bit
      const int bit = (k >= 0 && seq[static_cast<std::size_t>(k)] > 0) ? 1 : 0;
      v = (v << 1) | bit;
    }
    out.push_back("0123456789abcdef"[v]);
  }
  const auto first = out.find_first_not_of('0');
  if (first == std::string::npos) return "0";
  return out.substr(first);
}

inline std::string encode_hex(const SkewSymmetricSequence& seq) {
  return encode_hex(seq.elements());
}

// --- run log ---------------------------------------------------------

namespace detail {

inline nlohmann::json config_to_json(const SawConfig& c) {
  nlohmann::json j{{"algo", "saw"},
                   {"inner_threshold", c.inner_threshold},
                   {"outer_threshold", c.outer_threshold},
                   {"hash_p", c.hash_p},
                   {"hash_q", c.hash_q},
                   {"seed", c.seed}};
  if (c.target_mf) j["target_mf"] = *c.target_mf;
  return j;
}

inline nlohmann::json config_to_json(const ShcConfig& c) {
  nlohmann::json j{{"algo", "shc"},
                   {"step_threshold", c.step_threshold},
                   {"seed", c.seed},
                   {"record_only_acceptance", c.record_only_acceptance}};
  if (c.quake_size) j["quake_size"] = *c.quake_size;
  if (c.target_mf) j["target_mf"] = *c.target_mf;
  return j;
}

inline std::variant<SawConfig, ShcConfig> config_from_json(
    const nlohmann::json& j) {
  const auto algo = j.at("algo").get<std::string>();
  if (algo == "saw") {
    SawConfig c;
    c.inner_threshold = j.at("inner_threshold").get<std::uint64_t>();
    c.outer_threshold = j.at("outer_threshold").get<std::uint64_t>();
    c.hash_p = j.at("hash_p").get<std::uint64_t>();
    c.hash_q = j.at("hash_q").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("target_mf")) c.target_mf = j.at("target_mf").get<double>();
    return c;
  }
  if (algo == "shc") {
    ShcConfig c;
    c.step_threshold = j.at("step_threshold").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.record_only_acceptance = j.at("record_only_acceptance").get<bool>();
    if (j.contains("quake_size")) c.quake_size = j.at("quake_size").get<int>();
    if (j.contains("target_mf")) c.target_mf = j.at("target_mf").get<double>();
    return c;
  }
  throw std::invalid_argument("unknown algo '" + algo + "'");
}

}  // namespace detail

/// One self-contained JSON line per record. The sequence is persisted as
/// the hex of its defining half.
inline void write_run_record(std::ostream& os, const RunRecord& r) {
  nlohmann::json j{
      {"schema", std::string(kRunLogSchema)},
      {"n", r.n},
      {"seed", r.seed},
      {"best_energy", r.best_energy},
      {"best_mf", r.best_mf},
      {"best_half_hex", encode_hex(r.best_sequence.half())},
      {"wall_time_s", r.wall_time_s},
      {"steps", r.steps},
      {"quakes", r.quakes},
  };
  j["config"] = std::visit(
      [](const auto& c) { return detail::config_to_json(c); }, r.config);
  os << j.dump() << '\n';
}

inline void append_run_record(const std::filesystem::path& path,
                              const RunRecord& r) {
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open log file: " + path.string());
  write_run_record(os, r);
}

struct RunLogError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct RunLogPage {
  std::vector<RunRecord> records;
  std::vector<RunLogError> errors;
};

/// Reads every record; malformed lines become per-line errors and the
/// rest are still returned (a truncated final line is tolerated the same
/// way).
inline RunLogPage read_run_records(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open log file: " + path.string());
  RunLogPage page;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto schema = j.at("schema").get<std::string>();
      if (schema != kRunLogSchema)
        throw std::invalid_argument("unsupported schema version '" + schema +
                                    "' (expected '" +
                                    std::string(kRunLogSchema) + "')");
      const int n = j.at("n").get<int>();
      const int l = (n - 1) / 2;
      const auto half =
          decode_hex(j.at("best_half_hex").get<std::string>(), l + 1);
      page.records.push_back(RunRecord{
          n,
          j.at("seed").get<std::uint64_t>(),
          detail::config_from_json(j.at("config")),
          j.at("best_energy").get<std::int64_t>(),
          j.at("best_mf").get<double>(),
          SkewSymmetricSequence::from_half(half),
          j.at("wall_time_s").get<double>(),
          j.at("steps").get<std::uint64_t>(),
          j.at("quakes").get<std::uint64_t>(),
      });
    } catch (const std::exception& e) {
      page.errors.push_back({lineno, e.what()});
    }
  }
  return page;
}

// --- schedule export --------------------------------------------------

/// CSV of (n, quake_schedule, time_estimate) rows for external plotting
/// or refitting. Header is fixed: n,quake,est_seconds.
inline void export_schedule_csv(std::ostream& os, std::span<const int> ns) {
  os << "n,quake,est_seconds\n";
  char buf[64];
  for (const int n : ns) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.2f", n, quake_schedule(n),
                  time_estimate(n));
    os << buf << '\n';
  }
}

inline void export_schedule_csv(const std::filesystem::path& path,
                                std::span<const int> ns) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write: " + path.string());
  export_schedule_csv(os, ns);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace skewlabs
