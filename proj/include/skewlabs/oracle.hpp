#pragma once

// Ground-truth machinery: exhaustive search over small half-lengths, the
// tau-table vs sidelobe-array memory model, and a registry of published
// merit factors.

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewlabs/seqcore.hpp"

namespace skewlabs {

struct ExhaustiveResult {
  std::int64_t best_energy = 0;
  double best_mf = 0.0;
  // Every optimal half, canonicalized with the first element fixed to +1
  // (the complement has identical sidelobes, so nothing is lost).
  std::vector<std::vector<std::int8_t>> optimal_halves;
};

/// Scores all 2^l canonical halves (first element +1, the rest free) by
/// the naive path and returns the exact optimum with its full argmax set.
/// Guarded to l <= 16.
inline ExhaustiveResult exhaustive_best(int l) {
  if (l < 1) throw std::invalid_argument("exhaustive_best: l must be >= 1");
  if (l > 16)
    throw std::invalid_argument(
        "exhaustive_best: l > 16 refused (2^l candidates)");
  ExhaustiveResult res;
  res.best_energy = std::numeric_limits<std::int64_t>::max();
  const int n = 2 * l + 1;
  std::vector<std::int8_t> half(static_cast<std::size_t>(l + 1));
  half[0] = 1;
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    for (int i = 1; i <= l; ++i)
      half[static_cast<std::size_t>(i)] =
          static_cast<std::int8_t>((mask >> (i - 1)) & 1u ? 1 : -1);
    const auto seq = SkewSymmetricSequence::from_half(half);
    const std::int64_t e = sidelobes_naive(seq).energy();
    if (e < res.best_energy) {
      res.best_energy = e;
      res.optimal_halves.clear();
      res.optimal_halves.push_back(half);
    } else if (e == res.best_energy) {
      res.optimal_halves.push_back(half);
    }
  }
  res.best_mf = merit_factor(n, res.best_energy);
  return res;
}

struct MemoryEstimate {
  std::uint64_t tau_bytes = 0;       // 4 * n^2, the replaced product table
  std::uint64_t sidelobe_bytes = 0;  // 4 * n, this engine's working array
};

/// Byte counts for the 4-byte-integer memory model. Note the search
/// itself additionally keeps, per worker, one fingerprint set bounded by
/// the SAW inner threshold (8 bytes per visited state); the hill climber
/// keeps nothing beyond the sidelobe array.
inline MemoryEstimate memory_estimate(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("memory_estimate: n must be >= 2");
  const auto un = static_cast<std::uint64_t>(n);
  return {4 * un * un, 4 * un};
}

/// Binary-unit rendering: KB below 1 MiB, MB below 2 GiB, GB above.
/// Whole values keep one decimal ("4.0 MB"), others get two ("95.37 MB").
inline std::string format_bytes(std::uint64_t bytes) {
  constexpr std::uint64_t kKiB = 1ull << 10;
  constexpr std::uint64_t kMiB = 1ull << 20;
  constexpr std::uint64_t kGiB = 1ull << 30;
  const char* unit = "KB";
  double value = 0.0;
  if (bytes < kMiB) {
    value = static_cast<double>(bytes) / static_cast<double>(kKiB);
  } else if (bytes < 2 * kGiB) {
    unit = "MB";
    value = static_cast<double>(bytes) / static_cast<double>(kMiB);
  } else {
    unit = "GB";
    value = static_cast<double>(bytes) / static_cast<double>(kGiB);
  }
  char buf[64];
  if (value == static_cast<double>(static_cast<std::uint64_t>(value)))
    std::snprintf(buf, sizeof buf, "%.1f %s", value, unit);
  else
    std::snprintf(buf, sizeof buf, "%.2f %s", value, unit);
  return buf;
}

struct KnownRecord {
  int n = 0;
  double merit_factor = 0.0;
  std::string_view hex;  // full-sequence encoding; empty when unpublished
  std::string_view note;
};

/// The length-449 record sequence, hex, leading zeroes omitted.
inline constexpr std::string_view kRecord449Hex =
    "96f633d86fe825794ed23a9dfd7d4c3abd080cf76cbf9bdab9a7b2533e3161"
    "901d1950c774ca8bd012cfd7d5d8123c4f97e285469d327478";

/// Published merit factors this project reproduces or competes with.
inline std::span<const KnownRecord> known_records() {
  static constexpr KnownRecord table[] = {
      {11, 12.1, "712", "Barker-11, optimal"},
      {13, 169.0 / 12.0, "1f35", "Barker-13, optimal"},
      {449, 6.5218, "", "previous best known"},
      {449, 6.5319, kRecord449Hex, "record"},
  };
  return table;
}

/// Best registered record for a length, if any.
inline std::optional<KnownRecord> lookup_record(int n) {
  std::optional<KnownRecord> best;
  for (const auto& r : known_records())
    if (r.n == n && (!best || r.merit_factor > best->merit_factor)) best = r;
  return best;
}

}  // namespace skewlabs
