#pragma once

// Skew-symmetric ±1 sequences and the reference (quadratic-time) path for
// their aperiodic autocorrelation, energy, merit factor and PSL.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace skewlabs {

/// Odd-length ±1 sequence with b[l+i] = (-1)^i * b[l-i], n = 2l+1.
///
/// The invariant is established at construction and preserved by the only
/// mutator, flip_pair(), which negates a position together with its mirror.
class SkewSymmetricSequence {
 public:
  /// Expands the first l+1 elements into the unique skew-symmetric
  /// sequence of length 2l+1. Throws std::invalid_argument for halves
  /// shorter than 2 (n = 1 is rejected everywhere) or non-±1 values.
  static SkewSymmetricSequence from_half(std::span<const std::int8_t> half) {
    if (half.size() < 2)
      throw std::invalid_argument(
          "from_half: half needs at least 2 elements (n >= 3)");
    const int l = static_cast<int>(half.size()) - 1;
    std::vector<std::int8_t> e(static_cast<std::size_t>(2 * l + 1));
    for (int i = 0; i <= l; ++i) {
      if (half[static_cast<std::size_t>(i)] != 1 &&
          half[static_cast<std::size_t>(i)] != -1)
        throw std::invalid_argument("from_half: elements must be -1 or +1");
      e[static_cast<std::size_t>(i)] = half[static_cast<std::size_t>(i)];
    }
    for (int i = 1; i <= l; ++i) {
      const std::int8_t v = e[static_cast<std::size_t>(l - i)];
      e[static_cast<std::size_t>(l + i)] =
          static_cast<std::int8_t>((i & 1) ? -v : v);
    }
    return SkewSymmetricSequence(std::move(e), l);
  }

  int size() const { return static_cast<int>(elems_.size()); }
  int half_length() const { return l_; }

  /// Element value as plain int (-1 or +1).
  int operator[](int i) const { return elems_[static_cast<std::size_t>(i)]; }

  std::span<const std::int8_t> elements() const { return elems_; }

  /// First l+1 elements; the compressed form used by the I/O layer.
  std::span<const std::int8_t> half() const {
    return {elems_.data(), static_cast<std::size_t>(l_ + 1)};
  }

  /// Negates positions q and n-q-1 (q < l), preserving skew-symmetry.
  void flip_pair(int q) {
    if (q < 0 || q >= l_)
      throw std::out_of_range("flip_pair: q must satisfy 0 <= q < l");
    elems_[static_cast<std::size_t>(q)] =
        static_cast<std::int8_t>(-elems_[static_cast<std::size_t>(q)]);
    const int m = size() - q - 1;
    elems_[static_cast<std::size_t>(m)] =
        static_cast<std::int8_t>(-elems_[static_cast<std::size_t>(m)]);
  }

  bool operator==(const SkewSymmetricSequence&) const = default;

 private:
  SkewSymmetricSequence(std::vector<std::int8_t> e, int l)
      : elems_(std::move(e)), l_(l) {}

  std::vector<std::int8_t> elems_;
  int l_ = 0;
};

/// The reversed sidelobe vector: values[i] = C_{n-i-1} for i in 0..n-2.
/// The mainlobe C_0 = n is excluded, so the energy is the plain sum of
/// squares of all entries. For a skew-symmetric owner every odd-index
/// entry is 0 and |values[0]| = 1.
struct SidelobeArray {
  std::vector<std::int32_t> values;

  int size() const { return static_cast<int>(values.size()); }

  std::int64_t energy() const {
    std::int64_t e = 0;
    for (const std::int64_t v : values) e += v * v;
    return e;
  }

  std::int32_t psl() const {
    std::int32_t p = 0;
    for (const std::int32_t v : values) p = std::max(p, std::abs(v));
    return p;
  }

  bool operator==(const SidelobeArray&) const = default;
};

struct EnergyReport {
  int n = 0;
  std::int64_t energy = 0;
  double merit_factor = 0.0;  // n^2 / (2 * energy)
  std::int64_t psl = 0;

  bool operator==(const EnergyReport&) const = default;
};

inline bool is_plus_minus_one(std::span<const std::int8_t> seq) {
  for (const std::int8_t v : seq)
    if (v != 1 && v != -1) return false;
  return true;
}

/// Direct O(n^2) summation of every sidelobe; the oracle the incremental
/// path is tested against. Accepts any ±1 sequence with n >= 2.
inline SidelobeArray sidelobes_naive(std::span<const std::int8_t> seq) {
  const int n = static_cast<int>(seq.size());
  if (n < 2)
    throw std::invalid_argument("sidelobes_naive: sequence needs n >= 2");
  if (!is_plus_minus_one(seq))
    throw std::invalid_argument("sidelobes_naive: elements must be -1 or +1");
  SidelobeArray s;
  s.values.resize(static_cast<std::size_t>(n - 1));
  for (int i = 0; i <= n - 2; ++i) {
    std::int32_t acc = 0;
    const int shift = n - i - 1;
    for (int j = 0; j <= i; ++j)
      acc += static_cast<std::int32_t>(seq[static_cast<std::size_t>(j)]) *
             seq[static_cast<std::size_t>(j + shift)];
    s.values[static_cast<std::size_t>(i)] = acc;
  }
  return s;
}

inline SidelobeArray sidelobes_naive(const SkewSymmetricSequence& seq) {
  return sidelobes_naive(seq.elements());
}

/// Energy, merit factor and PSL from a sidelobe array (n = size + 1).
inline EnergyReport report(const SidelobeArray& s) {
  EnergyReport r;
  r.n = s.size() + 1;
  r.energy = s.energy();
  r.psl = s.psl();
  if (r.energy == 0)
    throw std::logic_error("report: zero energy; sidelobe array corrupt");
  r.merit_factor =
      static_cast<double>(r.n) * r.n / (2.0 * static_cast<double>(r.energy));
  return r;
}

inline EnergyReport report(const SkewSymmetricSequence& b,
                           const SidelobeArray& s) {
  if (s.size() != b.size() - 1)
    throw std::invalid_argument("report: sidelobe array length mismatch");
  return report(s);
}

inline double merit_factor(int n, std::int64_t energy) {
  return static_cast<double>(n) * n / (2.0 * static_cast<double>(energy));
}

/// All-elements negation. Sidelobes (hence energy, MF, PSL) are unchanged:
/// every product b_j * b_{j+u} picks up (-1)^2.
inline std::vector<std::int8_t> complement(std::span<const std::int8_t> seq) {
  std::vector<std::int8_t> out(seq.begin(), seq.end());
  for (auto& v : out) v = static_cast<std::int8_t>(-v);
  return out;
}

inline SkewSymmetricSequence complement(const SkewSymmetricSequence& seq) {
  const auto negated = complement(seq.elements());
  return SkewSymmetricSequence::from_half(
      std::span<const std::int8_t>(negated.data(),
                                   static_cast<std::size_t>(seq.half_length() + 1)));
}

/// True iff the sequence has odd length >= 3, ±1 elements, and satisfies
/// b[l+i] = (-1)^i * b[l-i] for all i.
inline bool is_skew_symmetric(std::span<const std::int8_t> seq) {
  const int n = static_cast<int>(seq.size());
  if (n < 3 || n % 2 == 0) return false;
  if (!is_plus_minus_one(seq)) return false;
  const int l = (n - 1) / 2;
  for (int i = 1; i <= l; ++i) {
    const int expect = (i & 1) ? -seq[static_cast<std::size_t>(l - i)]
                               : seq[static_cast<std::size_t>(l - i)];
    if (seq[static_cast<std::size_t>(l + i)] != expect) return false;
  }
  return true;
}

/// Uniformly random half expanded by from_half, drawing one sign per
/// element from `rng`. Deterministic for a fixed engine state.
template <class URBG>
SkewSymmetricSequence random_sequence_from(URBG& rng, int l) {
  if (l < 1) throw std::invalid_argument("random_sequence: l must be >= 1");
  std::vector<std::int8_t> half(static_cast<std::size_t>(l + 1));
  for (auto& v : half)
    v = static_cast<std::int8_t>((static_cast<std::uint64_t>(rng()) & 1u) ? 1
                                                                          : -1);
  return SkewSymmetricSequence::from_half(half);
}

inline SkewSymmetricSequence random_sequence(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_sequence_from(rng, l);
}

}  // namespace skewlabs
