#pragma once

// Linear-time, constant-extra-memory maintenance of the sidelobe array
// under a paired flip. A flip at q (q < l) negates positions q and
// n-q-1; only odd-position entries of the reversed sidelobe array can
// change, and each by a fixed small combination of four sequence
// elements. Six mutually exclusive cases cover every (r, q) pair:
//
//   I   even r                      unchanged (always 0 for skew-symmetric)
//   II  odd r <= q                  unchanged
//   III q < r < n-q, r != 2q+1      -2*(e1*e2 + e3*e4)
//   IV  q < r < n-q, r == 2q+1      unchanged
//   V   r >= n-q,    r != 2q+1      -2*(e1*e2 + e3*e4 + e4*e5 + e6*e1)
//   VI  r >= n-q,    r == 2q+1      -2*(e4*e5 + e6*e1)
//
// with e1 = L[q], e2 = L[n+q-r], e3 = L[r-q-1], e4 = L[n-q-1],
// e5 = L[2n-q-r-1], e6 = L[q+r-n], all read before the flip. e2/e3 and
// e5/e6 are loaded only inside the branches that use them; outside those
// branches the indices leave [0, n).
//
// The energy delta of the flip collapses to a closed form per odd r
// (sigma = (-1)^(l-q), kappa = -8*S_r*L[q], S_r = values[r-1]):
//
//   case III:  16 + kappa*sigma*e1
//   case V:    32 + kappa*(e2 + sigma*e1) + 32*sigma*e1*e2
//   case VI:   16 + kappa*e2
//
// so a flip can be probed exactly, in one O(n) pass, without touching
// the sequence or the sidelobes.

#include <array>
#include <cstdint>
#include <stdexcept>

#include "skewlabs/seqcore.hpp"

namespace skewlabs {

/// Per-case hit counters for the six update cases above. Case I counts
/// once per operation (even entries are never visited by construction).
struct FlipBranchCounters {
  std::array<std::uint64_t, 6> hits{};

  std::uint64_t& operator[](int property) {
    return hits[static_cast<std::size_t>(property - 1)];
  }
  std::uint64_t operator[](int property) const {
    return hits[static_cast<std::size_t>(property - 1)];
  }
  bool all_exercised() const {
    for (const auto h : hits)
      if (h == 0) return false;
    return true;
  }
};

namespace detail {

struct NoCounters {
  void hit(int, std::uint64_t = 1) const {}
};

struct CountingRef {
  FlipBranchCounters* c;
  void hit(int property, std::uint64_t by = 1) const {
    c->hits[static_cast<std::size_t>(property - 1)] += by;
  }
};

inline void check_flip_index(const SkewSymmetricSequence& seq, int q) {
  if (q < 0 || q >= seq.half_length())
    throw std::out_of_range("flip index q must satisfy 0 <= q < l");
}

// First odd r strictly greater than q.
inline int first_odd_after(int q) { return q + 1 + (q & 1); }

template <class Counters>
void flip_update_impl(SkewSymmetricSequence& seq, SidelobeArray& side, int q,
                      Counters cnt) {
  check_flip_index(seq, q);
  const int n = seq.size();
  const std::int8_t* b = seq.elements().data();
  std::int32_t* s = side.values.data();

  const std::int32_t e1 = b[q];
  const std::int32_t e4 = b[n - q - 1];
  const int tie = 2 * q + 1;
  const int mirror = n - q;

  cnt.hit(1);                                        // even entries untouched
  cnt.hit(2, static_cast<std::uint64_t>((q + 1) / 2));  // odd r <= q skipped

  for (int r = first_odd_after(q); r <= n - 2; r += 2) {
    if (r < mirror) {
      if (r != tie) {
        const std::int32_t e2 = b[n + q - r];
        const std::int32_t e3 = b[r - q - 1];
        s[r - 1] -= 2 * (e1 * e2 + e3 * e4);
        cnt.hit(3);
      } else {
        cnt.hit(4);
      }
    } else {
      if (r != tie) {
        const std::int32_t e2 = b[n + q - r];
        const std::int32_t e3 = b[r - q - 1];
        const std::int32_t e5 = b[2 * n - q - r - 1];
        const std::int32_t e6 = b[q + r - n];
        s[r - 1] -= 2 * (e1 * e2 + e3 * e4 + e4 * e5 + e6 * e1);
        cnt.hit(5);
      } else {
        const std::int32_t e5 = b[2 * n - q - r - 1];
        const std::int32_t e6 = b[q + r - n];
        s[r - 1] -= 2 * (e4 * e5 + e6 * e1);
        cnt.hit(6);
      }
    }
  }
  seq.flip_pair(q);
}

template <class Counters>
std::int64_t derivative_impl(const SkewSymmetricSequence& seq,
                             const SidelobeArray& side, int q, Counters cnt) {
  check_flip_index(seq, q);
  const int n = seq.size();
  const int l = seq.half_length();
  const std::int8_t* b = seq.elements().data();
  const std::int32_t* s = side.values.data();

  const std::int64_t lq = b[q];
  const std::int64_t sigma = ((l - q) & 1) ? -1 : 1;
  const int tie = 2 * q + 1;
  const int mirror = n - q;

  cnt.hit(1);
  cnt.hit(2, static_cast<std::uint64_t>((q + 1) / 2));

  std::int64_t delta = 0;
  for (int r = first_odd_after(q); r <= n - 2; r += 2) {
    const std::int64_t kappa = -8 * static_cast<std::int64_t>(s[r - 1]) * lq;
    if (r < mirror) {
      if (r != tie) {
        const std::int64_t e1 = b[r - q - 1];
        delta += 16 + kappa * sigma * e1;
        cnt.hit(3);
      } else {
        cnt.hit(4);
      }
    } else {
      if (r != tie) {
        const std::int64_t e1 = b[r - q - 1];
        const std::int64_t e2 = b[q + r - n];
        delta += 32 + kappa * (e2 + sigma * e1) + 32 * sigma * e1 * e2;
        cnt.hit(5);
      } else {
        // Tie case r == 2q+1. The sidelobe delta here is -4*L[q]*e2
        // with no sigma: both products in the two-term update carry a
        // sigma^2 = 1 once the mirror identities are substituted.
        const std::int64_t e2 = b[q + r - n];
        delta += 16 + kappa * e2;
        cnt.hit(6);
      }
    }
  }
  return delta;
}

// Same walk as flip_update, additionally accumulating the exact energy
// change from the sidelobe deltas: (s+d)^2 - s^2 = d*(2s + d). This is a
// second algebraic route to the same value derivative() computes.
template <class Counters>
std::int64_t try_flip_impl(SkewSymmetricSequence& seq, SidelobeArray& side,
                           int q, Counters cnt) {
  check_flip_index(seq, q);
  const int n = seq.size();
  const std::int8_t* b = seq.elements().data();
  std::int32_t* s = side.values.data();

  const std::int32_t e1 = b[q];
  const std::int32_t e4 = b[n - q - 1];
  const int tie = 2 * q + 1;
  const int mirror = n - q;

  cnt.hit(1);
  cnt.hit(2, static_cast<std::uint64_t>((q + 1) / 2));

  std::int64_t delta = 0;
  const auto apply = [&](int r, std::int32_t d) {
    const std::int64_t old = s[r - 1];
    s[r - 1] += d;
    delta += static_cast<std::int64_t>(d) * (2 * old + d);
  };

  for (int r = first_odd_after(q); r <= n - 2; r += 2) {
    if (r < mirror) {
      if (r != tie) {
        const std::int32_t e2 = b[n + q - r];
        const std::int32_t e3 = b[r - q - 1];
        apply(r, -2 * (e1 * e2 + e3 * e4));
        cnt.hit(3);
      } else {
        cnt.hit(4);
      }
    } else {
      if (r != tie) {
        const std::int32_t e2 = b[n + q - r];
        const std::int32_t e3 = b[r - q - 1];
        const std::int32_t e5 = b[2 * n - q - r - 1];
        const std::int32_t e6 = b[q + r - n];
        apply(r, -2 * (e1 * e2 + e3 * e4 + e4 * e5 + e6 * e1));
        cnt.hit(5);
      } else {
        const std::int32_t e5 = b[2 * n - q - r - 1];
        const std::int32_t e6 = b[q + r - n];
        apply(r, -2 * (e4 * e5 + e6 * e1));
        cnt.hit(6);
      }
    }
  }
  seq.flip_pair(q);
  return delta;
}

}  // namespace detail

/// In-place paired flip at q; `side` ends up equal to
/// sidelobes_naive(new seq), exactly. O(n) time, O(1) extra memory.
inline void flip_update(SkewSymmetricSequence& seq, SidelobeArray& side,
                        int q) {
  detail::flip_update_impl(seq, side, q, detail::NoCounters{});
}

inline void flip_update(SkewSymmetricSequence& seq, SidelobeArray& side, int q,
                        FlipBranchCounters& counters) {
  detail::flip_update_impl(seq, side, q, detail::CountingRef{&counters});
}

/// Exact energy change E(seq with q flipped) - E(seq), computed without
/// modifying seq or side. O(n) time, no allocation.
inline std::int64_t derivative(const SkewSymmetricSequence& seq,
                               const SidelobeArray& side, int q) {
  return detail::derivative_impl(seq, side, q, detail::NoCounters{});
}

inline std::int64_t derivative(const SkewSymmetricSequence& seq,
                               const SidelobeArray& side, int q,
                               FlipBranchCounters& counters) {
  return detail::derivative_impl(seq, side, q, detail::CountingRef{&counters});
}

/// Fused probe + flip: single pass returning the same delta as
/// derivative() while applying the same update as flip_update().
inline std::int64_t try_flip(SkewSymmetricSequence& seq, SidelobeArray& side,
                             int q) {
  return detail::try_flip_impl(seq, side, q, detail::NoCounters{});
}

inline std::int64_t try_flip(SkewSymmetricSequence& seq, SidelobeArray& side,
                             int q, FlipBranchCounters& counters) {
  return detail::try_flip_impl(seq, side, q, detail::CountingRef{&counters});
}

}  // namespace skewlabs
