// Probe every flip of the Barker-13 sequence, then apply the best one.
// Shows the two cheap kernels: derivative (read-only probe) and
// flip_update (in-place move).

#include <cstdio>
#include <limits>

#include "skewlabs/incremental.hpp"
#include "skewlabs/seqcore.hpp"

int main() {
  using namespace skewlabs;
  const std::int8_t half[] = {1, 1, 1, 1, 1, -1, -1};
  auto seq = SkewSymmetricSequence::from_half(half);
  auto side = sidelobes_naive(seq);
  auto rep = report(seq, side);
  std::printf("start: n=%d energy=%lld mf=%.4f psl=%lld\n", rep.n,
              static_cast<long long>(rep.energy), rep.merit_factor,
              static_cast<long long>(rep.psl));

  int best_q = 0;
  std::int64_t best_delta = std::numeric_limits<std::int64_t>::max();
  for (int q = 0; q < seq.half_length(); ++q) {
    const auto d = derivative(seq, side, q);
    std::printf("  flip q=%d would change energy by %+lld\n", q,
                static_cast<long long>(d));
    if (d < best_delta) {
      best_delta = d;
      best_q = q;
    }
  }

  flip_update(seq, side, best_q);
  rep = report(seq, side);
  std::printf("after flipping q=%d: energy=%lld mf=%.4f\n", best_q,
              static_cast<long long>(rep.energy), rep.merit_factor);
  return 0;
}
