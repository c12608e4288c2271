// Minimal solver usage: hill-climb a length-101 sequence and print each
// record improvement.

#include <cstdio>

#include "skewlabs/solvers.hpp"

int main() {
  using namespace skewlabs;
  ShcConfig cfg;
  cfg.seed = 42;
  cfg.step_threshold = 20'000;

  SearchHooks hooks;
  hooks.on_improvement = [](const ImprovementEvent& ev) {
    std::printf("round %-6llu energy=%-6lld mf=%.4f\n",
                static_cast<unsigned long long>(ev.step),
                static_cast<long long>(ev.energy), ev.merit_factor);
  };

  const auto rec = shc_search(101, cfg, hooks);
  std::printf("best after %llu rounds (%llu quakes): mf=%.4f\n",
              static_cast<unsigned long long>(rec.steps),
              static_cast<unsigned long long>(rec.quakes), rec.best_mf);
  return 0;
}
