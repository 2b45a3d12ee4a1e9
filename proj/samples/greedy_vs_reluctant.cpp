// Runs greedy, reluctant and mixed descent from the same random starts on one
// instance and prints the mean relaxation time and the best energy found.

#include <cstdio>
#include <cstdlib>
#include <limits>

#include "glassdescent/glassdescent.hpp"

int main(int argc, char **argv) {
  namespace gd = glassdescent;
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 100;
  const std::size_t starts = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : n;

  const auto instance = gd::generate_instance(n, 1);
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    double best = std::numeric_limits<double>::infinity();
    double flips = 0.0;
    for (std::size_t r = 0; r < starts; ++r) {
      gd::Rng rng(gd::derive_seed({1, r}));
      gd::DescentParams params;
      params.p_greedy = p;
      params.run_seed = rng();
      const auto rec = gd::descend(instance, gd::random_initial(n, rng), params, false);
      flips += static_cast<double>(rec.flips);
      best = std::min(best, rec.final_energy_per_spin);
    }
    std::printf("P=%-4g tau=%-10.1f best_energy_per_spin=%.5f\n", p, flips / starts, best);
  }
  return 0;
}
