#pragma once

// Shared fixtures and brute-force oracles. Nothing here calls the cached
// SpinState path, so it can check it independently.

#include <cstdint>
#include <vector>

#include "glassdescent/sk_model.hpp"

namespace glassdescent::testing {

// J_01 = +1, J_02 = -1, J_12 = +2 (0-based).
inline Instance three_spin() {
  const double upper[] = {1.0, -1.0, 2.0};
  return Instance::from_upper_triangle(3, upper, 0);
}

inline Instance two_spin_ferromagnet() {
  const double upper[] = {1.0};
  return Instance::from_upper_triangle(2, upper, 0);
}

// Pairwise double sum over i < j, counted twice; written independently of energy().
inline double brute_energy(const Instance &inst, const Spins &s) {
  double e = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (std::size_t j = i + 1; j < inst.size(); ++j)
      e -= inst.coupling(i, j) * s[i] * s[j];
  return e;
}

inline double brute_field(const Instance &inst, const Spins &s, std::size_t i) {
  double h = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j)
    if (j != i)
      h += inst.coupling(i, j) * s[j];
  return h;
}

inline double brute_delta(const Instance &inst, const Spins &s, std::size_t i) {
  Spins t = s;
  t[i] = static_cast<std::int8_t>(-t[i]);
  return brute_energy(inst, t) - brute_energy(inst, s);
}

inline Spins negated(const Spins &s) {
  Spins t = s;
  for (auto &v : t)
    v = static_cast<std::int8_t>(-v);
  return t;
}

} // namespace glassdescent::testing
