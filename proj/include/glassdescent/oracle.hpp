#pragma once

// Exhaustive reference for small instances: exact ground states, the census
// of all 1-spin-flip stable states, and basin-of-attraction counts.
//
// Configurations are encoded as bit masks: bit i set means spin i is -1.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "glassdescent/analysis.hpp"
#include "glassdescent/descent.hpp"
#include "glassdescent/error.hpp"
#include "glassdescent/instance_io.hpp"
#include "glassdescent/rng.hpp"
#include "glassdescent/sk_model.hpp"

namespace glassdescent {

inline constexpr std::size_t kMaxExactSize = 24;
inline constexpr std::size_t kMaxBasinSize = 20;

inline Spins spins_from_mask(std::uint32_t mask, std::size_t n) {
  Spins s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = ((mask >> i) & 1u) ? -1 : 1;
  return s;
}

inline std::uint32_t mask_from_spins(std::span<const std::int8_t> spins) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < spins.size(); ++i)
    if (spins[i] < 0)
      mask |= 1u << i;
  return mask;
}

struct StableState {
  std::uint32_t mask = 0;
  double energy_per_spin = 0.0;
  bool is_ground = false;
};

struct ExactSolution {
  std::size_t n = 0;
  double ground_energy_per_spin = 0.0;
  std::vector<std::uint32_t> ground_states;
  std::vector<StableState> stable_states; // sorted by (energy, mask)

  /// Index into stable_states, or -1 when `mask` is not stable.
  std::ptrdiff_t find_stable(std::uint32_t mask) const {
    for (std::size_t k = 0; k < stable_states.size(); ++k)
      if (stable_states[k].mask == mask)
        return static_cast<std::ptrdiff_t>(k);
    return -1;
  }
};

namespace detail {

// Exact stability check from freshly computed fields.
inline bool fresh_stable(const Instance &instance, std::uint32_t mask, double &energy) {
  const std::size_t n = instance.size();
  double sum = 0.0;
  bool stable = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = instance.row(i);
    double h = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      h += row[j] * (((mask >> j) & 1u) ? -1.0 : 1.0);
    const double si = ((mask >> i) & 1u) ? -1.0 : 1.0;
    if (2.0 * si * h < 0.0)
      stable = false;
    sum += si * h;
  }
  energy = -0.5 * sum;
  return stable;
}

} // namespace detail

/// Enumerates all 2^n configurations in Gray-code order with O(n) field
/// updates per step. Stability is screened on the incremental fields and
/// confirmed from scratch, so the census is exact.
inline ExactSolution exact_solve(const Instance &instance) {
  const std::size_t n = instance.size();
  if (n > kMaxExactSize)
    throw GuardError("exhaustive enumeration is limited to n <= " +
                     std::to_string(kMaxExactSize) + ", got n = " + std::to_string(n));

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (double v : instance.row(i))
      row_sum += std::abs(v);
    scale = std::max(scale, row_sum);
  }
  const double screen_tol = 1e-9 * std::max(scale, 1e-300);

  std::vector<double> h(n, 0.0);
  std::vector<double> s(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h[i] += instance.coupling(i, j);

  ExactSolution sol;
  sol.n = n;
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint32_t mask = 0;
  for (std::uint64_t k = 0; k < total; ++k) {
    bool candidate = true;
    for (std::size_t i = 0; i < n; ++i)
      if (2.0 * s[i] * h[i] < -screen_tol) {
        candidate = false;
        break;
      }
    if (candidate) {
      double e = 0.0;
      if (detail::fresh_stable(instance, mask, e))
        sol.stable_states.push_back({mask, e / static_cast<double>(n), false});
    }
    if (k + 1 == total)
      break;
    const auto bit = static_cast<std::size_t>(std::countr_zero(k + 1));
    const double step = 2.0 * s[bit];
    const auto row = instance.row(bit);
    for (std::size_t j = 0; j < n; ++j)
      h[j] -= step * row[j];
    s[bit] = -s[bit];
    mask ^= 1u << bit;
  }

  if (sol.stable_states.empty())
    throw InvariantError("enumeration found no stable state");
  std::sort(sol.stable_states.begin(), sol.stable_states.end(),
            [](const StableState &a, const StableState &b) {
              return a.energy_per_spin != b.energy_per_spin ? a.energy_per_spin < b.energy_per_spin
                                                            : a.mask < b.mask;
            });
  const double e_min = sol.stable_states.front().energy_per_spin;
  const double tol = 1e-12 * std::max(1.0, std::abs(e_min));
  sol.ground_energy_per_spin = e_min;
  for (auto &st : sol.stable_states)
    if (st.energy_per_spin - e_min <= tol) {
      st.is_ground = true;
      sol.ground_states.push_back(st.mask);
    }
  return sol;
}

struct QuenchedEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::vector<double> per_instance;
  std::vector<std::uint64_t> instance_seeds;
};

/// Seed of disorder realization d at size n under a master seed. Shared with
/// the experiment harness so both see the same instances.
inline std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t n, std::size_t d) {
  return derive_seed({master_seed, kInstanceStreamTag, n, d});
}

/// Disorder average of the exact ground energy per spin.
inline QuenchedEstimate quenched_ground_energy(std::size_t n, std::size_t num_disorder,
                                               std::uint64_t seed) {
  if (n > kMaxExactSize)
    throw GuardError("exhaustive enumeration is limited to n <= " +
                     std::to_string(kMaxExactSize) + ", got n = " + std::to_string(n));
  if (num_disorder == 0)
    throw ValidationError("num_disorder must be at least 1");
  QuenchedEstimate q;
  for (std::size_t d = 0; d < num_disorder; ++d) {
    const auto s = instance_seed(seed, n, d);
    q.instance_seeds.push_back(s);
    q.per_instance.push_back(exact_solve(generate_instance(n, s)).ground_energy_per_spin);
  }
  const auto sum = summarize(q.per_instance);
  q.mean = sum.mean;
  q.stderr_mean = sum.stderr_mean;
  return q;
}

struct BasinEntry {
  std::size_t stable_state_id = 0; // index into ExactSolution::stable_states
  std::uint32_t mask = 0;
  double energy_per_spin = 0.0;
  std::uint64_t basin_count = 0;
  bool is_ground = false;
};

struct BasinReport {
  std::size_t n = 0;
  std::vector<BasinEntry> entries; // one per stable state, including empty basins
  std::uint64_t total = 0;         // 2^n
  double ground_fraction = 0.0;
};

/// Descends from every one of the 2^n configurations and tabulates where
/// each run terminates. For stochastic params the run from configuration k
/// uses the stream derive_seed(run_seed, k).
inline BasinReport basin_census(const Instance &instance, const DescentParams &params) {
  const std::size_t n = instance.size();
  if (n > kMaxBasinSize)
    throw GuardError("basin census is limited to n <= " + std::to_string(kMaxBasinSize) +
                     ", got n = " + std::to_string(n));
  params.validate();
  const ExactSolution sol = exact_solve(instance);

  std::unordered_map<std::uint32_t, std::size_t> index_of;
  BasinReport report;
  report.n = n;
  for (std::size_t k = 0; k < sol.stable_states.size(); ++k) {
    const auto &st = sol.stable_states[k];
    index_of.emplace(st.mask, k);
    report.entries.push_back({k, st.mask, st.energy_per_spin, 0, st.is_ground});
  }

  const bool stochastic = (params.p_greedy > 0.0 && params.p_greedy < 1.0) ||
                          params.tie_break == TieBreak::Random;
  const std::uint64_t total = std::uint64_t{1} << n;
  SpinState state(instance, spins_from_mask(0, n));
  Rng rng(params.run_seed);
  for (std::uint64_t k = 0; k < total; ++k) {
    state.reset(spins_from_mask(static_cast<std::uint32_t>(k), n));
    if (stochastic)
      rng.seed(derive_seed({params.run_seed, kBasinStreamTag, k}));
    descend_in_place(state, params, rng);
    const auto it = index_of.find(mask_from_spins(state.spins()));
    if (it == index_of.end())
      throw InvariantError("descent from configuration " + std::to_string(k) +
                           " ended outside the stable-state census");
    ++report.entries[it->second].basin_count;
  }
  report.total = total;
  std::uint64_t ground = 0;
  for (const auto &e : report.entries)
    if (e.is_ground)
      ground += e.basin_count;
  report.ground_fraction = static_cast<double>(ground) / static_cast<double>(total);
  return report;
}

inline void write_basin_csv(std::ostream &out, const BasinReport &report) {
  out << "stable_state_id,energy_per_spin,basin_count,is_ground\n";
  for (const auto &e : report.entries)
    out << e.stable_state_id << ',' << format_double(e.energy_per_spin) << ',' << e.basin_count
        << ',' << (e.is_ground ? "true" : "false") << '\n';
}

} // namespace glassdescent
