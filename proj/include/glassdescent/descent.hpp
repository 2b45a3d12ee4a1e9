#pragma once

// Greedy, reluctant and mixed single-spin-flip descent.
//
// Each step draws a coin: with probability p_greedy the spin with the most
// negative energy change is flipped, otherwise the spin whose energy change
// is negative and closest to zero. Only strictly improving moves (dE < 0)
// qualify, so every trajectory is strictly decreasing and ends in a
// 1-spin-flip stable configuration.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "glassdescent/error.hpp"
#include "glassdescent/rng.hpp"
#include "glassdescent/sk_model.hpp"

namespace glassdescent {

enum class TieBreak { LowestIndex, Random };

inline const char *to_string(TieBreak t) noexcept {
  return t == TieBreak::LowestIndex ? "lowest-index" : "random";
}

inline TieBreak parse_tie_break(const std::string &s) {
  if (s == "lowest-index" || s == "lowest")
    return TieBreak::LowestIndex;
  if (s == "random")
    return TieBreak::Random;
  throw ValidationError("unknown tie-break policy '" + s + "'");
}

struct DescentParams {
  double p_greedy = 1.0;
  TieBreak tie_break = TieBreak::LowestIndex;
  std::uint64_t run_seed = 0;

  void validate() const {
    if (!(p_greedy >= 0.0 && p_greedy <= 1.0))
      throw ValidationError("p_greedy must lie in [0, 1]");
  }
};

struct RunRecord {
  std::uint64_t flips = 0;
  double final_energy_per_spin = 0.0;
  std::optional<Spins> final_spins;
  std::size_t disorder_index = 0;
  std::size_t restart_index = 0;
};

enum class MoveKind { Greedy, Reluctant };

namespace detail {

// Most negative dE, or none when no dE < 0.
inline std::optional<std::size_t> greedy_scan(const SpinState &state) noexcept {
  const std::size_t n = state.size();
  std::size_t best = n;
  double best_de = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double de = state.delta_unchecked(i);
    if (de < best_de) {
      best_de = de;
      best = i;
    }
  }
  if (best == n)
    return std::nullopt;
  return best;
}

// Largest dE among dE < 0, or none.
inline std::optional<std::size_t> reluctant_scan(const SpinState &state) noexcept {
  const std::size_t n = state.size();
  std::size_t best = n;
  double best_de = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double de = state.delta_unchecked(i);
    if (de < 0.0 && de > best_de) {
      best_de = de;
      best = i;
    }
  }
  if (best == n)
    return std::nullopt;
  return best;
}

template <typename Generator>
std::size_t pick_among_ties(const SpinState &state, std::size_t chosen, Generator &rng) {
  const double target = state.delta_unchecked(chosen);
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state.delta_unchecked(i) == target)
      ties.push_back(i);
  if (ties.size() == 1)
    return chosen;
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return ties[pick(rng)];
}

template <typename Generator> MoveKind draw_move_kind(double p_greedy, Generator &rng) {
  if (p_greedy >= 1.0)
    return MoveKind::Greedy;
  if (p_greedy <= 0.0)
    return MoveKind::Reluctant;
  std::bernoulli_distribution coin(p_greedy);
  return coin(rng) ? MoveKind::Greedy : MoveKind::Reluctant;
}

} // namespace detail

/// Best move of the given kind, honouring the tie-break policy.
template <typename Generator>
std::optional<std::size_t> select_move_of_kind(const SpinState &state, MoveKind kind,
                                               TieBreak tie_break, Generator &rng) {
  auto chosen = kind == MoveKind::Greedy ? detail::greedy_scan(state)
                                         : detail::reluctant_scan(state);
  if (chosen && tie_break == TieBreak::Random)
    chosen = detail::pick_among_ties(state, *chosen, rng);
  return chosen;
}

/// Draws the per-step coin, then returns the greedy or reluctant move.
/// Returns none iff no spin has dE < 0. The coin is drawn before the spectrum
/// is inspected, also on the final (terminal) step.
template <typename Generator>
std::optional<std::size_t> select_move(const SpinState &state, const DescentParams &params,
                                       Generator &rng) {
  const MoveKind kind = detail::draw_move_kind(params.p_greedy, rng);
  return select_move_of_kind(state, kind, params.tie_break, rng);
}

/// Runs the dynamics on `state` until it is 1-spin-flip stable. `on_flip` is
/// called as on_flip(step, index, energy_after) after every flip, step from 1.
/// Returns the number of flips.
template <typename Generator, typename OnFlip>
std::uint64_t descend_in_place(SpinState &state, const DescentParams &params, Generator &rng,
                               OnFlip &&on_flip) {
  std::uint64_t flips = 0;
  for (;;) {
    const auto move = select_move(state, params, rng);
    if (!move)
      break;
    state.flip_unchecked(*move);
    ++flips;
    on_flip(flips, *move, state.energy());
  }
  return flips;
}

template <typename Generator>
std::uint64_t descend_in_place(SpinState &state, const DescentParams &params, Generator &rng) {
  return descend_in_place(state, params, rng, [](std::uint64_t, std::size_t, double) {});
}

/// True iff no single flip strictly lowers the energy.
inline bool is_stable(const SpinState &state) noexcept {
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state.delta_unchecked(i) < 0.0)
      return false;
  return true;
}

/// Descent from `initial_spins` with an RNG stream seeded from params.run_seed.
/// Deterministic in (instance, initial_spins, params).
inline RunRecord descend(const Instance &instance, std::span<const std::int8_t> initial_spins,
                         const DescentParams &params, bool keep_spins = true) {
  params.validate();
  SpinState state(instance, initial_spins);
  Rng rng(params.run_seed);
  RunRecord record;
  record.flips = descend_in_place(state, params, rng);
  record.final_energy_per_spin = state.energy_per_spin();
  if (keep_spins)
    record.final_spins = Spins(state.spins().begin(), state.spins().end());
  return record;
}

/// Uniform random configuration: each spin is +1 or -1 with probability 1/2.
template <typename Generator> Spins random_initial(std::size_t n, Generator &rng) {
  static_assert(Generator::max() == std::numeric_limits<std::uint64_t>::max() &&
                    Generator::min() == 0,
                "random_initial needs a full 64-bit generator");
  if (n < 2)
    throw InvalidSizeError("configuration size must be at least 2, got " + std::to_string(n));
  Spins spins(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0)
      word = rng();
    spins[i] = (word & 1u) ? 1 : -1;
    word >>= 1;
  }
  return spins;
}

} // namespace glassdescent
