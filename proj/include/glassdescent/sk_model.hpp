#pragma once

// Sherrington-Kirkpatrick disorder instances and the spin-state cache used by
// every descent.
//
//   H(J, s) = -1/2 sum_{i,j} J_ij s_i s_j,  J symmetric, J_ii = 0,
//   J_ij ~ Normal(0, 1/N) i.i.d. for i < j.
//
// Flipping spin i changes the energy by exactly 2 s_i h_i, where
// h_i = sum_{j != i} J_ij s_j is the local field.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glassdescent/error.hpp"
#include "glassdescent/rng.hpp"

namespace glassdescent {

/// A spin configuration; every entry is +1 or -1.
using Spins = std::vector<std::int8_t>;

/// Immutable dense coupling matrix of one disorder realization.
class Instance {
public:
  /// Builds an instance from a full row-major n*n matrix.
  /// Throws ValidationError unless the matrix is symmetric with zero diagonal.
  static Instance from_matrix(std::size_t n, std::vector<double> couplings,
                              std::uint64_t seed = 0) {
    if (n < 2)
      throw InvalidSizeError("instance size must be at least 2, got " + std::to_string(n));
    if (couplings.size() != n * n)
      throw DimensionError("coupling matrix has " + std::to_string(couplings.size()) +
                           " entries, expected " + std::to_string(n * n));
    for (std::size_t i = 0; i < n; ++i) {
      if (couplings[i * n + i] != 0.0)
        throw ValidationError("nonzero diagonal coupling at " + std::to_string(i));
      for (std::size_t j = i + 1; j < n; ++j)
        if (couplings[i * n + j] != couplings[j * n + i])
          throw ValidationError("asymmetric couplings at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    }
    return Instance(n, std::move(couplings), seed);
  }

  /// Builds an instance from the strict upper triangle listed row by row
  /// ((0,1), (0,2), ..., (n-2,n-1)).
  static Instance from_upper_triangle(std::size_t n, std::span<const double> upper,
                                      std::uint64_t seed = 0) {
    if (n < 2)
      throw InvalidSizeError("instance size must be at least 2, got " + std::to_string(n));
    if (upper.size() != n * (n - 1) / 2)
      throw DimensionError("expected " + std::to_string(n * (n - 1) / 2) +
                           " upper-triangle couplings, got " + std::to_string(upper.size()));
    std::vector<double> m(n * n, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k)
        m[i * n + j] = m[j * n + i] = upper[k];
    return Instance(n, std::move(m), seed);
  }

  static Instance zero(std::size_t n, std::uint64_t seed = 0) {
    if (n < 2)
      throw InvalidSizeError("instance size must be at least 2, got " + std::to_string(n));
    return Instance(n, std::vector<double>(n * n, 0.0), seed);
  }

  std::size_t size() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double coupling(std::size_t i, std::size_t j) const noexcept { return couplings_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {couplings_.data() + i * n_, n_};
  }

  std::span<const double> matrix() const noexcept { return couplings_; }

  /// Copy with every coupling multiplied by `factor`.
  Instance scaled(double factor) const {
    std::vector<double> m = couplings_;
    for (double &v : m)
      v *= factor;
    return Instance(n_, std::move(m), seed_);
  }

  friend bool operator==(const Instance &, const Instance &) = default;

private:
  Instance(std::size_t n, std::vector<double> couplings, std::uint64_t seed)
      : n_(n), seed_(seed), couplings_(std::move(couplings)) {}

  std::size_t n_;
  std::uint64_t seed_;
  std::vector<double> couplings_;
};

/// Samples couplings J_ij ~ Normal(0, 1/n) for i < j and mirrors them.
/// Bit-identical for identical (n, disorder_seed) within one build.
inline Instance generate_instance(std::size_t n, std::uint64_t disorder_seed) {
  if (n < 2)
    throw InvalidSizeError("instance size must be at least 2, got " + std::to_string(n));
  Rng rng(disorder_seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> upper(n * (n - 1) / 2);
  for (double &v : upper)
    v = gauss(rng);
  return Instance::from_upper_triangle(n, upper, disorder_seed);
}

namespace detail {

inline void check_spins(const Instance &instance, std::span<const std::int8_t> spins) {
  if (spins.size() != instance.size())
    throw DimensionError("spin vector has length " + std::to_string(spins.size()) +
                         ", instance has " + std::to_string(instance.size()) + " spins");
  for (std::int8_t s : spins)
    if (s != 1 && s != -1)
      throw ValidationError("spin values must be +1 or -1");
}

} // namespace detail

/// H(J, s) evaluated from scratch, O(n^2).
inline double energy(const Instance &instance, std::span<const std::int8_t> spins) {
  detail::check_spins(instance, spins);
  const std::size_t n = instance.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = instance.row(i);
    double field = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      field += row[j] * spins[j];
    sum += spins[i] * field;
  }
  return -0.5 * sum;
}

/// Returns a copy of `spins` with spin i negated.
inline Spins flipped(std::span<const std::int8_t> spins, std::size_t i) {
  Spins out(spins.begin(), spins.end());
  out.at(i) = static_cast<std::int8_t>(-out[i]);
  return out;
}

/// Spin configuration with cached local fields and energy.
///
/// Holds a non-owning reference to its Instance, which must outlive it.
/// Single-owner mutable: distinct workers use distinct states.
class SpinState {
public:
  SpinState(const Instance &instance, std::span<const std::int8_t> spins)
      : instance_(&instance), spins_(spins.begin(), spins.end()),
        fields_(instance.size(), 0.0) {
    detail::check_spins(instance, spins);
    recompute();
  }

  /// Replaces the configuration and recomputes the cache in place, reusing storage.
  void reset(std::span<const std::int8_t> spins) {
    detail::check_spins(*instance_, spins);
    spins_.assign(spins.begin(), spins.end());
    recompute();
  }

  const Instance &instance() const noexcept { return *instance_; }
  std::size_t size() const noexcept { return spins_.size(); }
  std::span<const std::int8_t> spins() const noexcept { return spins_; }
  std::span<const double> local_fields() const noexcept { return fields_; }
  double energy() const noexcept { return energy_; }
  double energy_per_spin() const noexcept { return energy_ / static_cast<double>(size()); }

  /// Energy change of flipping spin i: 2 s_i h_i. Pure query.
  double delta_energy(std::size_t i) const {
    check_index(i);
    return delta_unchecked(i);
  }

  double delta_unchecked(std::size_t i) const noexcept {
    return 2.0 * spins_[i] * fields_[i];
  }

  /// Flips spin i and updates every local field in O(n).
  void apply_flip(std::size_t i) {
    check_index(i);
    flip_unchecked(i);
  }

  void flip_unchecked(std::size_t i) noexcept {
    const double old_spin = spins_[i];
    energy_ += 2.0 * old_spin * fields_[i];
    const double step = 2.0 * old_spin;
    const double *row = instance_->row(i).data();
    double *h = fields_.data();
    const std::size_t n = fields_.size();
    // row[i] == 0, so h_i is left untouched.
    for (std::size_t j = 0; j < n; ++j)
      h[j] -= step * row[j];
    spins_[i] = static_cast<std::int8_t>(-spins_[i]);
  }

private:
  void check_index(std::size_t i) const {
    if (i >= spins_.size())
      throw IndexError("spin index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(spins_.size()) + ")");
  }

  void recompute() noexcept {
    const std::size_t n = spins_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double *row = instance_->row(i).data();
      double field = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        field += row[j] * spins_[j];
      fields_[i] = field;
      sum += spins_[i] * field;
    }
    energy_ = -0.5 * sum;
  }

  const Instance *instance_;
  Spins spins_;
  std::vector<double> fields_;
  double energy_ = 0.0;
};

inline SpinState init_state(const Instance &instance, std::span<const std::int8_t> spins) {
  return SpinState(instance, spins);
}

/// Parses a compact spin string such as "+-+" into a configuration.
inline Spins parse_spins(const std::string &text) {
  Spins out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '+')
      out.push_back(1);
    else if (c == '-')
      out.push_back(-1);
    else
      throw ValidationError(std::string("invalid spin character '") + c + "', expected + or -");
  }
  return out;
}

inline std::string format_spins(std::span<const std::int8_t> spins) {
  std::string out;
  out.reserve(spins.size());
  for (std::int8_t s : spins)
    out.push_back(s > 0 ? '+' : '-');
  return out;
}

} // namespace glassdescent
