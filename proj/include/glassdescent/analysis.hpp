#pragma once

// Summary statistics and log-log power-law fits tau(N) ~ A * N^alpha.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "glassdescent/error.hpp"

namespace glassdescent {

struct Summary {
  double mean = 0.0;
  double stderr_mean = 0.0; // sample stddev / sqrt(count); 0 for a single sample
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> samples) {
  if (samples.empty())
    throw ValidationError("cannot summarize an empty sample");
  Summary s;
  s.count = samples.size();
  s.min = s.max = samples.front();
  double sum = 0.0;
  for (double v : samples) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const double n = static_cast<double>(samples.size());
  s.mean = sum / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples)
      ss += (v - s.mean) * (v - s.mean);
    s.stderr_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

struct ScalingPoint {
  double n = 0.0;
  double tau = 0.0;
  double tau_stderr = 0.0;
};

struct ScalingFit {
  double alpha = 0.0;
  double log_prefactor = 0.0; // natural log of A
  double alpha_stderr = 0.0;
  double r_squared = 0.0;
  std::vector<ScalingPoint> points; // sorted by n

  double predict(double n) const { return std::exp(log_prefactor) * std::pow(n, alpha); }
};

/// Ordinary least squares of ln(tau) on ln(N). Points are sorted by N first,
/// so the fit does not depend on input order.
inline ScalingFit fit_power_law(std::span<const ScalingPoint> input) {
  if (input.size() < 3)
    throw ValidationError("power-law fit needs at least 3 points, got " +
                          std::to_string(input.size()));
  std::vector<ScalingPoint> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(),
            [](const ScalingPoint &a, const ScalingPoint &b) { return a.n < b.n; });
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!(pts[k].n > 0.0))
      throw ValidationError("power-law fit needs positive N");
    if (!(pts[k].tau > 0.0))
      throw ValidationError("power-law fit needs positive tau, got " +
                            std::to_string(pts[k].tau) + " at N=" + std::to_string(pts[k].n));
    if (k > 0 && pts[k].n == pts[k - 1].n)
      throw ValidationError("duplicate N=" + std::to_string(pts[k].n) + " in power-law fit");
  }

  const double m = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto &p : pts) {
    mx += std::log(p.n);
    my += std::log(p.tau);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto &p : pts) {
    const double dx = std::log(p.n) - mx;
    const double dy = std::log(p.tau) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  ScalingFit fit;
  fit.alpha = sxy / sxx;
  fit.log_prefactor = my - fit.alpha * mx;
  const double sse = std::max(0.0, syy - fit.alpha * sxy);
  fit.alpha_stderr = std::sqrt(sse / (m - 2.0) / sxx);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.points = std::move(pts);
  return fit;
}

} // namespace glassdescent
