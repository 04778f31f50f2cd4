#pragma once

#include <ams/engine.hpp>
#include <ams/error.hpp>
#include <ams/models.hpp>
#include <ams/sde.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ams {

/// Statistics of M independent estimates p_1..p_M.
struct EstimateSummary {
  double mean = 0.0;
  double variance = 0.0;  // divisor M - 1
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t m = 0;
  double r_nonzero = 0.0;  // fraction of estimates > 0
  std::size_t extinct_count = 0;
  double wall_time = 0.0;  // seconds

  double ci_half_width() const { return 0.5 * (ci_high - ci_low); }
  double standard_error() const { return m > 0 ? std::sqrt(variance / static_cast<double>(m)) : 0.0; }
};

inline constexpr double kNormalQuantile975 = 1.96;

/// Summary of raw estimates. Mean and variance by Welford's update.
inline EstimateSummary summarize(std::span<const double> values, std::size_t extinct_count = 0,
                                 double wall_time = 0.0) {
  if (values.empty()) throw ConfigError("summarize: no values");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t nonzero = 0;
  std::size_t k = 0;
  for (double v : values) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
    if (v > 0.0) ++nonzero;
  }
  EstimateSummary s;
  s.m = values.size();
  s.mean = mean;
  s.variance = s.m > 1 ? std::max(0.0, m2 / static_cast<double>(s.m - 1)) : 0.0;
  const double half = kNormalQuantile975 * std::sqrt(s.variance / static_cast<double>(s.m));
  s.ci_low = mean - half;
  s.ci_high = mean + half;
  s.r_nonzero = static_cast<double>(nonzero) / static_cast<double>(s.m);
  s.extinct_count = extinct_count;
  s.wall_time = wall_time;
  return s;
}

inline EstimateSummary aggregate(std::span<const AmsResult> results, double wall_time = 0.0) {
  if (results.empty()) throw ConfigError("aggregate: no results");
  std::vector<double> p(results.size());
  std::size_t extinct = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    p[i] = results[i].p_hat;
    if (results[i].extinct) ++extinct;
  }
  return summarize(p, extinct, wall_time);
}

/// Same as aggregate but on the pre-final-update products; with the vanilla score this is the
/// estimator of P(max_n Phi(X_n) > a).
inline EstimateSummary aggregate_level_products(std::span<const AmsResult> results,
                                                double wall_time = 0.0) {
  if (results.empty()) throw ConfigError("aggregate: no results");
  std::vector<double> p(results.size());
  std::size_t extinct = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    p[i] = results[i].level_product;
    if (results[i].extinct) ++extinct;
  }
  return summarize(p, extinct, wall_time);
}

/// Plain Monte Carlo estimate of P(Phi(X_N) > a) from n_samples independent paths.
/// `variance` is the per-sample Bernoulli variance n/(n-1) p(1-p).
template <MarkovModel Model, class Phi>
EstimateSummary naive_mc(const Model& model, const GridSpec& grid, const Observable<Phi>& obs,
                         std::size_t n_samples, Stream& rng) {
  if (n_samples == 0) throw ConfigError("naive_mc: need at least one sample");
  grid.validate(model.dim());
  std::vector<double> states(grid.length() * model.dim());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::copy(grid.x0.begin(), grid.x0.end(), states.begin());
    continue_path(model, grid, states, grid.n0, rng);
    const auto last = std::span<const double>(states).last(model.dim());
    if (obs.exceeds(last)) ++hits;
  }
  const double n = static_cast<double>(n_samples);
  EstimateSummary s;
  s.m = n_samples;
  s.mean = static_cast<double>(hits) / n;
  s.variance = n_samples > 1 ? n / (n - 1.0) * s.mean * (1.0 - s.mean) : 0.0;
  const double half = kNormalQuantile975 * std::sqrt(s.variance / n);
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  s.r_nonzero = s.mean;
  return s;
}

/// q = P(Phi(X_N) > a | max_n Phi(X_n) > a), estimated as p / p_max.
inline double conditional_q(const EstimateSummary& p, const EstimateSummary& p_max) {
  if (!(p_max.mean > 0.0)) throw ConfigError("conditional_q: p_max estimate is zero");
  return p.mean / p_max.mean;
}

/// -p^2 log(p) / n_rep: asymptotic variance with the committor as score.
inline double optimal_variance_ref(double p, std::size_t n_rep) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("optimal_variance_ref: p must lie in (0, 1)");
  if (n_rep == 0) throw ConfigError("optimal_variance_ref: n_rep must be positive");
  return -p * p * std::log(p) / static_cast<double>(n_rep);
}

struct RateFit {
  double a = 0.0;
  double i_hat = 0.0;      // minus the slope of log p against T
  double intercept = 0.0;
  std::vector<std::pair<double, double>> points;  // (T, log p)
};

/// Ordinary least squares of log p_hat on T, equal weights.
inline RateFit rate_regression(std::span<const std::pair<double, double>> t_and_p, double a = 0.0) {
  if (t_and_p.size() < 2) throw ConfigError("rate_regression: need at least two points");
  RateFit fit;
  fit.a = a;
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (const auto& [t, p] : t_and_p) {
    if (!(p > 0.0)) throw ConfigError("rate_regression: probabilities must be positive");
    fit.points.emplace_back(t, std::log(p));
    mean_t += t;
    mean_y += std::log(p);
  }
  const double n = static_cast<double>(fit.points.size());
  mean_t /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [t, y] : fit.points) {
    sxx += (t - mean_t) * (t - mean_t);
    sxy += (t - mean_t) * (y - mean_y);
  }
  if (!(sxx > 0.0)) throw ConfigError("rate_regression: need at least two distinct T values");
  const double slope = sxy / sxx;
  fit.i_hat = -slope;
  fit.intercept = mean_y - slope * mean_t;
  return fit;
}

/// Eff(Y|X) = (var_X time_X) / (var_Y time_Y).
inline double efficiency_ratio(const EstimateSummary& x, const EstimateSummary& y) {
  if (!(x.variance > 0.0 && y.variance > 0.0))
    throw ConfigError("efficiency_ratio: variances must be positive");
  if (!(x.wall_time > 0.0 && y.wall_time > 0.0))
    throw ConfigError("efficiency_ratio: wall times must be positive");
  return (x.variance * x.wall_time) / (y.variance * y.wall_time);
}

}  // namespace ams
