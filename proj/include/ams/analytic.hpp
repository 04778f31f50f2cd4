#pragma once

#include <ams/error.hpp>

#include <cmath>
#include <numbers>

namespace ams::analytic {

/// Standard Gaussian CDF. Both tails go through erfc directly, so relative accuracy holds far
/// out (F(x) ~ 1e-60 and beyond) instead of degrading to 1 - (1 - tiny).
inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// 1 - F(x), without cancellation.
inline double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

struct GaussianLaw {
  double mean = 0.0;
  double variance = 0.0;

  GaussianLaw(double m, double v) : mean(m), variance(v) {
    if (!(variance >= 0.0)) throw ConfigError("GaussianLaw: variance must be nonnegative");
  }

  double sd() const { return std::sqrt(variance); }

  // P(X > a); degenerate laws give the indicator.
  double tail_above(double a) const {
    if (variance == 0.0) return mean > a ? 1.0 : 0.0;
    return std_normal_sf((a - mean) / sd());
  }

  // P(|X| > a), a >= 0.
  double two_sided_tail(double a) const {
    if (variance == 0.0) return std::abs(mean) > a ? 1.0 : 0.0;
    return std_normal_sf((a - mean) / sd()) + std_normal_sf((a + mean) / sd());
  }
};

/// P(|X_T| > a) for dX = sqrt(2/beta) dW, X_0 = x0.
inline double analytic_p_brownian(double beta, double x0, double horizon, double a) {
  if (!(beta > 0.0) || !(horizon > 0.0)) throw ConfigError("analytic_p_brownian: beta, T > 0");
  return GaussianLaw(x0, 2.0 * horizon / beta).two_sided_tail(a);
}

/// Law of X_T for dX = -theta X dt + sigma dW from x0.
inline GaussianLaw ou_law(double horizon, double theta = 1.0, double sigma = 1.0, double x0 = 0.0) {
  return GaussianLaw(x0 * std::exp(-theta * horizon),
                     sigma * sigma * -std::expm1(-2.0 * theta * horizon) / (2.0 * theta));
}

/// P(X_T > a) for dX = -X dt + dW, X_0 = 0.
inline double analytic_p_ou(double horizon, double a) {
  if (!(horizon > 0.0)) throw ConfigError("analytic_p_ou: T > 0");
  return ou_law(horizon).tail_above(a);
}

/// P(X_T > a) for dX = -alpha dt + sqrt(2/beta) dW, X_0 = 0.
inline double analytic_p_drifted_bm(double alpha, double beta, double horizon, double a) {
  if (!(beta > 0.0) || !(horizon > 0.0)) throw ConfigError("analytic_p_drifted_bm: beta, T > 0");
  return GaussianLaw(-alpha * horizon, 2.0 * horizon / beta).tail_above(a);
}

/// Variance of (1/T) int_0^T X_s ds for the OU process dX = -theta X dt + sigma dW from a
/// deterministic start.
inline double ou_time_average_variance(double horizon, double theta, double sigma) {
  const double t = horizon;
  const double bracket = t + 2.0 * std::expm1(-theta * t) / theta -
                         std::expm1(-2.0 * theta * t) / (2.0 * theta);
  return sigma * sigma * bracket / (theta * theta * t * t);
}

/// Large-deviations rate of the OU time average with unit friction and diffusion sqrt(2).
inline double ou_average_rate_exact(double a) { return a * a / 4.0; }

}  // namespace ams::analytic
