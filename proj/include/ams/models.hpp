#pragma once

#include <ams/sde.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace ams {

// ---------------------------------------------------------------------------------------------
// Observables

/// The observable Phi (or phi for temporal averages) together with the level a.
template <class Phi>
struct Observable {
  Phi phi;
  double threshold = 0.0;

  double operator()(std::span<const double> x) const { return phi(x); }
  bool exceeds(std::span<const double> x) const { return phi(x) > threshold; }
};

using ObservableFn = std::function<double(std::span<const double>)>;

struct Coordinate {
  std::size_t index = 0;
  double operator()(std::span<const double> x) const { return x[index]; }
};

struct AbsCoordinate {
  std::size_t index = 0;
  double operator()(std::span<const double> x) const { return std::abs(x[index]); }
};

/// Quadratic form whose unit sublevel set traps the deterministic Lorenz flow started near
/// the equilibrium (5, 5, 25) for sigma=3, r=26, b=1.
struct LorenzEllipsoid {
  double sigma = 3.0;
  double r = 26.0;
  double b = 1.0;

  double operator()(std::span<const double> x) const {
    const double s2 = (r + sigma) * (r + sigma);
    const double z = x[2] - (r + sigma);
    return x[0] * x[0] / (s2 * b / sigma) + x[1] * x[1] / (s2 * b) + z * z / s2;
  }
};

// ---------------------------------------------------------------------------------------------
// Scalar and low-dimensional SDEs

/// dX = sqrt(2/beta) dW.
struct BrownianSde : EulerMaruyamaScheme<BrownianSde> {
  double beta = 1.0;

  std::size_t dim() const noexcept { return 1; }
  std::size_t noise_dim() const noexcept { return 1; }
  double noise_scale() const noexcept { return std::sqrt(2.0 / beta); }

  void drift(double, std::span<const double>, std::span<double> out) const { out[0] = 0.0; }
  void diffuse(double, std::span<const double>, std::span<const double> z, double scale,
               std::span<double> out) const {
    out[0] += scale * noise_scale() * z[0];
  }
};

/// dX = -theta X dt + sigma dW.
struct OrnsteinUhlenbeckSde : EulerMaruyamaScheme<OrnsteinUhlenbeckSde> {
  double theta = 1.0;
  double sigma = 1.0;

  std::size_t dim() const noexcept { return 1; }
  std::size_t noise_dim() const noexcept { return 1; }

  void drift(double, std::span<const double> x, std::span<double> out) const {
    out[0] = -theta * x[0];
  }
  void diffuse(double, std::span<const double>, std::span<const double> z, double scale,
               std::span<double> out) const {
    out[0] += scale * sigma * z[0];
  }
};

/// dX = -alpha dt + sqrt(2/beta) dW.
struct DriftedBrownianSde : EulerMaruyamaScheme<DriftedBrownianSde> {
  double alpha = 4.0;
  double beta = 1.0;

  std::size_t dim() const noexcept { return 1; }
  std::size_t noise_dim() const noexcept { return 1; }

  void drift(double, std::span<const double>, std::span<double> out) const { out[0] = -alpha; }
  void diffuse(double, std::span<const double>, std::span<const double> z, double scale,
               std::span<double> out) const {
    out[0] += scale * std::sqrt(2.0 / beta) * z[0];
  }
};

/// Lorenz system with additive noise on the first equation only.
struct LorenzSde : EulerMaruyamaScheme<LorenzSde> {
  double sigma = 3.0;
  double r = 26.0;
  double b = 1.0;
  double noise = 3.0;  // sqrt(2/beta)

  std::size_t dim() const noexcept { return 3; }
  std::size_t noise_dim() const noexcept { return 1; }

  // Unstable equilibrium (sqrt(b(r-1)), sqrt(b(r-1)), r-1).
  std::vector<double> equilibrium() const {
    const double c = std::sqrt(b * (r - 1.0));
    return {c, c, r - 1.0};
  }

  void drift(double, std::span<const double> x, std::span<double> out) const {
    out[0] = sigma * (x[1] - x[0]);
    out[1] = r * x[0] - x[1] - x[0] * x[2];
    out[2] = x[0] * x[1] - b * x[2];
  }
  void diffuse(double, std::span<const double>, std::span<const double> z, double scale,
               std::span<double> out) const {
    out[0] += scale * noise * z[0];
  }
};

/// dX = (-V'(X) + gamma) dt + noise dW with V(x) = cos(2 pi x), simulated on the real line so
/// that the winding X(T) stays visible.
struct PeriodicDriftSde : EulerMaruyamaScheme<PeriodicDriftSde> {
  double gamma = 1.0;
  double noise = std::numbers::sqrt2;

  std::size_t dim() const noexcept { return 1; }
  std::size_t noise_dim() const noexcept { return 1; }

  void drift(double, std::span<const double> x, std::span<double> out) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    out[0] = two_pi * std::sin(two_pi * x[0]) + gamma;
  }
  void diffuse(double, std::span<const double>, std::span<const double> z, double scale,
               std::span<double> out) const {
    out[0] += scale * noise * z[0];
  }
};

/// X_{n+1} = X_n + 1 if the noise is positive, X_n - 1 otherwise: a fair +-1 walk whose
/// small-horizon laws can be enumerated exactly.
struct SignRandomWalk {
  std::size_t dim() const noexcept { return 1; }
  std::size_t noise_dim() const noexcept { return 1; }

  void advance(const StepContext&, std::span<const double> x, std::span<const double> z,
               std::span<double> out) const {
    out[0] = x[0] + (z[0] > 0.0 ? 1.0 : -1.0);
  }
};

// ---------------------------------------------------------------------------------------------
// State augmentations

/// Appends the running average Y of phi(X) as a last coordinate:
///   Y_{n0} = phi(x0),  Y_{n+1} = (1 - 1/k) Y_n + phi(X_{n+1}) / k  with k = n + 1 - n0,
/// so that Y_N is the mean of phi(X_m) over m = n0+1..N.
template <MarkovModel Model, class Phi>
class TemporalAverage {
public:
  TemporalAverage(Model inner, Phi phi) : inner_(std::move(inner)), phi_(std::move(phi)) {}

  std::size_t dim() const noexcept { return inner_.dim() + 1; }
  std::size_t noise_dim() const noexcept { return inner_.noise_dim(); }
  const Model& inner() const noexcept { return inner_; }
  const Phi& phi() const noexcept { return phi_; }

  // (x0, phi(x0)).
  std::vector<double> initial_state(std::span<const double> x0) const {
    std::vector<double> s(x0.begin(), x0.end());
    s.push_back(phi_(x0));
    return s;
  }

  void advance(const StepContext& ctx, std::span<const double> x, std::span<const double> noise,
               std::span<double> out) const {
    const std::size_t d = inner_.dim();
    const auto next = out.first(d);
    inner_.advance(ctx, x.first(d), noise, next);
    const double k = static_cast<double>(ctx.n + 1 - ctx.n0);
    out[d] = (1.0 - 1.0 / k) * x[d] + phi_(std::span<const double>(next)) / k;
  }

private:
  Model inner_;
  Phi phi_;
};

template <MarkovModel Model, class Phi>
TemporalAverage<Model, Phi> augment_temporal_average(Model model, Phi phi) {
  return TemporalAverage<Model, Phi>(std::move(model), std::move(phi));
}

/// Appends Y_n = X_n[index] / (n dt) as a last coordinate (the velocity X(t)/t). The initial
/// value of Y is taken from the grid's initial state.
template <MarkovModel Model>
class TimeRatio {
public:
  explicit TimeRatio(Model inner, std::size_t index = 0) : inner_(std::move(inner)), index_(index) {}

  std::size_t dim() const noexcept { return inner_.dim() + 1; }
  std::size_t noise_dim() const noexcept { return inner_.noise_dim(); }
  const Model& inner() const noexcept { return inner_; }

  // (x0, y0) with y0 = 0 when t0 = 0 and x0[index] / t0 otherwise.
  std::vector<double> initial_state(std::span<const double> x0, double t0) const {
    std::vector<double> s(x0.begin(), x0.end());
    s.push_back(t0 > 0.0 ? x0[index_] / t0 : 0.0);
    return s;
  }

  void advance(const StepContext& ctx, std::span<const double> x, std::span<const double> noise,
               std::span<double> out) const {
    const std::size_t d = inner_.dim();
    const auto next = out.first(d);
    inner_.advance(ctx, x.first(d), noise, next);
    out[d] = next[index_] / (static_cast<double>(ctx.n + 1) * ctx.dt);
  }

private:
  Model inner_;
  std::size_t index_;
};

}  // namespace ams
