#pragma once

#include <ams/error.hpp>
#include <ams/rng.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ams {

/// Uniform time grid t_n = n * dt for n0 <= n <= N, with a deterministic initial state at n0.
struct GridSpec {
  double dt = 0.0;
  std::size_t n0 = 0;
  std::size_t n_steps = 0;  // N, the final index
  std::vector<double> x0;

  double horizon() const noexcept { return static_cast<double>(n_steps) * dt; }
  double t0() const noexcept { return static_cast<double>(n0) * dt; }
  double time(std::size_t n) const noexcept { return static_cast<double>(n) * dt; }
  std::size_t length() const noexcept { return n_steps - n0 + 1; }

  void validate(std::size_t dim) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("grid: dt must be positive and finite");
    if (n_steps <= n0) throw ConfigError("grid: final index must exceed the initial index");
    if (x0.size() != dim)
      throw ConfigError("grid: initial state has dimension " + std::to_string(x0.size()) +
                        ", model expects " + std::to_string(dim));
    for (double v : x0)
      if (!std::isfinite(v)) throw ConfigError("grid: initial state must be finite");
  }

  // N = round(T / dt); T / dt must be an integer to within 1e-9.
  static std::size_t steps_for(double dt, double horizon) {
    if (!(dt > 0.0)) throw ConfigError("grid: dt must be positive");
    if (!(horizon > 0.0)) throw ConfigError("grid: T must be positive");
    const double ratio = horizon / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded))
      throw ConfigError("grid: T / dt is not an integer (T=" + std::to_string(horizon) +
                        ", dt=" + std::to_string(dt) + ")");
    return static_cast<std::size_t>(rounded);
  }

  static GridSpec from_horizon(double dt, double horizon, std::vector<double> x0, double t0 = 0.0) {
    GridSpec g;
    g.dt = dt;
    g.n_steps = steps_for(dt, horizon);
    g.n0 = t0 > 0.0 ? steps_for(dt, t0) : 0;
    g.x0 = std::move(x0);
    if (g.n_steps <= g.n0) throw ConfigError("grid: T must exceed t0");
    return g;
  }
};

/// What a model needs to know about the step n -> n+1 it is asked to take.
struct StepContext {
  std::size_t n;   // index of the current state
  std::size_t n0;  // initial index of the grid
  double dt;
  double t;        // n * dt
};

/// A discrete-time Markov chain on R^dim driven by noise_dim standard normals per step.
template <class M>
concept MarkovModel = requires(const M& m, const StepContext& ctx, std::span<const double> x,
                               std::span<const double> noise, std::span<double> out) {
  { m.dim() } -> std::convertible_to<std::size_t>;
  { m.noise_dim() } -> std::convertible_to<std::size_t>;
  m.advance(ctx, x, noise, out);
};

/// Coefficients of dX = f(t,X) dt + sigma(t,X) dW.
///
/// `drift` writes f(t,x) into `out`; `diffuse` adds scale * sigma(t,x) * noise into `out`.
/// The split lets built-in models apply sigma without materializing a d x D matrix.
template <class S>
concept SdeCoefficients = requires(const S& s, double t, std::span<const double> x,
                                   std::span<const double> noise, double scale,
                                   std::span<double> out) {
  { s.dim() } -> std::convertible_to<std::size_t>;
  { s.noise_dim() } -> std::convertible_to<std::size_t>;
  s.drift(t, x, out);
  s.diffuse(t, x, noise, scale, out);
};

/// out = x + f(t,x) dt + sigma(t,x) sqrt(dt) noise.
template <SdeCoefficients S>
void em_step_into(const S& sde, double t, std::span<const double> x, double dt,
                  std::span<const double> noise, std::span<double> out) {
  sde.drift(t, x, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + dt * out[i];
  sde.diffuse(t, x, noise, std::sqrt(dt), out);
}

/// Single explicit Euler-Maruyama step. Throws IntegrationError(time_index) on a non-finite result.
template <SdeCoefficients S>
std::vector<double> em_step(const S& sde, double t, std::span<const double> x, double dt,
                            std::span<const double> noise, std::size_t time_index = 0) {
  if (!(dt > 0.0)) throw ConfigError("em_step: dt must be positive");
  if (noise.size() != sde.noise_dim()) throw ConfigError("em_step: noise has the wrong length");
  if (x.size() != sde.dim()) throw ConfigError("em_step: state has the wrong length");
  std::vector<double> out(sde.dim());
  em_step_into(sde, t, x, dt, noise, out);
  for (double v : out)
    if (!std::isfinite(v)) throw IntegrationError(time_index);
  return out;
}

/// CRTP mixin turning SDE coefficients into a MarkovModel stepped by Euler-Maruyama.
template <class Derived>
struct EulerMaruyamaScheme {
  void advance(const StepContext& ctx, std::span<const double> x, std::span<const double> noise,
               std::span<double> out) const {
    em_step_into(static_cast<const Derived&>(*this), ctx.t, x, ctx.dt, noise, out);
  }
};

/// Run-time SDE with user supplied coefficient functions. The built-in models in models.hpp are
/// faster; this is the general entry point.
class SdeModel : public EulerMaruyamaScheme<SdeModel> {
public:
  using DriftFn = std::function<std::vector<double>(double, std::span<const double>)>;
  // Row-major dim x noise_dim matrix.
  using DiffusionFn = std::function<std::vector<double>(double, std::span<const double>)>;

  SdeModel(std::string name, std::size_t dim, std::size_t noise_dim, DriftFn drift,
           DiffusionFn diffusion)
      : name_(std::move(name)),
        dim_(dim),
        noise_dim_(noise_dim),
        drift_(std::move(drift)),
        diffusion_(std::move(diffusion)) {
    if (dim_ == 0 || noise_dim_ == 0) throw ConfigError("SdeModel: dimensions must be positive");
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t noise_dim() const noexcept { return noise_dim_; }

  void drift(double t, std::span<const double> x, std::span<double> out) const {
    const auto f = drift_(t, x);
    if (f.size() != dim_) throw ConfigError("SdeModel: drift returned the wrong length");
    std::copy(f.begin(), f.end(), out.begin());
  }

  void diffuse(double t, std::span<const double> x, std::span<const double> noise, double scale,
               std::span<double> out) const {
    const auto sigma = diffusion_(t, x);
    if (sigma.size() != dim_ * noise_dim_)
      throw ConfigError("SdeModel: diffusion returned the wrong shape");
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < noise_dim_; ++k) acc += sigma[i * noise_dim_ + k] * noise[k];
      out[i] += scale * acc;
    }
  }

private:
  std::string name_;
  std::size_t dim_;
  std::size_t noise_dim_;
  DriftFn drift_;
  DiffusionFn diffusion_;
};

/// Non-owning view of a trajectory stored contiguously, states n0..n_last, each of size dim.
class PathView {
public:
  PathView(std::span<const double> data, std::size_t dim, std::size_t n0)
      : data_(data), dim_(dim), n0_(n0) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t first_index() const noexcept { return n0_; }
  std::size_t last_index() const noexcept { return n0_ + data_.size() / dim_ - 1; }
  std::size_t size() const noexcept { return data_.size() / dim_; }

  std::span<const double> state(std::size_t n) const {
    return data_.subspan((n - n0_) * dim_, dim_);
  }
  std::span<const double> data() const noexcept { return data_; }

private:
  std::span<const double> data_;
  std::size_t dim_;
  std::size_t n0_;
};

/// Owning discrete trajectory (X_n) for n0 <= n <= N.
class Path {
public:
  Path(std::size_t dim, std::size_t n0, std::size_t n_last)
      : dim_(dim), n0_(n0), data_((n_last - n0 + 1) * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t first_index() const noexcept { return n0_; }
  std::size_t last_index() const noexcept { return n0_ + data_.size() / dim_ - 1; }
  std::size_t size() const noexcept { return data_.size() / dim_; }

  std::span<const double> state(std::size_t n) const {
    return std::span<const double>(data_).subspan((n - n0_) * dim_, dim_);
  }
  std::span<double> state(std::size_t n) { return std::span<double>(data_).subspan((n - n0_) * dim_, dim_); }
  std::span<const double> final_state() const { return state(last_index()); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  PathView view() const { return PathView(data_, dim_, n0_); }
  operator PathView() const { return view(); }  // NOLINT(google-explicit-constructor)

  // Keeps states n0..m.
  Path truncated(std::size_t m) const {
    Path p(dim_, n0_, m);
    std::copy_n(data_.begin(), p.data_.size(), p.data_.begin());
    return p;
  }

private:
  std::size_t dim_;
  std::size_t n0_;
  std::vector<double> data_;
};

/// Fills states m+1..N of `states` (laid out as in PathView, starting at grid.n0) from state m,
/// with fresh noise from `rng`. Throws IntegrationError at the first non-finite state.
template <MarkovModel Model>
void continue_path(const Model& model, const GridSpec& grid, std::span<double> states,
                   std::size_t m, Stream& rng) {
  const std::size_t d = model.dim();
  std::vector<double> noise(model.noise_dim());
  for (std::size_t n = m; n < grid.n_steps; ++n) {
    rng.fill_normal(noise);
    const std::size_t off = (n - grid.n0) * d;
    const std::span<const double> x = states.subspan(off, d);
    const std::span<double> next = states.subspan(off + d, d);
    model.advance(StepContext{n, grid.n0, grid.dt, grid.time(n)}, x, noise, next);
    for (double v : next)
      if (!std::isfinite(v)) throw IntegrationError(n + 1);
  }
}

/// Fresh trajectory from grid.x0 at n0 to N.
template <MarkovModel Model>
Path simulate_path(const Model& model, const GridSpec& grid, Stream& rng) {
  grid.validate(model.dim());
  Path path(model.dim(), grid.n0, grid.n_steps);
  std::copy(grid.x0.begin(), grid.x0.end(), path.state(grid.n0).begin());
  continue_path(model, grid, path.data(), grid.n0, rng);
  return path;
}

/// Copy of `prefix` on n0..m, freshly simulated on m+1..N. `prefix` must hold at least n0..m.
template <MarkovModel Model>
Path resume_path(const Model& model, const GridSpec& grid, PathView prefix, std::size_t m,
                 Stream& rng) {
  if (m < grid.n0 || m > grid.n_steps)
    throw ConfigError("resume_path: index " + std::to_string(m) + " outside the grid");
  if (prefix.first_index() != grid.n0 || prefix.last_index() < m || prefix.dim() != model.dim())
    throw ConfigError("resume_path: prefix does not cover the requested index");
  Path path(model.dim(), grid.n0, grid.n_steps);
  const auto src = prefix.data().first((m - grid.n0 + 1) * model.dim());
  std::copy(src.begin(), src.end(), path.data().begin());
  continue_path(model, grid, path.data(), m, rng);
  return path;
}

}  // namespace ams
