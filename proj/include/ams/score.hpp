#pragma once

#include <ams/analytic.hpp>
#include <ams/error.hpp>
#include <ams/models.hpp>
#include <ams/sde.hpp>

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ams {

/// A score xi(n dt, x) plus the stopping level xi_max. Admissible scores satisfy
/// Phi(x) > a  =>  xi(T, x) >= xi_max (see validate_admissibility).
template <class S>
concept ScoreFunction = requires(const S& s, std::size_t n, double t, std::span<const double> x) {
  { s(n, t, x) } -> std::convertible_to<double>;
  { s.xi_max() } -> std::convertible_to<double>;
};

/// xi(t, x) = Phi(x), xi_max = a.
template <class Phi>
class StdScore {
public:
  explicit StdScore(Observable<Phi> obs) : obs_(std::move(obs)) {}

  double operator()(std::size_t, double, std::span<const double> x) const { return obs_.phi(x); }
  double xi_max() const noexcept { return obs_.threshold; }
  std::string name() const { return "std"; }

private:
  Observable<Phi> obs_;
};

template <class Phi>
StdScore<Phi> score_std(Observable<Phi> obs) {
  return StdScore<Phi>(std::move(obs));
}

/// Non-decreasing threshold path a(t) on [t0, T] ending at the observable's level.
class ThresholdSchedule {
public:
  ThresholdSchedule(std::function<double(double)> level, double terminal, std::string kind = "custom")
      : level_(std::move(level)), terminal_(terminal), kind_(std::move(kind)) {}

  static ThresholdSchedule constant(double a) {
    return ThresholdSchedule([a](double) { return a; }, a, "constant");
  }
  // a(t) = a t / T.
  static ThresholdSchedule linear_ramp(double a, double horizon) {
    return ThresholdSchedule([a, horizon](double t) { return a * t / horizon; }, a, "linear");
  }

  double operator()(double t) const { return level_(t); }
  double terminal() const noexcept { return terminal_; }
  const std::string& kind() const noexcept { return kind_; }

  // Per-index levels on the grid; throws ConfigError unless non-decreasing and a(T) = terminal.
  std::vector<double> on_grid(const GridSpec& grid) const {
    std::vector<double> levels(grid.length());
    for (std::size_t n = grid.n0; n <= grid.n_steps; ++n) levels[n - grid.n0] = level_(grid.time(n));
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (levels[i] < levels[i - 1])
        throw ConfigError("threshold schedule decreases at time index " +
                          std::to_string(grid.n0 + i));
    if (levels.back() != terminal_)
      throw ConfigError("threshold schedule must end at the observable threshold");
    return levels;
  }

private:
  std::function<double(double)> level_;
  double terminal_;
  std::string kind_;
};

/// Time-dependent score with a per-index threshold a_n:
///   xi(n dt, x) = Phi(x) - a_n   if Phi(x) <= a_n,
///               = n / N          otherwise.
/// Values lie in (-inf, 1]; the value 1 is reached only at n = N above the threshold, so the
/// default stopping level is 1 and the final ratio of the algorithm is identically 1.
template <class Phi>
class TimeDependentScore {
public:
  TimeDependentScore(Observable<Phi> obs, const GridSpec& grid, std::vector<double> levels,
                     std::string name)
      : obs_(std::move(obs)),
        n0_(grid.n0),
        n_final_(grid.n_steps),
        levels_(std::move(levels)),
        name_(std::move(name)) {}

  double operator()(std::size_t n, double, std::span<const double> x) const {
    const double phi = obs_.phi(x);
    const double level = levels_[n - n0_];
    if (phi <= level) return phi - level;
    return static_cast<double>(n) / static_cast<double>(n_final_);
  }

  double xi_max() const noexcept { return xi_max_; }
  const std::string& name() const noexcept { return name_; }

  // Stopping at 0 instead of 1 turns the run into the vanilla splitting for max_n Phi(X_n) > a.
  TimeDependentScore with_xi_max(double level) const {
    TimeDependentScore s = *this;
    s.xi_max_ = level;
    return s;
  }

private:
  Observable<Phi> obs_;
  std::size_t n0_;
  std::size_t n_final_;
  std::vector<double> levels_;
  std::string name_;
  double xi_max_ = 1.0;
};

template <class Phi>
TimeDependentScore<Phi> score_new(Observable<Phi> obs, const GridSpec& grid) {
  std::vector<double> levels(grid.length(), obs.threshold);
  return TimeDependentScore<Phi>(std::move(obs), grid, std::move(levels), "new");
}

template <class Phi>
TimeDependentScore<Phi> score_new_schedule(Observable<Phi> obs, const GridSpec& grid,
                                           const ThresholdSchedule& sched) {
  if (sched.terminal() != obs.threshold)
    throw ConfigError("threshold schedule must end at the observable threshold");
  auto levels = sched.on_grid(grid);
  return TimeDependentScore<Phi>(std::move(obs), grid, std::move(levels), "new_schedule");
}

/// Exact committor P(Phi(X_T) > a | X_t = x) of dX = sqrt(2/beta) dW, for Phi(x) = x (upper)
/// or Phi(x) = |x| (two-sided). At t = T it is the indicator of the event.
class BrownianCommittorScore {
public:
  enum class Side { upper, two_sided };

  BrownianCommittorScore(double threshold, const GridSpec& grid, double beta, Side side)
      : a_(threshold), n_final_(grid.n_steps), dt_(grid.dt), beta_(beta), side_(side) {
    if (!(beta > 0.0)) throw ConfigError("committor score: beta must be positive");
  }

  double operator()(std::size_t n, double, std::span<const double> x) const {
    if (n > n_final_) throw ConfigError("committor score evaluated after the final time");
    const double v = side_ == Side::two_sided ? std::abs(x[0]) : x[0];
    if (n == n_final_) return v > a_ ? 1.0 : 0.0;
    const double remaining = static_cast<double>(n_final_ - n) * dt_;
    const double s = std::sqrt(2.0 * remaining / beta_);
    if (side_ == Side::upper) return analytic::std_normal_sf((a_ - x[0]) / s);
    return analytic::std_normal_sf((a_ - x[0]) / s) + analytic::std_normal_sf((a_ + x[0]) / s);
  }

  double xi_max() const noexcept { return 1.0; }
  std::string name() const { return "committor_bm"; }

private:
  double a_;
  std::size_t n_final_;
  double dt_;
  double beta_;
  Side side_;
};

inline BrownianCommittorScore score_committor_bm(const Observable<Coordinate>& obs,
                                                 const GridSpec& grid, double beta) {
  return BrownianCommittorScore(obs.threshold, grid, beta, BrownianCommittorScore::Side::upper);
}

inline BrownianCommittorScore score_committor_bm(const Observable<AbsCoordinate>& obs,
                                                 const GridSpec& grid, double beta) {
  return BrownianCommittorScore(obs.threshold, grid, beta, BrownianCommittorScore::Side::two_sided);
}

/// max over n0 <= m <= N of xi(m dt, X_m).
template <ScoreFunction Score>
double path_score(PathView path, const Score& xi, double dt) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = path.first_index(); m <= path.last_index(); ++m)
    best = std::max(best, static_cast<double>(xi(m, static_cast<double>(m) * dt, path.state(m))));
  return best;
}

/// Smallest m with xi(m dt, X_m) > level. Throws LogicError when the path never crosses.
template <ScoreFunction Score>
std::size_t first_crossing_index(PathView path, const Score& xi, double level, double dt) {
  for (std::size_t m = path.first_index(); m <= path.last_index(); ++m)
    if (xi(m, static_cast<double>(m) * dt, path.state(m)) > level) return m;
  throw LogicError("first_crossing_index: path never exceeds level " + std::to_string(level));
}

/// Checks xi(N, T, x) >= xi_max on every sample with Phi(x) > a; samples at or below the
/// threshold are skipped. The built-in time-dependent scores hit xi_max = 1 exactly there,
/// which the engine's stopping test Z >= xi_max accepts.
template <ScoreFunction Score, class Phi>
bool validate_admissibility(const Score& xi, const Observable<Phi>& obs, const GridSpec& grid,
                            std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw LogicError("validate_admissibility: no samples");
  const double horizon = grid.horizon();
  for (const auto& x : samples) {
    if (!obs.exceeds(x)) continue;
    if (!(xi(grid.n_steps, horizon, x) >= xi.xi_max())) return false;
  }
  return true;
}

}  // namespace ams
