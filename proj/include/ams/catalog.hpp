#pragma once

#include <ams/analytic.hpp>
#include <ams/error.hpp>
#include <ams/models.hpp>
#include <ams/score.hpp>
#include <ams/sde.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ams {

using ParamMap = std::map<std::string, double>;

/// A model with its observable, its grid and whatever closed-form knowledge exists about it.
template <MarkovModel Model, class Phi>
struct Scenario {
  std::string name;
  Model model;
  Observable<Phi> obs{};
  GridSpec grid{};
  std::string phi_name{};
  std::optional<double> reference_p{};     // exact P(Phi(X_T) > a) of the continuous process
  std::optional<double> exact_rate{};      // large-deviations rate, when known
  std::optional<double> committor_beta{};  // set for the Brownian model
};

using BrownianScenario = Scenario<BrownianSde, AbsCoordinate>;
using OuScenario = Scenario<OrnsteinUhlenbeckSde, Coordinate>;
using DriftedBmScenario = Scenario<DriftedBrownianSde, Coordinate>;
using LorenzScenario = Scenario<LorenzSde, LorenzEllipsoid>;
using PeriodicScenario = Scenario<PeriodicDriftSde, Coordinate>;
using PeriodicRatioScenario = Scenario<TimeRatio<PeriodicDriftSde>, Coordinate>;
using OuAverageScenario = Scenario<TemporalAverage<OrnsteinUhlenbeckSde, Coordinate>, Coordinate>;
using RandomWalkScenario = Scenario<SignRandomWalk, Coordinate>;

using AnyScenario = std::variant<BrownianScenario, OuScenario, DriftedBmScenario, LorenzScenario,
                                 PeriodicScenario, PeriodicRatioScenario, OuAverageScenario,
                                 RandomWalkScenario>;

/// Grid and threshold settings that replace the catalog defaults when present.
struct ScenarioOverrides {
  std::optional<double> dt{};
  std::optional<double> horizon{};
  std::optional<double> t0{};
  std::optional<double> a{};
  std::optional<std::vector<double>> x0{};
};

inline const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names{"brownian",       "ou",         "drifted_bm",
                                              "lorenz",         "periodic_drift",
                                              "ou_average",     "random_walk"};
  return names;
}

namespace detail {

class ParamReader {
public:
  ParamReader(std::string model, const ParamMap& params) : model_(std::move(model)), params_(params) {}

  double required(const std::string& key) {
    used_.insert(key);
    const auto it = params_.find(key);
    if (it == params_.end()) throw ConfigError(model_ + ": missing parameter '" + key + "'");
    return it->second;
  }

  double optional(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [key, value] : params_)
      if (!used_.contains(key)) throw ConfigError(model_ + ": unknown parameter '" + key + "'");
  }

private:
  std::string model_;
  const ParamMap& params_;
  std::set<std::string> used_;
};

inline double positive(const std::string& what, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive");
  return v;
}

inline GridSpec make_grid(const ScenarioOverrides& o, double dt, double horizon,
                          std::vector<double> x0) {
  return GridSpec::from_horizon(o.dt.value_or(dt), o.horizon.value_or(horizon),
                                o.x0.value_or(std::move(x0)), o.t0.value_or(0.0));
}

}  // namespace detail

/// Looks up a built-in model by name. Parameter keys per model:
///   brownian        beta (required)
///   ou              theta = 1, sigma = 1
///   drifted_bm      alpha = 4, beta (required)
///   lorenz          sigma = 3, r = 26, b = 1, noise = 3
///   periodic_drift  gamma = 1, noise = sqrt(2), ratio = 0 (1: track Y = X/t against a,
///                   0: track X against a * T)
///   ou_average      beta = 1, theta = 1
///   random_walk     (none)
inline AnyScenario builtin_model(const std::string& name, const ParamMap& params,
                                 const ScenarioOverrides& o = {}) {
  detail::ParamReader p(name, params);
  using detail::make_grid;
  using detail::positive;

  if (name == "brownian") {
    BrownianScenario s;
    s.model.beta = positive("brownian: beta", p.required("beta"));
    p.finish();
    s.grid = make_grid(o, 1e-3, 1.0, {0.1});
    s.obs = {AbsCoordinate{0}, o.a.value_or(1.0)};
    s.phi_name = "abs";
    s.committor_beta = s.model.beta;
    if (s.grid.n0 == 0)
      s.reference_p = analytic::analytic_p_brownian(s.model.beta, s.grid.x0[0], s.grid.horizon(),
                                                    s.obs.threshold);
    s.name = name;
    return s;
  }
  if (name == "ou") {
    OuScenario s;
    s.model.theta = positive("ou: theta", p.optional("theta", 1.0));
    s.model.sigma = positive("ou: sigma", p.optional("sigma", 1.0));
    p.finish();
    s.grid = make_grid(o, 1e-3, 2.0, {0.0});
    s.obs = {Coordinate{0}, o.a.value_or(3.0)};
    s.phi_name = "x";
    if (s.grid.n0 == 0)
      s.reference_p = analytic::ou_law(s.grid.horizon(), s.model.theta, s.model.sigma, s.grid.x0[0])
                          .tail_above(s.obs.threshold);
    s.name = name;
    return s;
  }
  if (name == "drifted_bm") {
    DriftedBmScenario s;
    s.model.alpha = p.optional("alpha", 4.0);
    s.model.beta = positive("drifted_bm: beta", p.required("beta"));
    p.finish();
    s.grid = make_grid(o, 1e-2, 1.0, {0.0});
    s.obs = {Coordinate{0}, o.a.value_or(1.0)};
    s.phi_name = "x";
    if (s.grid.n0 == 0)
      s.reference_p = analytic::GaussianLaw(s.grid.x0[0] - s.model.alpha * s.grid.horizon(),
                                            2.0 * s.grid.horizon() / s.model.beta)
                          .tail_above(s.obs.threshold);
    s.name = name;
    return s;
  }
  if (name == "lorenz") {
    LorenzScenario s;
    s.model.sigma = positive("lorenz: sigma", p.optional("sigma", 3.0));
    s.model.r = positive("lorenz: r", p.optional("r", 26.0));
    s.model.b = positive("lorenz: b", p.optional("b", 1.0));
    s.model.noise = p.optional("noise", 3.0);
    p.finish();
    auto x0 = s.model.equilibrium();
    for (double& v : x0) v += 0.5;
    s.grid = make_grid(o, 1e-2, 5.0, std::move(x0));
    s.obs = {LorenzEllipsoid{s.model.sigma, s.model.r, s.model.b}, o.a.value_or(1.0)};
    s.phi_name = "lorenz";
    s.name = name;
    return s;
  }
  if (name == "periodic_drift") {
    PeriodicDriftSde sde;
    sde.gamma = p.optional("gamma", 1.0);
    sde.noise = p.optional("noise", std::sqrt(2.0));
    const double ratio = p.optional("ratio", 0.0);
    p.finish();
    if (ratio != 0.0 && ratio != 1.0) throw ConfigError("periodic_drift: ratio must be 0 or 1");
    const double a = o.a.value_or(1.0);
    GridSpec grid = make_grid(o, 1e-2, 50.0, {0.0});
    if (ratio == 0.0) {
      PeriodicScenario s;
      s.model = sde;
      s.grid = std::move(grid);
      s.obs = {Coordinate{0}, a * s.grid.horizon()};
      s.phi_name = "x";
      s.name = name;
      return s;
    }
    PeriodicRatioScenario s{.name = name, .model = TimeRatio<PeriodicDriftSde>(sde, 0)};
    if (grid.x0.size() == 1) grid.x0 = s.model.initial_state(grid.x0, grid.t0());
    s.grid = std::move(grid);
    s.obs = {Coordinate{1}, a};
    s.phi_name = "y";
    return s;
  }
  if (name == "ou_average") {
    OrnsteinUhlenbeckSde ou;
    const double beta = positive("ou_average: beta", p.optional("beta", 1.0));
    ou.theta = positive("ou_average: theta", p.optional("theta", 1.0));
    ou.sigma = std::sqrt(2.0 / beta);
    p.finish();
    OuAverageScenario s{.name = name, .model = augment_temporal_average(ou, Coordinate{0})};
    GridSpec grid = make_grid(o, 5e-3, 25.0, {0.0});
    if (grid.x0.size() == 1) grid.x0 = s.model.initial_state(grid.x0);
    s.grid = std::move(grid);
    s.obs = {Coordinate{1}, o.a.value_or(1.0)};
    s.phi_name = "y";
    // sqrt(T) Y(T) has asymptotic variance sigma^2 / theta^2.
    const double a = s.obs.threshold;
    s.exact_rate = a * a * ou.theta * ou.theta / (2.0 * ou.sigma * ou.sigma);
    return s;
  }
  if (name == "random_walk") {
    p.finish();
    RandomWalkScenario s;
    s.grid = make_grid(o, 1.0, 2.0, {0.0});
    s.obs = {Coordinate{0}, o.a.value_or(1.5)};
    s.phi_name = "x";
    s.name = name;
    return s;
  }
  throw ConfigError("unknown model '" + name + "'");
}

/// Score selection by name: std | new | new_schedule | committor_bm.
struct ScoreSpec {
  std::string name = "new";
  std::string schedule = "constant";  // constant | linear (for new_schedule)
};

inline const std::vector<std::string>& builtin_score_names() {
  static const std::vector<std::string> names{"std", "new", "new_schedule", "committor_bm"};
  return names;
}

/// Calls fn(score) with the score selected by `spec` for scenario `s`, returning fn's result.
template <MarkovModel Model, class Phi, class Fn>
decltype(auto) with_score(const Scenario<Model, Phi>& s, const ScoreSpec& spec, Fn&& fn) {
  if (spec.name == "std") return fn(score_std(s.obs));
  if (spec.name == "new") return fn(score_new(s.obs, s.grid));
  if (spec.name == "new_schedule") {
    if (spec.schedule == "constant")
      return fn(score_new_schedule(s.obs, s.grid, ThresholdSchedule::constant(s.obs.threshold)));
    if (spec.schedule == "linear")
      return fn(score_new_schedule(
          s.obs, s.grid, ThresholdSchedule::linear_ramp(s.obs.threshold, s.grid.horizon())));
    throw ConfigError("unknown threshold schedule '" + spec.schedule + "'");
  }
  if (spec.name == "committor_bm") {
    if constexpr (std::is_same_v<Phi, Coordinate> || std::is_same_v<Phi, AbsCoordinate>) {
      if (s.committor_beta)
        return fn(score_committor_bm(s.obs, s.grid, *s.committor_beta));
    }
    throw ConfigError("score committor_bm is only defined for the brownian model");
  }
  throw ConfigError("unknown score '" + spec.name + "'");
}

}  // namespace ams
