#include <ams/analytic.hpp>
#include <ams/catalog.hpp>
#include <ams/models.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using ams::GridSpec;

ams::SdeModel deterministic(std::function<double(double, double)> f) {
  return ams::SdeModel(
      "det", 1, 1,
      [f](double t, std::span<const double> x) { return std::vector<double>{f(t, x[0])}; },
      [](double, std::span<const double>) { return std::vector<double>{0.0}; });
}

TEST(Observables, Coordinates) {
  const std::vector<double> x{-2.0, 0.3};
  EXPECT_EQ(ams::Coordinate{1}(x), 0.3);
  EXPECT_EQ(ams::AbsCoordinate{0}(x), 2.0);
  const ams::Observable<ams::Coordinate> obs{{1}, 0.3};
  EXPECT_FALSE(obs.exceeds(x));
}

TEST(Observables, LorenzEllipsoidAtEquilibrium) {
  ams::LorenzSde lz;
  const auto x = lz.equilibrium();
  EXPECT_DOUBLE_EQ(x[0], 5.0);
  EXPECT_DOUBLE_EQ(x[2], 25.0);
  EXPECT_NEAR(ams::LorenzEllipsoid{}(x), 116.0 / 841.0, 1e-15);
}

TEST(Models, LorenzDriftVanishesAtEquilibrium) {
  ams::LorenzSde lz;
  const auto x = lz.equilibrium();
  std::vector<double> f(3);
  lz.drift(0.0, x, f);
  for (double v : f) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Models, PeriodicDriftIsPeriodic) {
  ams::PeriodicDriftSde p;
  std::vector<double> a(1);
  std::vector<double> b(1);
  const std::vector<double> x{0.3};
  const std::vector<double> y{3.3};
  p.drift(0.0, x, a);
  p.drift(0.0, y, b);
  EXPECT_NEAR(a[0], b[0], 1e-9);
}

TEST(TemporalAverage, ConstantProcessKeepsValue) {
  const auto model = ams::augment_temporal_average(deterministic([](double, double) { return 0.0; }),
                                                   [](std::span<const double> x) { return 2.0 * x[0]; });
  const auto x0 = model.initial_state(std::vector<double>{1.5});
  ams::Stream rng(1);
  const auto p = ams::simulate_path(model, GridSpec::from_horizon(0.1, 1.0, x0), rng);
  for (std::size_t n = 0; n <= 10; ++n) EXPECT_DOUBLE_EQ(p.state(n)[1], 3.0);
}

TEST(TemporalAverage, TwoStepHandExample) {
  // X: 0 -> 1 -> 3 with unit steps.
  const auto inner = deterministic([](double t, double) { return t == 0.0 ? 1.0 : 2.0; });
  const auto model = ams::augment_temporal_average(inner, ams::Coordinate{0});
  ams::Stream rng(1);
  const auto p = ams::simulate_path(model, GridSpec::from_horizon(1.0, 2.0, model.initial_state(std::vector<double>{0.0})), rng);
  EXPECT_DOUBLE_EQ(p.state(1)[1], 1.0);
  EXPECT_DOUBLE_EQ(p.state(2)[1], 2.0);
}

TEST(TemporalAverage, RecursionMatchesDirectMean) {
  ams::OrnsteinUhlenbeckSde ou;
  const auto model = ams::augment_temporal_average(ou, ams::Coordinate{0});
  const auto g = GridSpec::from_horizon(1e-3, 20.0, model.initial_state(std::vector<double>{0.4}), 0.5);
  ams::Stream rng(3);
  const auto p = ams::simulate_path(model, g, rng);
  double sum = 0.0;
  for (std::size_t m = g.n0 + 1; m <= g.n_steps; ++m) sum += p.state(m)[0];
  const double direct = sum / static_cast<double>(g.n_steps - g.n0);
  EXPECT_NEAR(p.final_state()[1], direct, 1e-10 * std::max(1.0, std::abs(direct)));
}

// Exact variance of the time-averaged Euler OU chain started at 0.
double ou_chain_average_variance(double dt, std::size_t n, double theta, double sigma) {
  const double rho = 1.0 - theta * dt;
  const double s2 = sigma * sigma * dt;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = (1.0 - std::pow(rho, static_cast<double>(n - k))) / (1.0 - rho);
    acc += c * c;
  }
  return s2 * acc / (static_cast<double>(n) * static_cast<double>(n));
}

TEST(TemporalAverage, OuAverageGaussianMoments) {
  const auto s = std::get<ams::OuAverageScenario>(ams::builtin_model("ou_average", {{"beta", 2.0}}));
  ASSERT_EQ(s.grid.n_steps, 5000u);
  ams::Stream rng(8);
  std::vector<double> y;
  constexpr std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) y.push_back(ams::simulate_path(s.model, s.grid, rng).final_state()[1]);
  const auto m = ams::testing::two_pass(y);
  const double var = ou_chain_average_variance(s.grid.dt, s.grid.n_steps, 1.0, 1.0);
  // The continuous-time value differs from the chain by O(dt).
  EXPECT_NEAR(var, ams::analytic::ou_time_average_variance(25.0, 1.0, 1.0), 0.01 * var);
  EXPECT_NEAR(m.mean, 0.0, 4.0 * std::sqrt(var / n));
  EXPECT_NEAR(m.variance, var, 4.0 * var * std::sqrt(2.0 / (n - 1)));
}

TEST(TimeRatio, TracksVelocity) {
  const auto inner = deterministic([](double, double) { return 2.0; });
  const ams::TimeRatio<ams::SdeModel> model(inner, 0);
  const auto g = GridSpec::from_horizon(0.5, 2.0, model.initial_state(std::vector<double>{0.0}, 0.0));
  ams::Stream rng(1);
  const auto p = ams::simulate_path(model, g, rng);
  EXPECT_EQ(p.state(0)[1], 0.0);
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_DOUBLE_EQ(p.state(n)[1], 2.0);
  EXPECT_DOUBLE_EQ(model.initial_state(std::vector<double>{3.0}, 1.5)[1], 2.0);
}

TEST(SignRandomWalk, UnitSteps) {
  const ams::SignRandomWalk walk;
  ams::Stream rng(2);
  const auto p = ams::simulate_path(walk, GridSpec::from_horizon(1.0, 10.0, {0.0}), rng);
  for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(std::abs(p.state(n)[0] - p.state(n - 1)[0]), 1.0);
}

TEST(Catalog, Defaults) {
  const auto bm = std::get<ams::BrownianScenario>(ams::builtin_model("brownian", {{"beta", 2.0}}));
  EXPECT_EQ(bm.grid.n_steps, 1000u);
  EXPECT_EQ(bm.grid.x0[0], 0.1);
  EXPECT_EQ(bm.obs.threshold, 1.0);
  EXPECT_NEAR(*bm.reference_p, 3.197e-1, 5e-5);

  const auto dbm = std::get<ams::DriftedBmScenario>(ams::builtin_model("drifted_bm", {{"beta", 1.0}}));
  EXPECT_NEAR(*dbm.reference_p, 2.035e-4, 5e-8);
  EXPECT_EQ(dbm.grid.n_steps, 100u);

  const auto lz = std::get<ams::LorenzScenario>(ams::builtin_model("lorenz", {}));
  EXPECT_EQ(lz.grid.x0[0], 5.5);
  EXPECT_EQ(lz.grid.n_steps, 500u);

  const auto avg = std::get<ams::OuAverageScenario>(ams::builtin_model("ou_average", {}));
  EXPECT_EQ(avg.grid.x0.size(), 2u);
  EXPECT_DOUBLE_EQ(*avg.exact_rate, ams::analytic::ou_average_rate_exact(1.0));

  const auto per = std::get<ams::PeriodicScenario>(ams::builtin_model("periodic_drift", {}));
  EXPECT_EQ(per.obs.threshold, 50.0);
  const auto per_y = std::get<ams::PeriodicRatioScenario>(
      ams::builtin_model("periodic_drift", {{"ratio", 1.0}}, {.a = 1.25}));
  EXPECT_EQ(per_y.obs.threshold, 1.25);
  EXPECT_EQ(per_y.grid.x0.size(), 2u);
}

TEST(Catalog, Overrides) {
  ams::ScenarioOverrides o;
  o.dt = 1e-2;
  o.horizon = 4.0;
  o.a = 3.2;
  const auto ou = std::get<ams::OuScenario>(ams::builtin_model("ou", {}, o));
  EXPECT_EQ(ou.grid.n_steps, 400u);
  EXPECT_NEAR(*ou.reference_p, 3.002e-6, 5e-10);
}

TEST(Catalog, Errors) {
  EXPECT_THROW(ams::builtin_model("nope", {}), ams::ConfigError);
  EXPECT_THROW(ams::builtin_model("brownian", {}), ams::ConfigError);
  EXPECT_THROW(ams::builtin_model("brownian", {{"beta", 1.0}, {"gamma", 2.0}}), ams::ConfigError);
  EXPECT_THROW(ams::builtin_model("brownian", {{"beta", -1.0}}), ams::ConfigError);
  EXPECT_THROW(ams::builtin_model("periodic_drift", {{"ratio", 0.5}}), ams::ConfigError);
  ams::ScenarioOverrides o;
  o.dt = 0.3;
  EXPECT_THROW(ams::builtin_model("ou", {}, o), ams::ConfigError);
}

}  // namespace
