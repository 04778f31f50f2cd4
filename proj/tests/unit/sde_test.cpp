#include <ams/models.hpp>
#include <ams/sde.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using ams::GridSpec;

TEST(EmStep, ZeroNoiseBrownianStaysPut) {
  ams::BrownianSde bm;
  bm.beta = 2.0;
  const std::vector<double> x{0.1};
  const std::vector<double> z{0.0};
  EXPECT_EQ(ams::em_step(bm, 0.0, x, 1e-3, z)[0], 0.1);
}

TEST(EmStep, DriftedStepIsDeterministic) {
  ams::DriftedBrownianSde sde;
  sde.alpha = 4.0;
  sde.beta = 1.0;
  const std::vector<double> x{0.0};
  const std::vector<double> z{0.0};
  EXPECT_DOUBLE_EQ(ams::em_step(sde, 0.0, x, 0.01, z)[0], -0.04);
}

TEST(EmStep, OrnsteinUhlenbeckUnitNoise) {
  ams::OrnsteinUhlenbeckSde ou;
  const std::vector<double> x{1.0};
  const std::vector<double> z{1.0};
  EXPECT_NEAR(ams::em_step(ou, 0.0, x, 1e-3, z)[0], 1.0 - 1e-3 + std::sqrt(1e-3), 1e-15);
  EXPECT_NEAR(ams::em_step(ou, 0.0, x, 1e-3, z)[0], 1.030623, 1e-6);
}

TEST(EmStep, NonFiniteResultCarriesTimeIndex) {
  ams::SdeModel blowup("blowup", 1, 1,
                       [](double, std::span<const double> x) { return std::vector<double>{x[0] * 1e308}; },
                       [](double, std::span<const double>) { return std::vector<double>{0.0}; });
  const std::vector<double> x{10.0};
  const std::vector<double> z{0.0};
  try {
    (void)ams::em_step(blowup, 0.0, x, 1.0, z, 17);
    FAIL() << "expected IntegrationError";
  } catch (const ams::IntegrationError& e) {
    EXPECT_EQ(e.time_index(), 17u);
  }
}

TEST(EmStep, RejectsBadArguments) {
  ams::BrownianSde bm;
  const std::vector<double> x{0.0};
  const std::vector<double> z2{0.0, 0.0};
  const std::vector<double> z{0.0};
  EXPECT_THROW((void)ams::em_step(bm, 0.0, x, 0.0, z), ams::ConfigError);
  EXPECT_THROW((void)ams::em_step(bm, 0.0, x, 0.1, z2), ams::ConfigError);
}

TEST(SdeModel, MatrixDiffusionMatchesBuiltin) {
  ams::SdeModel m("ou", 1, 1,
                  [](double, std::span<const double> x) { return std::vector<double>{-x[0]}; },
                  [](double, std::span<const double>) { return std::vector<double>{1.0}; });
  ams::OrnsteinUhlenbeckSde ou;
  const std::vector<double> x{0.7};
  const std::vector<double> z{-0.3};
  EXPECT_DOUBLE_EQ(ams::em_step(m, 0.0, x, 0.01, z)[0], ams::em_step(ou, 0.0, x, 0.01, z)[0]);
}

TEST(GridSpec, StepsFromHorizon) {
  EXPECT_EQ(GridSpec::steps_for(1e-3, 1.0), 1000u);
  EXPECT_EQ(GridSpec::steps_for(0.1, 0.3), 3u);
  EXPECT_THROW(GridSpec::steps_for(0.3, 1.0), ams::ConfigError);
  EXPECT_THROW(GridSpec::steps_for(-1.0, 1.0), ams::ConfigError);
  const auto g = GridSpec::from_horizon(0.5, 2.0, {1.0}, 0.5);
  EXPECT_EQ(g.n0, 1u);
  EXPECT_EQ(g.n_steps, 4u);
  EXPECT_EQ(g.length(), 4u);
  EXPECT_DOUBLE_EQ(g.t0(), 0.5);
  EXPECT_THROW(GridSpec::from_horizon(0.5, 1.0, {0.0}, 1.0), ams::ConfigError);
}

TEST(GridSpec, ValidateChecksDimension) {
  const auto g = GridSpec::from_horizon(0.1, 1.0, {0.0, 0.0});
  EXPECT_THROW(g.validate(1), ams::ConfigError);
  EXPECT_NO_THROW(g.validate(2));
}

TEST(SimulatePath, ZeroDiffusionOuRecursion) {
  ams::OrnsteinUhlenbeckSde ou;
  ou.sigma = 0.0;
  ams::Stream rng(1);
  const auto p = ams::simulate_path(ou, GridSpec::from_horizon(0.5, 1.0, {1.0}), rng);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.state(0)[0], 1.0);
  EXPECT_EQ(p.state(1)[0], 0.5);
  EXPECT_EQ(p.state(2)[0], 0.25);
}

TEST(SimulatePath, StartsAtInitialStateAndHasFullLength) {
  ams::LorenzSde lz;
  ams::Stream rng(2);
  const auto g = GridSpec::from_horizon(1e-2, 1.0, {5.5, 5.5, 25.5}, 0.2);
  const auto p = ams::simulate_path(lz, g, rng);
  EXPECT_EQ(p.first_index(), 20u);
  EXPECT_EQ(p.last_index(), 100u);
  EXPECT_EQ(p.size(), g.length());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p.state(20)[i], g.x0[i]);
  for (double v : p.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(SimulatePath, BitReproducible) {
  ams::OrnsteinUhlenbeckSde ou;
  const auto g = GridSpec::from_horizon(1e-2, 1.0, {0.0});
  ams::Stream a(9);
  ams::Stream b(9);
  const auto pa = ams::simulate_path(ou, g, a);
  const auto pb = ams::simulate_path(ou, g, b);
  EXPECT_TRUE(std::equal(pa.data().begin(), pa.data().end(), pb.data().begin()));
}

TEST(SimulatePath, BrownianFinalVariance) {
  ams::BrownianSde bm;
  bm.beta = 2.0;
  const auto g = GridSpec::from_horizon(0.05, 1.0, {0.0});
  ams::Stream rng(4);
  std::vector<double> finals;
  constexpr std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) finals.push_back(ams::simulate_path(bm, g, rng).final_state()[0]);
  const auto m = ams::testing::two_pass(finals);
  EXPECT_NEAR(m.variance, 1.0, 3.0 * std::sqrt(2.0 / (n - 1)));
  EXPECT_NEAR(m.mean, 0.0, 3.0 / std::sqrt(n));
}

TEST(SimulatePath, IntegrationFailureIsReported) {
  ams::SdeModel blowup("blowup", 1, 1,
                       [](double, std::span<const double> x) { return std::vector<double>{x[0] * x[0]}; },
                       [](double, std::span<const double>) { return std::vector<double>{0.0}; });
  ams::Stream rng(1);
  EXPECT_THROW((void)ams::simulate_path(blowup, GridSpec::from_horizon(1.0, 20.0, {10.0}), rng),
               ams::IntegrationError);
}

TEST(ResumePath, AtFinalIndexReturnsPrefix) {
  ams::OrnsteinUhlenbeckSde ou;
  const auto g = GridSpec::from_horizon(0.1, 1.0, {0.3});
  ams::Stream rng(5);
  const auto p = ams::simulate_path(ou, g, rng);
  const auto q = ams::resume_path(ou, g, p, g.n_steps, rng);
  EXPECT_TRUE(std::equal(p.data().begin(), p.data().end(), q.data().begin()));
}

TEST(ResumePath, KeepsPrefixAndIsDeterministicWithoutNoise) {
  ams::OrnsteinUhlenbeckSde ou;
  ou.sigma = 0.0;
  const auto g = GridSpec::from_horizon(0.25, 1.0, {1.0});
  ams::Stream rng(6);
  const auto full = ams::simulate_path(ou, g, rng);
  for (std::size_t m = 0; m <= g.n_steps; ++m) {
    const auto q = ams::resume_path(ou, g, full.truncated(m), m, rng);
    EXPECT_TRUE(std::equal(full.data().begin(), full.data().end(), q.data().begin())) << m;
  }
}

// Law of the final state: resumed from the initial index versus fresh paths, and resumed from
// a mid-path prefix versus the continuation law from that state.
TEST(ResumePath, KolmogorovSmirnovAgainstFreshPaths) {
  ams::OrnsteinUhlenbeckSde ou;
  const auto g = GridSpec::from_horizon(0.05, 1.0, {0.5});
  constexpr std::size_t n = 10000;
  ams::Stream rng_a(21);
  ams::Stream rng_b(22);
  const auto prefix = ams::simulate_path(ou, g, rng_a).truncated(0);
  std::vector<double> fresh;
  std::vector<double> resumed;
  for (std::size_t i = 0; i < n; ++i) {
    fresh.push_back(ams::simulate_path(ou, g, rng_a).final_state()[0]);
    resumed.push_back(ams::resume_path(ou, g, prefix, 0, rng_b).final_state()[0]);
  }
  EXPECT_LT(ams::testing::ks_statistic(fresh, resumed), ams::testing::ks_critical(n, n, 0.01));
}

TEST(ResumePath, MidPathKolmogorovSmirnov) {
  ams::OrnsteinUhlenbeckSde ou;
  const auto g = GridSpec::from_horizon(0.05, 1.0, {0.5});
  constexpr std::size_t n = 10000;
  constexpr std::size_t m = 10;
  ams::Stream rng(31);
  const auto prefix = ams::simulate_path(ou, g, rng);
  auto tail_grid = g;
  tail_grid.n0 = m;
  tail_grid.x0 = {prefix.state(m)[0]};
  std::vector<double> fresh;
  std::vector<double> resumed;
  for (std::size_t i = 0; i < n; ++i) {
    fresh.push_back(ams::simulate_path(ou, tail_grid, rng).final_state()[0]);
    const auto q = ams::resume_path(ou, g, prefix, m, rng);
    ASSERT_EQ(q.state(m)[0], prefix.state(m)[0]);
    resumed.push_back(q.final_state()[0]);
  }
  EXPECT_LT(ams::testing::ks_statistic(fresh, resumed), ams::testing::ks_critical(n, n, 0.01));
}

TEST(ResumePath, RejectsOutOfRangeIndex) {
  ams::OrnsteinUhlenbeckSde ou;
  const auto g = GridSpec::from_horizon(0.1, 1.0, {0.0});
  ams::Stream rng(1);
  const auto p = ams::simulate_path(ou, g, rng);
  EXPECT_THROW((void)ams::resume_path(ou, g, p, 11, rng), ams::ConfigError);
  EXPECT_THROW((void)ams::resume_path(ou, g, p.truncated(3), 5, rng), ams::ConfigError);
}

}  // namespace
