// Estimates P(|X_1| > 1) for dX = sqrt(2/beta) dW, X_0 = 0.1, and compares with the exact value.

#include <ams.hpp>

#include <cstdio>

int main() {
  ams::BrownianSde bm;
  bm.beta = 16.0;
  const auto grid = ams::GridSpec::from_horizon(1e-3, 1.0, {0.1});
  const ams::Observable<ams::AbsCoordinate> obs{{0}, 1.0};
  const auto xi = ams::score_new(obs, grid);

  ams::AmsConfig cfg;
  cfg.n_rep = 100;
  cfg.seed = 42;
  const auto results = ams::run_many(bm, grid, xi, obs, cfg, 200);
  const auto s = ams::aggregate(results);

  std::printf("estimate  %.4e  CI [%.4e, %.4e]\n", s.mean, s.ci_low, s.ci_high);
  std::printf("exact     %.4e\n", ams::analytic::analytic_p_brownian(bm.beta, 0.1, 1.0, 1.0));
}
