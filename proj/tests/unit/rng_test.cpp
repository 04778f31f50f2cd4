#include <ams/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

TEST(Stream, SameSeedSameSequence) {
  ams::Stream a(7, 3);
  ams::Stream b(7, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Stream, DerivedStreamsDiffer) {
  auto a = ams::Stream::derive(7, 0);
  auto b = ams::Stream::derive(7, 1);
  auto c = ams::Stream::derive(8, 0);
  const double x = a.normal();
  EXPECT_NE(x, b.normal());
  EXPECT_NE(x, c.normal());
}

TEST(Stream, HighSeedBitsMatter) {
  ams::Stream a(1, 0);
  ams::Stream b(1 + (std::uint64_t{1} << 32), 0);
  EXPECT_NE(a.uniform(), b.uniform());
}

TEST(Stream, NormalMoments) {
  ams::Stream rng(11);
  constexpr int n = 200000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Stream, IndexBelowCoversRangeUniformly) {
  ams::Stream rng(5);
  std::vector<int> counts(7, 0);
  constexpr int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.index_below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 4.0 * std::sqrt(n / 7.0));
}

TEST(Stream, FillNormalMatchesSequentialDraws) {
  ams::Stream a(3);
  ams::Stream b(3);
  std::vector<double> buf(5);
  a.fill_normal(buf);
  for (double v : buf) EXPECT_EQ(v, b.normal());
}

}  // namespace
