#include <ams/experiments.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

ams::ExperimentConfig small_brownian() {
  ams::ExperimentConfig c;
  c.name = "bm";
  c.model = "brownian";
  c.params["beta"] = 2.0;
  c.n_rep = 100;
  c.samples = 100;
  c.seed = 5;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(RunScenario, BrownianAgreesWithClosedForm) {
  const auto o = ams::run_scenario(small_brownian());
  ASSERT_TRUE(o.reference_p.has_value());
  EXPECT_NEAR(o.summary.mean, *o.reference_p, 3.0 * o.summary.standard_error());
  EXPECT_EQ(o.results.size(), 100u);
  EXPECT_EQ(o.config_hash, small_brownian().hash());
}

TEST(RunScenario, Errors) {
  auto c = small_brownian();
  c.phi = "x";
  EXPECT_THROW(ams::run_scenario(c), ams::ConfigError);
  c = small_brownian();
  c.score.name = "fancy";
  EXPECT_THROW(ams::run_scenario(c), ams::ConfigError);
  c = small_brownian();
  c.model = "ou";
  c.params.clear();
  c.score.name = "committor_bm";
  EXPECT_THROW(ams::run_scenario(c), ams::ConfigError);
  c.model.clear();
  EXPECT_THROW(ams::run_scenario(c), ams::ConfigError);
}

TEST(WriteOutcome, ArtifactsAreDeterministic) {
  const fs::path dir = fs::temp_directory_path() / "ams_experiments_test";
  fs::remove_all(dir);
  auto c = small_brownian();
  ams::write_outcome(ams::run_scenario(c), dir / "a", "json");
  c.parallelism = 3;
  ams::write_outcome(ams::run_scenario(c), dir / "b", "csv");
  const auto csv_a = slurp(dir / "a" / "bm.realizations.csv");
  EXPECT_EQ(csv_a, slurp(dir / "b" / "bm.realizations.csv"));
  EXPECT_EQ(csv_a.substr(0, csv_a.find('\n')),
            "realization_index,p_hat,q_iter,extinct,killed_total,final_fraction,config_hash");
  const auto j = nlohmann::json::parse(slurp(dir / "a" / "bm.summary.json"));
  EXPECT_EQ(j["config_hash"], c.hash());
  EXPECT_EQ(j["config"]["n_rep"], 100);
  EXPECT_TRUE(j.contains("reference"));
  for (const char* k : {"mean", "variance", "ci_low", "ci_high", "m", "r_nonzero", "extinct_count", "wall_time"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_TRUE(fs::exists(dir / "b" / "bm.summary.csv"));
  fs::remove_all(dir);
}

TEST(Format, ScientificWithTenDigits) {
  EXPECT_EQ(ams::format_number(3.197e-1), "3.197000000e-01");
}

TEST(CmdRate, RegressionAndFlags) {
  ams::ExperimentConfig c;
  c.name = "avg";
  c.model = "ou_average";
  c.n_rep = 50;
  c.samples = 4;
  c.dt = 1e-2;
  c.a_list = {0.5};
  c.t_list = {2.0, 4.0, 6.0};
  const auto report = ams::cmd_rate(c);
  ASSERT_EQ(report.cells.size(), 3u);
  ASSERT_EQ(report.fits.size(), 1u);
  ASSERT_TRUE(report.fits[0].fit.has_value());
  EXPECT_GT(report.fits[0].fit->i_hat, 0.0);
  EXPECT_DOUBLE_EQ(*report.fits[0].exact_rate, 0.0625);
  const auto pts = report.points_table();
  EXPECT_EQ(pts.rows.size(), 3u);
  EXPECT_EQ(pts.cell(0, "T"), "2");
  const auto fits = report.fits_table(c.hash());
  EXPECT_EQ(fits.cell(0, "config_hash"), c.hash());
  c.t_list.clear();
  EXPECT_THROW(ams::cmd_rate(c), ams::ConfigError);
}

TEST(CmdTable, ScaledBrownianSweep) {
  ams::TableOptions opt;
  opt.scale = 5000;  // M = 2
  opt.n_rep = 20;
  const auto t = ams::cmd_table("bm2", opt);
  ASSERT_EQ(t.rows.size(), 7u);
  EXPECT_EQ(t.cell(2, "beta"), "8");
  EXPECT_EQ(t.cell(2, "p_dt0"), ams::format_number(ams::analytic::analytic_p_brownian(8, 0.1, 1, 1)));
  for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_EQ(t.cell(r, "config_hash").size(), 16u);
  EXPECT_THROW(ams::cmd_table("bm9"), ams::ConfigError);
  opt.scale = 0.0;
  EXPECT_THROW(ams::cmd_table("bm1", opt), ams::ConfigError);
}

TEST(CmdValidate, PassesAndDetectsBrokenScore) {
  for (std::uint64_t seed : {1u, 2u}) {
    for (const auto& c : ams::cmd_validate({seed, false})) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
  }
  std::size_t failures = 0;
  for (const auto& c : ams::cmd_validate({1, true}))
    if (!c.passed) {
      ++failures;
      EXPECT_NE(c.name.find("injected"), std::string::npos);
    }
  EXPECT_EQ(failures, 1u);
}

}  // namespace
