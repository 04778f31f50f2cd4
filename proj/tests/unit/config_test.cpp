#include <ams/config.hpp>

#include <gtest/gtest.h>

#include <sstream>

namespace {

std::vector<ams::ExperimentConfig> parse(const std::string& text) {
  std::istringstream in(text);
  return ams::parse_config(in);
}

TEST(ParseConfig, SectionsInheritDefaults) {
  const auto cs = parse(R"(seed = 4
[defaults]
n_rep = 200
M = 50

[bm2]
model = brownian
param.beta = 2
score = new

[ou]
model = ou
T = 4
a = 3.1
x0 = 0.5
score = new_schedule
schedule = linear
n_rep = 30
)");
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].name, "bm2");
  EXPECT_EQ(cs[0].seed, 4u);
  EXPECT_EQ(cs[0].n_rep, 200u);
  EXPECT_EQ(cs[0].samples, 50u);
  EXPECT_EQ(cs[0].params.at("beta"), 2.0);
  EXPECT_EQ(cs[1].n_rep, 30u);
  EXPECT_EQ(*cs[1].horizon, 4.0);
  EXPECT_EQ(*cs[1].a, 3.1);
  EXPECT_EQ(cs[1].x0->at(0), 0.5);
  EXPECT_EQ(cs[1].score.name, "new_schedule");
  EXPECT_EQ(cs[1].score.schedule, "linear");
}

TEST(ParseConfig, Lists) {
  const auto cs = parse("[r]\nmodel = ou_average\nmode = rate_sweep\na_list = 0.4, 0.6\nT_list = 25,50 , 100\n");
  EXPECT_EQ(cs[0].a_list, (std::vector<double>{0.4, 0.6}));
  EXPECT_EQ(cs[0].t_list, (std::vector<double>{25, 50, 100}));
  EXPECT_EQ(cs[0].mode, "rate_sweep");
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse("[a]\nbogus = 1\n"), ams::ConfigError);
  EXPECT_THROW(parse("[a]\nn_rep = 1.5\n"), ams::ConfigError);
  EXPECT_THROW(parse("[a]\ndt = fast\n"), ams::ConfigError);
  EXPECT_THROW(parse("[a]\nmode = sprint\n"), ams::ConfigError);
  EXPECT_THROW(parse("[a]\nformat = xml\n"), ams::ConfigError);
  EXPECT_THROW(parse("model = ou\n"), ams::ConfigError);
  EXPECT_THROW(parse("[a\nmodel = ou\n"), ams::ConfigError);
  EXPECT_THROW(ams::load_config_file("/nonexistent/file.ini"), ams::ConfigError);
}

TEST(ConfigHash, StableAndSensitive) {
  ams::ExperimentConfig a;
  a.model = "brownian";
  a.params["beta"] = 2.0;
  ams::ExperimentConfig b = a;
  b.out = "elsewhere";
  b.parallelism = 8;
  b.format = "csv";
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  b.seed = 2;
  EXPECT_NE(a.hash(), b.hash());
  b = a;
  b.params["beta"] = 2.0000001;
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_NE(a.canonical().find("param.beta=2\n"), std::string::npos);
}

}  // namespace
