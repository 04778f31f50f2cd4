// Command-line front end: run | table | rate | validate.

#include <ams.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config_path;
  std::string model;
  std::vector<std::string> params;  // key=value
  std::string score;
  std::string schedule;
  std::optional<std::size_t> n_rep;
  std::optional<std::size_t> samples;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> a;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<double> scale;
  std::string out;
  std::string format;
  std::string a_list;
  std::string t_list;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "Experiment file (INI, one section per scenario)");
  app->add_option("--model", f.model, "Built-in model name");
  app->add_option("--param", f.params, "Model parameter as key=value (repeatable)");
  app->add_option("--score", f.score, "std | new | new_schedule | committor_bm");
  app->add_option("--schedule", f.schedule, "constant | linear (for new_schedule)");
  app->add_option("--nrep", f.n_rep, "Replicas per realization");
  app->add_option("--samples,-M", f.samples, "Independent realizations M");
  app->add_option("--dt", f.dt, "Time step");
  app->add_option("--T", f.horizon, "Horizon");
  app->add_option("--a", f.a, "Threshold");
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--threads", f.threads, "Worker threads");
  app->add_option("--scale", f.scale, "Divide sample sizes by this factor");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--format", f.format, "Summary format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--a-list", f.a_list, "Comma separated thresholds");
  app->add_option("--T-list", f.t_list, "Comma separated horizons");
}

// Flags given on the command line override the file.
void apply_flags(ams::ExperimentConfig& c, const CommonFlags& f) {
  using ams::apply_setting;
  if (!f.model.empty()) apply_setting(c, "model", f.model);
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ams::ConfigError("--param expects key=value, got '" + kv + "'");
    apply_setting(c, "param." + kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!f.score.empty()) apply_setting(c, "score", f.score);
  if (!f.schedule.empty()) apply_setting(c, "schedule", f.schedule);
  if (f.n_rep) c.n_rep = *f.n_rep;
  if (f.samples) c.samples = *f.samples;
  if (f.dt) c.dt = *f.dt;
  if (f.horizon) c.horizon = *f.horizon;
  if (f.a) c.a = *f.a;
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.parallelism = *f.threads;
  if (f.scale) c.scale = *f.scale;
  if (!f.out.empty()) c.out = f.out;
  if (!f.format.empty()) c.format = f.format;
  if (!f.a_list.empty()) apply_setting(c, "a_list", f.a_list);
  if (!f.t_list.empty()) apply_setting(c, "T_list", f.t_list);
}

std::vector<ams::ExperimentConfig> load(const CommonFlags& f) {
  std::vector<ams::ExperimentConfig> configs;
  if (!f.config_path.empty()) configs = ams::load_config_file(f.config_path);
  else configs.emplace_back();
  for (auto& c : configs) apply_flags(c, f);
  return configs;
}

void print_summary(const ams::RunOutcome& o) {
  const auto& s = o.summary;
  std::cout << o.config.name << ": mean " << ams::format_number(s.mean) << "  CI ["
            << ams::format_number(s.ci_low) << ", " << ams::format_number(s.ci_high) << "]  var "
            << ams::format_number(s.variance) << "  r " << s.r_nonzero << "  extinct "
            << s.extinct_count << "  M " << s.m << "  " << s.wall_time << " s";
  if (o.reference_p) std::cout << "  reference " << ams::format_number(*o.reference_p);
  std::cout << "  [" << o.config_hash << "]\n";
}

void write_table(const ams::Table& t, const fs::path& dir) {
  auto os = ams::open_output(dir / (t.id + ".csv"));
  t.write(os);
  t.write(std::cout);
}

int run_validate(std::uint64_t seed, bool broken) {
  const auto checks = ams::cmd_validate({seed, broken});
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << '\n';
    ok = ok && c.passed;
  }
  std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? 0 : 1;
}

ams::TableOptions table_options(const ams::ExperimentConfig& c) {
  ams::TableOptions opt;
  opt.scale = c.scale;
  opt.seed = c.seed;
  opt.parallelism = c.parallelism;
  opt.t_list = c.t_list;
  return opt;
}

void run_rate(const ams::ExperimentConfig& c) {
  const auto report = ams::cmd_rate(c);
  const fs::path dir = c.out;
  const auto points = report.points_table();
  const auto fits = report.fits_table(c.hash());
  {
    auto os = ams::open_output(dir / (c.name + ".rate_points.csv"));
    points.write(os);
  }
  {
    auto os = ams::open_output(dir / (c.name + ".rate_fits.csv"));
    fits.write(os);
  }
  fits.write(std::cout);
}

int run_configs(const std::vector<ams::ExperimentConfig>& configs) {
  int status = 0;
  std::vector<ams::RunOutcome> outcomes;
  for (const auto& c : configs) {
    if (c.mode == "single") {
      auto o = ams::run_scenario(c);
      ams::write_outcome(o, c.out, c.format);
      print_summary(o);
      outcomes.push_back(std::move(o));
    } else if (c.mode == "table_sweep") {
      if (c.table.empty()) throw ams::ConfigError(c.name + ": table_sweep needs 'table'");
      write_table(ams::cmd_table(c.table, table_options(c)), c.out);
    } else if (c.mode == "rate_sweep") {
      run_rate(c);
    } else {
      status = std::max(status, run_validate(c.seed, false));
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multilevel splitting experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run the scenarios of a config file or of the flags");
  add_common(run, run_flags);

  CommonFlags table_flags;
  std::string table_id;
  auto* table = app.add_subcommand("table", "Run one reference sweep");
  table->add_option("id", table_id, "Table id")->required()->check(CLI::IsMember(ams::table_ids()));
  add_common(table, table_flags);

  CommonFlags rate_flags;
  auto* rate = app.add_subcommand("rate", "Rate-function regression over a grid of (a, T)");
  add_common(rate, rate_flags);

  std::uint64_t validate_seed = 1;
  bool broken = false;
  auto* validate = app.add_subcommand("validate", "Fast self-check suite");
  validate->add_option("--seed", validate_seed, "Seed");
  validate->add_flag("--inject-broken-score", broken)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_configs(load(run_flags));
    if (*table) {
      auto c = load(table_flags).front();
      if (c.out == ".") c.out = "results";
      auto opt = table_options(c);
      if (table_flags.n_rep) opt.n_rep = *table_flags.n_rep;
      write_table(ams::cmd_table(table_id, opt), c.out);
      return 0;
    }
    if (*rate) {
      for (auto c : load(rate_flags)) {
        c.mode = "rate_sweep";
        run_rate(c);
      }
      return 0;
    }
    if (*validate) return run_validate(validate_seed, broken);
  } catch (const ams::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
