#pragma once

#include <ams/analytic.hpp>
#include <ams/catalog.hpp>
#include <ams/config.hpp>
#include <ams/engine.hpp>
#include <ams/estimators.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ams {

// ---------------------------------------------------------------------------------------------
// Single scenario

struct RunOutcome {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<AmsResult> results;
  EstimateSummary summary;
  EstimateSummary level_summary;  // pre-final-update products
  std::optional<double> reference_p;
  std::optional<double> exact_rate;
};

inline RunOutcome run_scenario(const ExperimentConfig& c) {
  if (c.model.empty()) throw ConfigError("scenario '" + c.name + "': no model given");
  const AnyScenario scenario = builtin_model(c.model, c.params, c.overrides());
  return std::visit(
      [&](const auto& s) {
        if (c.phi && *c.phi != s.phi_name)
          throw ConfigError("model " + c.model + " observes '" + s.phi_name + "', not '" + *c.phi + "'");
        AmsConfig ac;
        ac.n_rep = c.n_rep;
        ac.seed = c.seed;
        const auto start = std::chrono::steady_clock::now();
        auto results = with_score(s, c.score, [&](const auto& xi) {
          return run_many(s.model, s.grid, xi, s.obs, ac, c.samples, c.parallelism);
        });
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        RunOutcome o;
        o.config = c;
        o.config_hash = c.hash();
        o.summary = aggregate(results, wall);
        o.level_summary = aggregate_level_products(results, wall);
        o.results = std::move(results);
        o.reference_p = s.reference_p;
        o.exact_rate = s.exact_rate;
        return o;
      },
      scenario);
}

// ---------------------------------------------------------------------------------------------
// Output

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

struct Table {
  std::string id;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const {
    write_csv_row(os, header);
    for (const auto& r : rows) write_csv_row(os, r);
  }

  // Column lookup for tests and summaries.
  const std::string& cell(std::size_t row, const std::string& column) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == column) return rows.at(row).at(i);
    throw ConfigError("table " + id + " has no column '" + column + "'");
  }
};

inline void write_realizations_csv(std::ostream& os, const RunOutcome& o) {
  write_csv_row(os, {"realization_index", "p_hat", "q_iter", "extinct", "killed_total",
                     "final_fraction", "config_hash"});
  for (std::size_t i = 0; i < o.results.size(); ++i) {
    const auto& r = o.results[i];
    write_csv_row(os, {std::to_string(i), format_number(r.p_hat), std::to_string(r.q_iter),
                       r.extinct ? "1" : "0", std::to_string(r.killed_total),
                       format_number(r.final_fraction), o.config_hash});
  }
}

inline nlohmann::json summary_json(const RunOutcome& o) {
  const auto& s = o.summary;
  const auto& c = o.config;
  nlohmann::json j;
  j["scenario"] = c.name;
  j["config_hash"] = o.config_hash;
  nlohmann::json echo;
  echo["model"] = c.model;
  echo["params"] = c.params;
  echo["score"] = c.score.name;
  echo["schedule"] = c.score.schedule;
  echo["n_rep"] = c.n_rep;
  echo["M"] = c.samples;
  echo["seed"] = c.seed;
  echo["parallelism"] = c.parallelism;
  if (c.dt) echo["dt"] = *c.dt;
  if (c.horizon) echo["T"] = *c.horizon;
  if (c.t0) echo["t0"] = *c.t0;
  if (c.a) echo["a"] = *c.a;
  if (c.x0) echo["x0"] = *c.x0;
  j["config"] = echo;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["ci_low"] = s.ci_low;
  j["ci_high"] = s.ci_high;
  j["m"] = s.m;
  j["r_nonzero"] = s.r_nonzero;
  j["extinct_count"] = s.extinct_count;
  j["wall_time"] = s.wall_time;
  j["mean_level_product"] = o.level_summary.mean;
  if (o.reference_p) {
    j["reference"]["p"] = *o.reference_p;
    if (*o.reference_p > 0.0 && *o.reference_p < 1.0)
      j["reference"]["optimal_variance"] = optimal_variance_ref(*o.reference_p, c.n_rep);
  }
  if (o.exact_rate) j["reference"]["rate"] = *o.exact_rate;
  return j;
}

inline Table summary_table(const std::vector<RunOutcome>& outcomes) {
  Table t{"summary",
          {"scenario", "mean", "variance", "ci_low", "ci_high", "m", "r_nonzero", "extinct_count",
           "wall_time", "reference_p", "config_hash"},
          {}};
  for (const auto& o : outcomes) {
    const auto& s = o.summary;
    t.rows.push_back({o.config.name, format_number(s.mean), format_number(s.variance),
                      format_number(s.ci_low), format_number(s.ci_high), std::to_string(s.m),
                      format_number(s.r_nonzero), std::to_string(s.extinct_count),
                      format_number(s.wall_time), format_optional(o.reference_p), o.config_hash});
  }
  return t;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  return os;
}

/// Writes <out>/<name>.realizations.csv and <out>/<name>.summary.{json,csv}.
inline void write_outcome(const RunOutcome& o, const std::filesystem::path& out_dir,
                          const std::string& format) {
  {
    auto os = open_output(out_dir / (o.config.name + ".realizations.csv"));
    write_realizations_csv(os, o);
  }
  if (format == "csv") {
    auto os = open_output(out_dir / (o.config.name + ".summary.csv"));
    summary_table({o}).write(os);
  } else {
    auto os = open_output(out_dir / (o.config.name + ".summary.json"));
    os << summary_json(o).dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------------------------
// Tables

struct TableOptions {
  double scale = 1.0;                 // divides every sample size M (floored at 2)
  std::uint64_t seed = 1;
  std::size_t parallelism = 1;
  std::optional<std::size_t> n_rep;   // replaces the table's replica count
  std::vector<double> t_list;         // replaces the horizons of ou_avg
};

inline const std::vector<std::string>& table_ids() {
  static const std::vector<std::string> ids{"bm1", "bm2", "ou2", "ou4", "ou8", "dbm",
                                            "ou_avg", "lorenz", "periodic"};
  return ids;
}

namespace detail {

inline std::size_t scaled_samples(std::size_t m, double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(static_cast<double>(m) / scale)));
}

inline ExperimentConfig cell(const std::string& name, const std::string& model, ParamMap params,
                             const std::string& score, std::size_t n_rep, std::size_t m,
                             const TableOptions& opt) {
  ExperimentConfig c;
  c.name = name;
  c.model = model;
  c.params = std::move(params);
  c.score.name = score;
  c.n_rep = opt.n_rep.value_or(n_rep);
  c.samples = scaled_samples(m, opt.scale);
  c.seed = opt.seed;
  c.parallelism = opt.parallelism;
  return c;
}

inline std::string num(double v) { return format_number(v); }

inline std::string optimal_or_blank(double p, std::size_t n_rep) {
  return p > 0.0 && p < 1.0 ? num(optimal_variance_ref(p, n_rep)) : std::string();
}

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline Table brownian_table(const std::string& id, std::size_t n_rep, std::size_t m,
                            const TableOptions& opt) {
  Table t{id,
          {"beta", "p_hat", "p_dt0", "ci_low", "ci_high", "variance", "optimal_variance", "r_hat",
           "extinct_count", "wall_time", "config_hash"},
          {}};
  for (double beta : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    auto c = cell(id + "_beta" + short_number(beta), "brownian", {{"beta", beta}}, "new", n_rep, m, opt);
    const auto o = run_scenario(c);
    const auto& s = o.summary;
    t.rows.push_back({short_number(beta), num(s.mean), num(*o.reference_p), num(s.ci_low),
                      num(s.ci_high), num(s.variance),
                      optimal_or_blank(*o.reference_p, c.n_rep), num(s.r_nonzero),
                      std::to_string(s.extinct_count), num(s.wall_time), o.config_hash});
  }
  return t;
}

inline Table ou_table(const std::string& id, double horizon, const TableOptions& opt) {
  Table t{id,
          {"a", "p_new", "p_std", "p_dt0", "var_new", "var_std", "optimal_variance", "r_std",
           "p_max", "q_hat", "config_hash"},
          {}};
  for (double a : {2.8, 2.9, 3.0, 3.1, 3.2}) {
    auto c_new = cell(id + "_new_a" + short_number(a), "ou", {}, "new", 100, 10000, opt);
    c_new.horizon = horizon;
    c_new.a = a;
    auto c_std = c_new;
    c_std.name = id + "_std_a" + short_number(a);
    c_std.score.name = "std";
    const auto o_new = run_scenario(c_new);
    const auto o_std = run_scenario(c_std);
    const double p_max = o_std.level_summary.mean;
    t.rows.push_back({short_number(a), num(o_new.summary.mean), num(o_std.summary.mean),
                      num(*o_new.reference_p), num(o_new.summary.variance),
                      num(o_std.summary.variance), optimal_or_blank(*o_new.reference_p, c_new.n_rep),
                      num(o_std.summary.r_nonzero), num(p_max),
                      p_max > 0.0 ? num(o_new.summary.mean / p_max) : std::string(),
                      o_new.config_hash + "+" + o_std.config_hash});
  }
  return t;
}

inline Table drifted_table(const TableOptions& opt) {
  Table t{"dbm",
          {"beta", "p_new", "p_new_a", "p_std", "p", "var_new", "var_new_a", "var_std",
           "optimal_variance", "r_std", "config_hash"},
          {}};
  for (double beta : {1.0, 2.0, 3.0, 4.0}) {
    const ParamMap params{{"alpha", 4.0}, {"beta", beta}};
    const std::string b = short_number(beta);
    auto c_new = cell("dbm_new_beta" + b, "drifted_bm", params, "new", 1000, 40000, opt);
    auto c_new_a = cell("dbm_new_a_beta" + b, "drifted_bm", params, "new_schedule", 1000, 400000, opt);
    c_new_a.score.schedule = "linear";
    auto c_std = cell("dbm_std_beta" + b, "drifted_bm", params, "std", 1000, 40000, opt);
    const auto o_new = run_scenario(c_new);
    const auto o_new_a = run_scenario(c_new_a);
    const auto o_std = run_scenario(c_std);
    t.rows.push_back({b, num(o_new.summary.mean), num(o_new_a.summary.mean), num(o_std.summary.mean),
                      num(*o_new.reference_p), num(o_new.summary.variance),
                      num(o_new_a.summary.variance), num(o_std.summary.variance),
                      optimal_or_blank(*o_new.reference_p, c_new.n_rep), num(o_std.summary.r_nonzero),
                      o_new.config_hash + "+" + o_new_a.config_hash + "+" + o_std.config_hash});
  }
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Rate sweeps

struct RateCell {
  double a = 0.0;
  double horizon = 0.0;
  RunOutcome outcome;
  bool flagged = false;  // extinction observed or zero estimate: excluded from the fit
};

struct RateFitRow {
  double a = 0.0;
  std::optional<RateFit> fit;  // empty when fewer than two usable horizons remain
  std::optional<double> exact_rate;
  std::size_t points = 0;
};

struct RateReport {
  std::vector<RateCell> cells;
  std::vector<RateFitRow> fits;

  Table points_table() const {
    Table t{"rate_points",
            {"a", "T", "p_hat", "log_p_hat", "variance", "extinct_count", "flagged", "config_hash"},
            {}};
    for (const auto& c : cells) {
      const auto& s = c.outcome.summary;
      t.rows.push_back({detail::short_number(c.a), detail::short_number(c.horizon), format_number(s.mean),
                        s.mean > 0.0 ? format_number(std::log(s.mean)) : std::string(),
                        format_number(s.variance), std::to_string(s.extinct_count),
                        c.flagged ? "1" : "0", c.outcome.config_hash});
    }
    return t;
  }

  Table fits_table(const std::string& hash) const {
    Table t{"rate_fits", {"a", "i_hat", "intercept", "exact_rate", "points", "config_hash"}, {}};
    for (const auto& f : fits)
      t.rows.push_back({detail::short_number(f.a), f.fit ? format_number(f.fit->i_hat) : std::string(),
                        f.fit ? format_number(f.fit->intercept) : std::string(),
                        format_optional(f.exact_rate), std::to_string(f.points), hash});
    return t;
  }
};

/// For every a in base.a_list and T in base.t_list runs `base` at (a, T) and regresses
/// log p_hat on T per a. Cells with extinctions or a zero estimate are flagged and left out.
inline RateReport cmd_rate(const ExperimentConfig& base) {
  if (base.a_list.empty() || base.t_list.empty())
    throw ConfigError("rate sweep needs a_list and T_list");
  RateReport report;
  for (double a : base.a_list) {
    std::vector<std::pair<double, double>> points;
    std::optional<double> exact;
    for (double horizon : base.t_list) {
      ExperimentConfig c = base;
      c.mode = "single";
      c.a = a;
      c.horizon = horizon;
      c.a_list.clear();
      c.t_list.clear();
      c.name = base.name + "_a" + detail::short_number(a) + "_T" + detail::short_number(horizon);
      RateCell rc{a, horizon, run_scenario(c), false};
      rc.flagged = rc.outcome.summary.extinct_count > 0 || !(rc.outcome.summary.mean > 0.0);
      if (!rc.flagged) points.emplace_back(horizon, rc.outcome.summary.mean);
      exact = rc.outcome.exact_rate;
      report.cells.push_back(std::move(rc));
    }
    RateFitRow row{a, std::nullopt, exact, points.size()};
    if (points.size() >= 2) row.fit = rate_regression(points, a);
    report.fits.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------------------------
// Table sweeps that depend on rate fits

namespace detail {

inline Table ou_average_table(const TableOptions& opt) {
  const std::vector<double> horizons =
      opt.t_list.empty() ? std::vector<double>{25.0, 50.0, 100.0, 200.0} : opt.t_list;
  Table t{"ou_avg", {"a"}, {}};
  for (double h : horizons) {
    t.header.push_back("p_T" + short_number(h));
    t.header.push_back("var_T" + short_number(h));
  }
  for (const char* col : {"i_hat", "exact_rate", "config_hash"}) t.header.emplace_back(col);

  ExperimentConfig base = cell("ou_avg", "ou_average", {}, "new", 1000, 100, opt);
  base.a_list = {0.4, 0.6, 0.8, 1.0, 1.2};
  base.t_list = horizons;
  const RateReport report = cmd_rate(base);
  std::size_t k = 0;
  for (const auto& fit : report.fits) {
    std::vector<std::string> row{short_number(fit.a)};
    std::string hashes;
    for (std::size_t i = 0; i < horizons.size(); ++i, ++k) {
      const auto& c = report.cells[k];
      row.push_back(num(c.outcome.summary.mean));
      row.push_back(num(c.outcome.summary.variance));
      hashes += (i ? "+" : "") + c.outcome.config_hash;
    }
    row.push_back(fit.fit ? num(fit.fit->i_hat) : std::string());
    row.push_back(format_optional(fit.exact_rate));
    row.push_back(hashes);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table lorenz_table(const TableOptions& opt) {
  Table t{"lorenz",
          {"T", "p_hat", "ci_low", "ci_high", "variance", "optimal_variance_hat", "r_hat",
           "wall_time", "config_hash"},
          {}};
  for (double horizon : {5.0, 10.0, 15.0, 20.0}) {
    auto c = cell("lorenz_T" + short_number(horizon), "lorenz", {}, "new", 1000, 10000, opt);
    c.horizon = horizon;
    const auto o = run_scenario(c);
    const auto& s = o.summary;
    t.rows.push_back({short_number(horizon), num(s.mean), num(s.ci_low), num(s.ci_high),
                      num(s.variance), optimal_or_blank(s.mean, c.n_rep), num(s.r_nonzero),
                      num(s.wall_time), o.config_hash});
  }
  return t;
}

struct PeriodicRow {
  double a;
  double horizon;
  std::size_t n_rep;
};

inline Table periodic_table(const TableOptions& opt) {
  Table t{"periodic",
          {"a", "T", "n_rep", "p_X", "p_Y", "var_X", "var_Y", "optimal_variance_Y", "eff_Y_over_X",
           "i_hat", "config_hash"},
          {}};
  const std::vector<PeriodicRow> rows{{0.8, 100.0, 100},  {0.8, 200.0, 100},  {1.0, 50.0, 1000},
                                      {1.0, 100.0, 1000}, {1.25, 50.0, 1000}, {1.25, 100.0, 1000}};
  std::vector<std::pair<double, double>> fit_points;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string tag = "_a" + short_number(r.a) + "_T" + short_number(r.horizon);
    auto cx = cell("periodic_X" + tag, "periodic_drift", {{"ratio", 0.0}}, "new", r.n_rep, 100, opt);
    cx.a = r.a;
    cx.horizon = r.horizon;
    auto cy = cx;
    cy.name = "periodic_Y" + tag;
    cy.params["ratio"] = 1.0;
    const auto ox = run_scenario(cx);
    const auto oy = run_scenario(cy);
    const auto& sx = ox.summary;
    const auto& sy = oy.summary;
    std::string eff;
    if (sx.variance > 0.0 && sy.variance > 0.0) eff = num(efficiency_ratio(sx, sy));
    if (sy.mean > 0.0 && sy.extinct_count == 0) fit_points.emplace_back(r.horizon, sy.mean);
    std::string i_hat;
    const bool last_of_a = i + 1 == rows.size() || rows[i + 1].a != r.a;
    if (last_of_a) {
      if (fit_points.size() >= 2) i_hat = num(rate_regression(fit_points, r.a).i_hat);
      fit_points.clear();
    }
    t.rows.push_back({short_number(r.a), short_number(r.horizon), std::to_string(cx.n_rep),
                      num(sx.mean), num(sy.mean), num(sx.variance), num(sy.variance),
                      optimal_or_blank(sy.mean, cy.n_rep), eff, i_hat,
                      ox.config_hash + "+" + oy.config_hash});
  }
  return t;
}

}  // namespace detail

/// Runs one of the reference sweeps (see table_ids()).
inline Table cmd_table(const std::string& id, const TableOptions& opt = {}) {
  if (id == "bm1") return detail::brownian_table(id, 100, 10000, opt);
  if (id == "bm2") return detail::brownian_table(id, 1000, 1000, opt);
  if (id == "ou2") return detail::ou_table(id, 2.0, opt);
  if (id == "ou4") return detail::ou_table(id, 4.0, opt);
  if (id == "ou8") return detail::ou_table(id, 8.0, opt);
  if (id == "dbm") return detail::drifted_table(opt);
  if (id == "ou_avg") return detail::ou_average_table(opt);
  if (id == "lorenz") return detail::lorenz_table(opt);
  if (id == "periodic") return detail::periodic_table(opt);
  throw ConfigError("unknown table id '" + id + "'");
}

// ---------------------------------------------------------------------------------------------
// Validation suite

struct ValidateOptions {
  std::uint64_t seed = 1;
  // Adds a score that is identically 0 with xi_max = 1; its admissibility check must fail.
  bool inject_broken_score = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

struct ConstantScore {
  double value = 0.0;
  double level = 1.0;
  double operator()(std::size_t, double, std::span<const double>) const { return value; }
  double xi_max() const noexcept { return level; }
};

inline bool within(double value, double target, double tolerance) {
  return std::abs(value - target) <= tolerance;
}

// |x - ref| at most half a unit of the third significant digit of ref.
inline bool same_three_digits(double x, double ref) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(ref))) - 2.0);
  return std::abs(x - ref) <= 0.5 * unit;
}

}  // namespace detail

/// Quick self-checks: score admissibility, unbiasedness on an exactly solvable random walk,
/// exact Gaussian laws of the Euler chains and the closed-form reference probabilities.
inline std::vector<CheckResult> cmd_validate(const ValidateOptions& opt = {}) {
  std::vector<CheckResult> checks;
  Stream rng(opt.seed, 0xa11);

  // Admissibility on sampled terminal states above the threshold.
  {
    const auto bm = std::get<BrownianScenario>(builtin_model("brownian", {{"beta", 2.0}}));
    std::vector<std::vector<double>> samples;
    for (int i = 0; i < 200; ++i) {
      const double mag = bm.obs.threshold + 1e-9 + std::abs(rng.normal());
      samples.push_back({i % 2 ? mag : -mag});
    }
    const auto& g = bm.grid;
    checks.push_back({"admissibility: std (brownian)",
                      validate_admissibility(score_std(bm.obs), bm.obs, g, samples), ""});
    checks.push_back({"admissibility: new (brownian)",
                      validate_admissibility(score_new(bm.obs, g), bm.obs, g, samples), ""});
    checks.push_back({"admissibility: committor_bm (brownian)",
                      validate_admissibility(score_committor_bm(bm.obs, g, 2.0), bm.obs, g, samples), ""});

    const auto lz = std::get<LorenzScenario>(builtin_model("lorenz", {}));
    std::vector<std::vector<double>> lz_samples;
    const auto center = lz.model.equilibrium();
    while (lz_samples.size() < 200) {
      std::vector<double> x{center[0] + 40.0 * rng.normal(), center[1] + 40.0 * rng.normal(),
                            center[2] + 40.0 * rng.normal()};
      if (lz.obs.exceeds(x)) lz_samples.push_back(std::move(x));
    }
    const auto sched = ThresholdSchedule::linear_ramp(lz.obs.threshold, lz.grid.horizon());
    checks.push_back({"admissibility: new_schedule linear (lorenz)",
                      validate_admissibility(score_new_schedule(lz.obs, lz.grid, sched), lz.obs,
                                             lz.grid, lz_samples),
                      ""});
    if (opt.inject_broken_score)
      checks.push_back({"admissibility: injected constant score",
                        validate_admissibility(detail::ConstantScore{0.0, 1.0}, bm.obs, g, samples),
                        "xi = 0 with xi_max = 1"});
  }

  // Unbiasedness: two-step +-1 walk from 0, P(X_2 > 1.5) = 1/4.
  {
    const auto walk = std::get<RandomWalkScenario>(builtin_model("random_walk", {}));
    constexpr std::size_t kRuns = 20000;
    for (std::size_t n_rep : {2, 5, 10}) {
      for (const std::string name : {"std", "new"}) {
        AmsConfig ac;
        ac.n_rep = n_rep;
        ac.seed = opt.seed * 1000 + n_rep;
        const auto results = with_score(walk, ScoreSpec{name}, [&](const auto& xi) {
          return run_many(walk.model, walk.grid, xi, walk.obs, ac, kRuns, 1);
        });
        const auto s = aggregate(results);
        const double se = s.standard_error();
        char detail[96];
        std::snprintf(detail, sizeof detail, "mean %.5f, 4 SE = %.5f", s.mean, 4 * se);
        checks.push_back({"unbiased random walk: " + name + ", n_rep=" + std::to_string(n_rep),
                          detail::within(s.mean, 0.25, 4.0 * se), detail});
      }
    }
  }

  // Euler chains of the Gaussian models: mean and variance of X_N.
  {
    constexpr std::size_t kPaths = 20000;
    auto gaussian_check = [&](const std::string& label, const auto& model, const GridSpec& grid,
                              double mean, double var) {
      double sum = 0.0;
      double sum2 = 0.0;
      for (std::size_t i = 0; i < kPaths; ++i) {
        const Path p = simulate_path(model, grid, rng);
        const double x = p.final_state()[0];
        sum += x;
        sum2 += x * x;
      }
      const double n = static_cast<double>(kPaths);
      const double m = sum / n;
      const double v = (sum2 - n * m * m) / (n - 1.0);
      const bool ok = detail::within(m, mean, 4.0 * std::sqrt(var / n)) &&
                      detail::within(v, var, 4.0 * var * std::sqrt(2.0 / (n - 1.0)));
      char detail[128];
      std::snprintf(detail, sizeof detail, "mean %.4f (exact %.4f), variance %.4f (exact %.4f)", m,
                    mean, v, var);
      checks.push_back({"gaussian law: " + label, ok, detail});
    };
    BrownianSde bm;
    bm.beta = 2.0;
    gaussian_check("brownian beta=2", bm,
                   GridSpec::from_horizon(1e-2, 1.0, {0.1}), 0.1, 1.0);
    const double dt = 1e-2;
    const std::size_t steps = 200;
    const double rho = 1.0 - dt;
    gaussian_check("ou T=2", OrnsteinUhlenbeckSde{}, GridSpec::from_horizon(dt, 2.0, {1.0}),
                   std::pow(rho, steps), dt * (1.0 - std::pow(rho, 2 * steps)) / (1.0 - rho * rho));
    DriftedBrownianSde dbm;
    dbm.alpha = 4.0;
    dbm.beta = 1.0;
    gaussian_check("drifted_bm beta=1", dbm,
                   GridSpec::from_horizon(dt, 1.0, {0.0}), -4.0, 2.0);
  }

  // Closed forms against the reference table columns.
  {
    struct Ref {
      const char* label;
      double value;
      double reference;
    };
    using namespace analytic;
    const std::vector<Ref> refs{
        {"brownian beta=2", analytic_p_brownian(2, 0.1, 1, 1), 3.197e-1},
        {"brownian beta=4", analytic_p_brownian(4, 0.1, 1, 1), 1.614e-1},
        {"brownian beta=8", analytic_p_brownian(8, 0.1, 1, 1), 4.983e-2},
        {"brownian beta=16", analytic_p_brownian(16, 0.1, 1, 1), 6.386e-3},
        {"brownian beta=32", analytic_p_brownian(32, 0.1, 1, 1), 1.645e-4},
        {"brownian beta=64", analytic_p_brownian(64, 0.1, 1, 1), 1.782e-7},
        {"brownian beta=128", analytic_p_brownian(128, 0.1, 1, 1), 3.011e-13},
        {"ou T=2 a=2.8", analytic_p_ou(2, 2.8), 3.213e-5},
        {"ou T=2 a=3.0", analytic_p_ou(2, 3.0), 9.260e-6},
        {"ou T=4 a=3.2", analytic_p_ou(4, 3.2), 3.002e-6},
        {"ou T=8 a=2.8", analytic_p_ou(8, 2.8), 3.751e-5},
        {"drifted_bm beta=1", analytic_p_drifted_bm(4, 1, 1, 1), 2.035e-4},
        {"drifted_bm beta=4", analytic_p_drifted_bm(4, 4, 1, 1), 7.687e-13},
    };
    for (const auto& r : refs) {
      char detail[80];
      std::snprintf(detail, sizeof detail, "%.4e vs %.4e", r.value, r.reference);
      checks.push_back({std::string("closed form: ") + r.label,
                        detail::same_three_digits(r.value, r.reference), detail});
    }
  }
  return checks;
}

}  // namespace ams
