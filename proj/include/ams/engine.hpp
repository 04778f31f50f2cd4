#pragma once

#include <ams/error.hpp>
#include <ams/models.hpp>
#include <ams/rng.hpp>
#include <ams/score.hpp>
#include <ams/sde.hpp>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ams {

struct AmsConfig {
  std::size_t n_rep = 100;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 10'000'000;
  // Keep one IterationRecord per splitting step (with a copy of all scores).
  bool record_trace = false;
  // Re-score every replica at each rest point and check the kill set. Slow; for tests.
  bool check_invariants = false;
};

struct IterationRecord {
  double level = 0.0;           // Z at the start of the iteration
  std::size_t killed = 0;       // card(K)
  double factor = 1.0;          // 1 - card(K) / n_rep
  std::vector<double> scores;   // all replica scores when Z was computed
};

struct AmsResult {
  double p_hat = 1.0;
  std::size_t q_iter = 0;
  bool extinct = false;
  std::size_t killed_total = 0;
  double final_fraction = 1.0;
  // Product of the per-iteration factors, i.e. p_hat before the final update. With the
  // vanilla score this estimates P(max_n Phi(X_n) > a).
  double level_product = 1.0;
  // Level reached when the loop stopped.
  double final_level = 0.0;
  std::vector<IterationRecord> trace;
};

namespace detail {

// Ensemble of n_rep trajectories stored back to back in one buffer.
class Ensemble {
public:
  Ensemble(std::size_t n_rep, std::size_t dim, const GridSpec& grid)
      : n_rep_(n_rep), dim_(dim), n0_(grid.n0), stride_(grid.length() * dim),
        data_(n_rep * stride_) {}

  std::span<double> states(std::size_t j) { return std::span<double>(data_).subspan(j * stride_, stride_); }
  PathView view(std::size_t j) const {
    return PathView(std::span<const double>(data_).subspan(j * stride_, stride_), dim_, n0_);
  }
  std::span<const double> final_state(std::size_t j) const {
    return std::span<const double>(data_).subspan(j * stride_ + stride_ - dim_, dim_);
  }
  // Copies states n0..m of replica `from` onto replica `to`.
  void copy_prefix(std::size_t from, std::size_t to, std::size_t m) {
    const std::size_t count = (m - n0_ + 1) * dim_;
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(from * stride_), count,
                data_.begin() + static_cast<std::ptrdiff_t>(to * stride_));
  }
  std::size_t size() const noexcept { return n_rep_; }

private:
  std::size_t n_rep_;
  std::size_t dim_;
  std::size_t n0_;
  std::size_t stride_;
  std::vector<double> data_;
};

template <ScoreFunction Score>
double tail_score(PathView path, const Score& xi, std::size_t from, double dt, double start) {
  double best = start;
  for (std::size_t m = from; m <= path.last_index(); ++m)
    best = std::max(best, static_cast<double>(xi(m, static_cast<double>(m) * dt, path.state(m))));
  return best;
}

}  // namespace detail

/// One realization of adaptive multilevel splitting for P(Phi(X_N) > a).
///
/// The ensemble is repeatedly cut at the minimum score Z: every replica whose score equals Z
/// (ties are frequent in discrete time because resampled replicas share copied prefixes) is
/// replaced by a copy of a uniformly drawn survivor up to its first index with score > Z,
/// continued with fresh noise. The estimator is multiplied by 1 - card(K)/n_rep per iteration.
/// The loop ends once Z >= xi_max or all replicas tie (extinction); the final update then
/// multiplies by the fraction of replicas with Phi(X_N) >= a.
template <MarkovModel Model, ScoreFunction Score, class Phi>
AmsResult ams_run(const Model& model, const GridSpec& grid, const Score& xi,
                  const Observable<Phi>& obs, const AmsConfig& cfg, Stream& rng) {
  if (cfg.n_rep < 2) throw ConfigError("ams_run: n_rep must be at least 2");
  grid.validate(model.dim());

  const std::size_t n_rep = cfg.n_rep;
  const double dt = grid.dt;
  const double xi_max = xi.xi_max();
  detail::Ensemble ensemble(n_rep, model.dim(), grid);
  std::vector<double> scores(n_rep);

  for (std::size_t j = 0; j < n_rep; ++j) {
    auto states = ensemble.states(j);
    std::copy(grid.x0.begin(), grid.x0.end(), states.begin());
    continue_path(model, grid, states, grid.n0, rng);
    scores[j] = path_score(ensemble.view(j), xi, dt);
  }

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t j = 0; j < n_rep; ++j) heap.emplace(scores[j], j);

  std::vector<std::size_t> killed;
  std::vector<std::size_t> labels;
  double level = 0.0;

  auto compute_level = [&] {
    level = heap.top().first;
    killed.clear();
    while (!heap.empty() && heap.top().first == level) {
      killed.push_back(heap.top().second);
      heap.pop();
    }
    std::sort(killed.begin(), killed.end());
  };

  auto check_rest_point = [&] {
    for (std::size_t j = 0; j < n_rep; ++j)
      if (path_score(ensemble.view(j), xi, dt) != scores[j])
        throw LogicError("ams_run: cached score differs from the path score of replica " +
                         std::to_string(j));
    std::size_t k = 0;
    for (std::size_t j = 0; j < n_rep; ++j) {
      const bool in_k = k < killed.size() && killed[k] == j;
      if (in_k) ++k;
      if (in_k ? scores[j] != level : !(scores[j] > level))
        throw LogicError("ams_run: kill set does not match the level");
    }
  };

  AmsResult result;
  compute_level();
  if (cfg.check_invariants) check_rest_point();

  while (!(level >= xi_max) && killed.size() != n_rep) {
    if (result.q_iter >= cfg.max_iterations)
      throw IterationGuardError("ams_run: exceeded " + std::to_string(cfg.max_iterations) +
                                " iterations; is the score function admissible?");
    const std::size_t k = killed.size();
    const double factor = 1.0 - static_cast<double>(k) / static_cast<double>(n_rep);
    ++result.q_iter;
    result.killed_total += k;
    result.p_hat *= factor;
    if (cfg.record_trace) result.trace.push_back({level, k, factor, scores});

    // Labels are uniform over the n_rep - k survivors; the r-th survivor is found by skipping
    // the (sorted) killed indices.
    const std::size_t survivors = n_rep - k;
    labels.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t idx = rng.index_below(survivors);
      for (std::size_t dead : killed) {
        if (dead <= idx) ++idx;
        else break;
      }
      labels[i] = idx;
    }

    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = killed[i];
      const std::size_t parent = labels[i];
      const std::size_t m = first_crossing_index(ensemble.view(parent), xi, level, dt);
      ensemble.copy_prefix(parent, j, m);
      continue_path(model, grid, ensemble.states(j), m, rng);
      const PathView path = ensemble.view(j);
      const double at_crossing = xi(m, static_cast<double>(m) * dt, path.state(m));
      scores[j] = detail::tail_score(path, xi, m + 1, dt, at_crossing);
      heap.emplace(scores[j], j);
    }

    compute_level();
    if (cfg.check_invariants) check_rest_point();
  }

  result.level_product = result.p_hat;
  result.final_level = level;
  result.extinct = !(level >= xi_max);

  std::size_t hits = 0;
  for (std::size_t j = 0; j < n_rep; ++j)
    if (obs.phi(ensemble.final_state(j)) >= obs.threshold) ++hits;
  result.final_fraction = static_cast<double>(hits) / static_cast<double>(n_rep);
  result.p_hat *= result.final_fraction;
  return result;
}

/// Failures of individual realizations inside run_many.
class BatchError : public Error {
public:
  explicit BatchError(std::vector<std::pair<std::size_t, std::string>> failures)
      : Error(describe(failures)), failures_(std::move(failures)) {}

  const std::vector<std::pair<std::size_t, std::string>>& failures() const noexcept {
    return failures_;
  }

private:
  static std::string describe(const std::vector<std::pair<std::size_t, std::string>>& f) {
    std::string s = std::to_string(f.size()) + " realization(s) failed:";
    for (const auto& [i, msg] : f) s += "\n  realization " + std::to_string(i) + ": " + msg;
    return s;
  }
  std::vector<std::pair<std::size_t, std::string>> failures_;
};

/// M independent realizations; realization i uses Stream::derive(cfg.seed, i), so the output
/// (ordered by i) does not depend on `parallelism`.
template <MarkovModel Model, ScoreFunction Score, class Phi>
std::vector<AmsResult> run_many(const Model& model, const GridSpec& grid, const Score& xi,
                                const Observable<Phi>& obs, const AmsConfig& cfg, std::size_t m,
                                std::size_t parallelism = 1) {
  if (m == 0) throw ConfigError("run_many: need at least one realization");
  std::vector<AmsResult> results(m);
  std::vector<std::pair<std::size_t, std::string>> failures;
  std::mutex failures_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < m; i = next++) {
      try {
        Stream rng = Stream::derive(cfg.seed, i);
        results[i] = ams_run(model, grid, xi, obs, cfg, rng);
      } catch (const std::exception& e) {
        std::lock_guard lock(failures_mutex);
        failures.emplace_back(i, e.what());
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, m);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    throw BatchError(std::move(failures));
  }
  return results;
}

}  // namespace ams
