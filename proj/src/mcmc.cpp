#include "evdag/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace evdag {

long resolve_burn_in(const ChainConfig& cfg) {
  long b = cfg.burn_in >= 0 ? cfg.burn_in : cfg.iterations / 2;
  if (b > cfg.iterations)
    throw ConfigError("burn_in exceeds iteration count");
  return b;
}

Eigen::MatrixXd rb_matrix(const ScoreModel& m, SelectionCache& cache, const Ordering& sigma,
                          const Dag& dag, const ScoreState& state, long* skipped) {
  const int p = dag.p();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  std::vector<int> with_set, without_set;
  for (int j = 0; j < p; ++j) {
    const auto& pa = dag.parents[j];
    for (int i = 0; i < p; ++i) {
      if (i == j || sigma.pos[i] >= sigma.pos[j]) continue;
      bool present = std::binary_search(pa.begin(), pa.end(), i);
      with_set.assign(pa.begin(), pa.end());
      if (!present)
        with_set.insert(std::lower_bound(with_set.begin(), with_set.end(), i), i);
      without_set.clear();
      for (int v : pa)
        if (v != i) without_set.push_back(v);
      double rss_with, rss_without;
      try {
        rss_with = cache.rss(j, with_set);
        rss_without = cache.rss(j, without_set);
      } catch (const DegenerateDesignError&) {
        if (skipped) ++*skipped;
        continue;
      }
      double phi_with = phi_substituted(m, state, j, rss_with, present ? 0 : 1);
      double phi_without = phi_substituted(m, state, j, rss_without, present ? -1 : 0);
      double delta = phi_with - phi_without;
      double prob = delta >= 0.0 ? 1.0 / (1.0 + std::exp(-delta))
                                 : std::exp(delta) / (1.0 + std::exp(delta));
      out(i, j) = prob;
    }
  }
  return out;
}

ChainOutput run_chain(const DataMatrix& data, const Hyperparams& h, const ChainConfig& cfg) {
  const int p = data.p();
  if (cfg.iterations < 0) throw ConfigError("iterations must be >= 0");
  const long burn_in = resolve_burn_in(cfg);
  ScoreModel model = make_score_model(h, data.n(), p, cfg.score);
  SelectionCache cache(data);
  Philox rng(cfg.seed);

  Ordering sigma;
  switch (cfg.init) {
    case ChainConfig::Init::itd:
      sigma = iterative_topdown(model, cache, cfg.max_outer).ordering;
      break;
    case ChainConfig::Init::random:
      sigma = random_ordering(p, rng);
      break;
    case ChainConfig::Init::given:
      sigma = Ordering::from_perm(cfg.given_order);
      if (sigma.size() != p) throw ConfigError("given ordering has wrong length");
      break;
  }

  ChainOutput out;
  out.initial_ordering = sigma;
  MapResult cur = map_dag(model, cache, sigma);
  Eigen::MatrixXd pip_accum = Eigen::MatrixXd::Zero(p, p);
  long post_count = 0, cum = 0;
  out.trace.reserve(cfg.iterations);
  PathJournal journal;

  for (long t = 1; t <= cfg.iterations; ++t) {
    if (cfg.effective_budget > 0 && cum >= cfg.effective_budget) break;
    Move move = sample_move(p, cfg.neighborhood, rng);
    MapResult prop = update_after_move(model, cache, sigma, move, &journal);
    const int count = prop.nodewise_count;
    cum += count;
    double log_u = std::log(rng.uniform_pos());
    bool accepted = prop.log_score >= cur.log_score ||
                    log_u < prop.log_score - cur.log_score;
    if (accepted) {
      cur = std::move(prop);
    } else {
      undo_move(cache, sigma, journal);
    }
    if (t > burn_in) {
      pip_accum += rb_matrix(model, cache, sigma, cur.dag, cur.state, &out.rb_skipped);
      ++post_count;
      if (cfg.thin > 0 && (t - burn_in) % cfg.thin == 0) out.samples.push_back({t, cur.dag});
    }
    out.trace.push_back({t, cur.log_score, accepted, count, cum});
  }

  out.pip = post_count > 0 ? Eigen::MatrixXd(pip_accum / static_cast<double>(post_count))
                           : Eigen::MatrixXd::Zero(p, p);
  out.final_ordering = sigma;
  out.final_dag = std::move(cur.dag);
  out.final_log_score = cur.log_score;
  out.effective_iterations = cum;
  if (out.rb_skipped > 0)
    log_warn("run_chain: " + std::to_string(out.rb_skipped) +
             " edge-probability entries zeroed by degenerate solves");
  return out;
}

MultiChainRun run_multichain(const DataMatrix& data, const Hyperparams& h,
                             const ChainConfig& cfg, int n_chains, int jobs) {
  if (n_chains < 1) throw ConfigError("n_chains must be >= 1");
  MultiChainRun run;
  run.outputs.resize(n_chains);
  std::mutex mu;
  std::atomic<int> next{0};
  int workers = std::max(1, std::min(jobs, n_chains));
  auto work = [&]() {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= n_chains) return;
      ChainConfig sub = cfg;
      sub.seed = cfg.seed + static_cast<std::uint64_t>(c);
      try {
        ChainOutput o = run_chain(data, h, sub);
        std::lock_guard<std::mutex> lk(mu);
        run.outputs[c] = std::move(o);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(mu);
        run.failures.emplace_back(c, e.what());
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& th : threads) th.join();
  }
  std::sort(run.failures.begin(), run.failures.end());
  return run;
}

}  // namespace evdag
