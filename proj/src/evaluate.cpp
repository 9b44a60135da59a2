#include "evdag/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace evdag {

MetricReport metrics(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  const int p = static_cast<int>(truth.rows());
  if (truth.cols() != p || estimate.rows() != p || estimate.cols() != p)
    throw ConfigError("metrics: matrices must be square and of equal size");
  double true_edges = 0.0, est_mass = 0.0, hd = 0.0, missed = 0.0, false_mass = 0.0,
         flipped = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      double t = truth(i, j);
      double e = estimate(i, j);
      if (i == j) {
        if (t != 0.0 || e != 0.0) throw ConfigError("metrics: diagonal must be zero");
        continue;
      }
      if (t != 0.0 && t != 1.0) throw ConfigError("metrics: truth must be 0/1");
      if (e < 0.0 || e > 1.0) throw ConfigError("metrics: estimate entries must lie in [0, 1]");
      hd += std::abs(t - e);
      true_edges += t;
      est_mass += e;
      missed += t * (1.0 - e);
      false_mass += (1.0 - t) * e;
      flipped += truth(j, i) * e;
    }
  MetricReport r;
  r.hd = hd;
  r.degenerate = true_edges == 0.0;
  r.fnr = r.degenerate ? 0.0 : 100.0 * missed / true_edges;
  r.flip = r.degenerate ? 0.0 : 100.0 * flipped / true_edges;
  r.fdr = est_mass == 0.0 ? 0.0 : 100.0 * false_mass / est_mass;
  return r;
}

double psrf(const std::vector<std::vector<double>>& chains) {
  const int m = static_cast<int>(chains.size());
  if (m < 2) throw ConfigError("psrf: need at least 2 chains");
  const std::size_t t = chains[0].size();
  if (t < 2) throw ConfigError("psrf: need chains of length >= 2");
  for (const auto& c : chains)
    if (c.size() != t) throw ConfigError("psrf: chains must have equal length");

  std::vector<double> means(m);
  double w = 0.0;
  for (int i = 0; i < m; ++i) {
    double mean = std::accumulate(chains[i].begin(), chains[i].end(), 0.0) / t;
    means[i] = mean;
    double ss = 0.0;
    for (double v : chains[i]) ss += (v - mean) * (v - mean);
    w += ss / static_cast<double>(t - 1);
  }
  w /= m;
  double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double between = 0.0;  // B/T: variance of the chain means
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between /= (m - 1);

  if (w == 0.0) return between == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  double tt = static_cast<double>(t);
  double vhat = (tt - 1.0) / tt * w + (1.0 + 1.0 / m) * between;
  return std::sqrt(vhat / w);
}

GelmanRubinReport gelman_rubin(const std::vector<std::vector<Dag>>& chain_samples, int p) {
  const int m = static_cast<int>(chain_samples.size());
  if (m < 2) throw ConfigError("gelman_rubin: need at least 2 chains");
  GelmanRubinReport rep;
  rep.psrf = Eigen::MatrixXd::Zero(p, p);
  std::vector<std::vector<double>> streams(m);
  int offdiag = 0, below = 0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      for (int c = 0; c < m; ++c) {
        streams[c].clear();
        streams[c].reserve(chain_samples[c].size());
        for (const Dag& g : chain_samples[c]) streams[c].push_back(g.has_edge(i, j) ? 1.0 : 0.0);
      }
      double r = psrf(streams);
      rep.psrf(i, j) = r;
      ++offdiag;
      if (std::isinf(r)) ++rep.infinite_count;
      if (r <= 1.1) ++below;
      rep.max_psrf = std::max(rep.max_psrf, r);
    }
  rep.frac_below_1p1 = offdiag > 0 ? static_cast<double>(below) / offdiag : 0.0;
  return rep;
}

namespace {

struct OrderBest {
  double phi = -std::numeric_limits<double>::infinity();
  Dag dag;
  bool have = false;
};

// Enumerates parent-set choices for each position and keeps the best DAG.
// rss_table[j][mask] is the residual of j on the set encoded by mask, or NaN
// where degenerate. Ties on the score prefer the lexicographically smallest
// sorted edge list.
void enumerate_orders(const ScoreModel& m, const std::vector<std::vector<double>>& rss_table,
                      const std::vector<int>& perm, OrderBest& best) {
  const int p = static_cast<int>(perm.size());
  std::vector<std::uint32_t> masks(p, 0);  // chosen parent mask per position
  // Depth-first product enumeration carrying the running residual vector.
  Eigen::VectorXd rss_vec(p);
  std::function<void(int, int)> rec = [&](int posn, int edges) {
    if (posn == p) {
      double ph = phi(m, edges, rss_vec);
      if (ph > best.phi) {
        best.phi = ph;
        best.have = true;
        best.dag = Dag(p);
        for (int k = 0; k < p; ++k)
          for (int b = 0; b < p; ++b)
            if (masks[k] & (1u << b)) best.dag.add_edge(b, perm[k]);
      } else if (best.have && ph == best.phi) {
        Dag cand(p);
        for (int k = 0; k < p; ++k)
          for (int b = 0; b < p; ++b)
            if (masks[k] & (1u << b)) cand.add_edge(b, perm[k]);
        if (cand.edges() < best.dag.edges()) best.dag = std::move(cand);
      }
      return;
    }
    int node = perm[posn];
    std::uint32_t pred = 0;
    for (int k = 0; k < posn; ++k) pred |= 1u << perm[k];
    // Iterate submasks of pred, including the empty set.
    std::uint32_t sub = pred;
    for (;;) {
      int sz = __builtin_popcount(sub);
      if (sz <= m.d_in) {
        double r = rss_table[node][sub];
        if (!std::isnan(r)) {
          masks[posn] = sub;
          rss_vec[node] = r;
          rec(posn + 1, edges + sz);
        }
      }
      if (sub == 0) break;
      sub = (sub - 1) & pred;
    }
  };
  rec(0, 0);
}

}  // namespace

ExactPosterior exact_posterior(const DataMatrix& d, const Hyperparams& h, ScoreKind kind) {
  const int p = d.p();
  if (p > 6) throw ConfigError("exact_posterior: limited to p <= 6 (got p = " +
                               std::to_string(p) + ")");
  ScoreModel m = make_score_model(h, d.n(), p, kind);

  // All residuals up front, indexed by parent bitmask.
  std::vector<std::vector<double>> rss_table(p, std::vector<double>(1u << p,
      std::numeric_limits<double>::quiet_NaN()));
  std::vector<int> set;
  for (int j = 0; j < p; ++j) {
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
      if (mask & (1u << j)) continue;
      if (__builtin_popcount(mask) > m.d_in) continue;
      set.clear();
      for (int b = 0; b < p; ++b)
        if (mask & (1u << b)) set.push_back(b);
      try {
        rss_table[j][mask] = rss(d, j, set);
      } catch (const DegenerateDesignError&) {
        // left NaN; choices through this set are unavailable
      }
    }
  }

  ExactPosterior out;
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> log_weights;
  do {
    OrderBest best;
    enumerate_orders(m, rss_table, perm, best);
    if (!best.have)
      throw DegenerateDesignError("exact_posterior: no admissible DAG for an ordering", -1, {});
    out.orders.push_back(perm);
    out.map_dags.push_back(std::move(best.dag));
    log_weights.push_back(best.phi);
  } while (std::next_permutation(perm.begin(), perm.end()));

  double mx = *std::max_element(log_weights.begin(), log_weights.end());
  double z = 0.0;
  for (double lw : log_weights) z += std::exp(lw - mx);
  out.order_probs.resize(log_weights.size());
  for (std::size_t i = 0; i < log_weights.size(); ++i)
    out.order_probs[i] = std::exp(log_weights[i] - mx) / z;

  // Group orderings sharing a best DAG.
  std::map<std::vector<std::pair<int, int>>, double> grouped;
  for (std::size_t i = 0; i < out.map_dags.size(); ++i)
    grouped[out.map_dags[i].edges()] += out.order_probs[i];
  for (const auto& [edges, prob] : grouped) {
    Dag g(p);
    for (const auto& [a, b] : edges) g.add_edge(a, b);
    out.dag_probs.emplace_back(std::move(g), prob);
  }
  std::sort(out.dag_probs.begin(), out.dag_probs.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first.edges() < b.first.edges();
            });
  return out;
}

}  // namespace evdag
