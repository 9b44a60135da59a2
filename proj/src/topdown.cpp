#include "evdag/topdown.hpp"

#include <algorithm>

namespace evdag {

namespace {

// Literal argmax over subsets of `potential` with |S| <= d_in; tie broken
// toward the set visited first in mask order (smallest members first).
std::vector<int> exhaustive_select(const ScoreModel& m, SelectionCache& cache, int node,
                                   const std::vector<int>& potential, double rss_rest) {
  const int q = static_cast<int>(potential.size());
  if (q > 20) throw ConfigError("exhaustive selection limited to 20 candidates");
  std::vector<int> best;
  double best_phi = 0.0;
  bool have = false;
  std::vector<int> set;
  for (std::uint32_t mask = 0; mask < (1u << q); ++mask) {
    if (__builtin_popcount(mask) > m.d_in) continue;
    set.clear();
    for (int b = 0; b < q; ++b)
      if (mask & (1u << b)) set.push_back(potential[b]);
    double r;
    try {
      r = cache.rss(node, set);
    } catch (const DegenerateDesignError&) {
      ++cache.degenerate_skips;
      continue;
    }
    double ph = phi_nodewise(m, static_cast<int>(set.size()), r, rss_rest);
    if (!have || ph > best_phi) {
      best_phi = ph;
      best = set;
      have = true;
    }
  }
  return best;
}

int argmin_unplaced(const Eigen::VectorXd& rss, const std::vector<char>& placed) {
  int best = -1;
  for (int j = 0; j < rss.size(); ++j) {
    if (placed[j]) continue;
    if (best < 0 || rss[j] < rss[best]) best = j;
  }
  return best;
}

}  // namespace

TopDownPass topdown_pass(const ScoreModel& m, SelectionCache& cache,
                         const Eigen::VectorXd& rss_init, bool exhaustive) {
  const int p = cache.data().p();
  if (rss_init.size() != p) throw ConfigError("topdown_pass: rss_init has wrong length");
  Eigen::VectorXd rss = rss_init;
  std::vector<char> placed(p, 0);
  std::vector<int> prefix;  // kept sorted for selection input
  std::vector<int> order;

  int first = argmin_unplaced(rss, placed);
  placed[first] = 1;
  order.push_back(first);
  prefix.push_back(first);

  while (static_cast<int>(order.size()) < p) {
    for (int j = 0; j < p; ++j) {
      if (placed[j]) continue;
      double rest = kahan_sum_except(rss, j);
      std::vector<int> sel;
      if (exhaustive) {
        sel = exhaustive_select(m, cache, j, prefix, rest);
      } else {
        sel = nodewise_fb(m, cache, j, prefix, rest, rest).first;
      }
      rss[j] = cache.rss(j, sel);
    }
    int next = argmin_unplaced(rss, placed);
    placed[next] = 1;
    order.push_back(next);
    prefix.insert(std::lower_bound(prefix.begin(), prefix.end(), next), next);
  }
  return {Ordering::from_perm(std::move(order)), std::move(rss)};
}

TopDownResult iterative_topdown(const ScoreModel& m, SelectionCache& cache, int max_outer,
                                bool exhaustive) {
  if (max_outer < 1) throw ConfigError("iterative_topdown: max_outer must be >= 1");
  TopDownResult out;
  Eigen::VectorXd rss_in = cache.data().gram.diagonal();
  TopDownPass cur = topdown_pass(m, cache, rss_in, exhaustive);
  out.outer_iterations = 1;
  while (out.outer_iterations < max_outer) {
    rss_in = cur.rss;
    TopDownPass next = topdown_pass(m, cache, rss_in, exhaustive);
    ++out.outer_iterations;
    if (next.ordering == cur.ordering) {
      out.ordering = std::move(cur.ordering);
      out.rss = std::move(rss_in);
      out.converged = true;
      return out;
    }
    cur = std::move(next);
  }
  out.ordering = std::move(cur.ordering);
  out.rss = std::move(cur.rss);
  out.converged = false;
  if (max_outer > 1)
    log_warn("iterative_topdown: no ordering fixed point within " + std::to_string(max_outer) +
             " sweeps");
  return out;
}

}  // namespace evdag
