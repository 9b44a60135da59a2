#include "evdag/selection.hpp"

#include <algorithm>
#include <cmath>

namespace evdag {

SelectionCache::SelectionCache(const DataMatrix& data)
    : data_(&data), bounds_(rss_bounds(data)) {
  const int p = data.p();
  lower_except_.resize(p);
  upper_except_.resize(p);
  for (int j = 0; j < p; ++j) {
    lower_except_[j] = kahan_sum_except(bounds_.lower, j);
    upper_except_[j] = kahan_sum_except(bounds_.upper, j);
  }
  paths.resize(p);
  memo_.resize(p);
}

double SelectionCache::rss(int node, std::span<const int> sorted_parents) {
  auto& m = memo_[node];
  auto it = m.find(sorted_parents);
  if (it != m.end()) {
    ++memo_hits;
    return it->second;
  }
  ++memo_misses;
  double v = evdag::rss(*data_, node, sorted_parents);
  m.emplace(std::vector<int>(sorted_parents.begin(), sorted_parents.end()), v);
  return v;
}

double SelectionCache::max_memo_error() const {
  double worst = 0.0;
  for (int j = 0; j < static_cast<int>(memo_.size()); ++j)
    for (const auto& [set, v] : memo_[j]) {
      double fresh = evdag::rss(*data_, j, set);
      double denom = std::max(std::abs(fresh), 1e-300);
      worst = std::max(worst, std::abs(fresh - v) / denom);
    }
  return worst;
}

namespace {

// Best candidate by residual among additions (or removals) of one element;
// ties go to the lowest node id because candidates are scanned ascending.
struct Candidate {
  int elem = -1;
  double rss = 0.0;
};

Candidate best_addition(SelectionCache& cache, int node, std::span<const int> potential,
                        const std::vector<int>& set, std::vector<int>& scratch) {
  Candidate best;
  for (int cand : potential) {
    if (std::binary_search(set.begin(), set.end(), cand)) continue;
    scratch.assign(set.begin(), set.end());
    scratch.insert(std::lower_bound(scratch.begin(), scratch.end(), cand), cand);
    double r;
    try {
      r = cache.rss(node, scratch);
    } catch (const DegenerateDesignError&) {
      ++cache.degenerate_skips;
      continue;
    }
    if (best.elem < 0 || r < best.rss) best = {cand, r};
  }
  return best;
}

Candidate best_removal(SelectionCache& cache, int node, const std::vector<int>& set,
                       std::vector<int>& scratch) {
  Candidate best;
  for (int cand : set) {
    scratch.clear();
    for (int v : set)
      if (v != cand) scratch.push_back(v);
    double r;
    try {
      r = cache.rss(node, scratch);
    } catch (const DegenerateDesignError&) {
      ++cache.degenerate_skips;
      continue;
    }
    if (best.elem < 0 || r < best.rss) best = {cand, r};
  }
  return best;
}

}  // namespace

std::pair<std::vector<int>, SearchPath> nodewise_fb(const ScoreModel& m, SelectionCache& cache,
                                                    int node, std::span<const int> potential,
                                                    double rss_fwd, double rss_bwd) {
  SearchPath path;
  path.node = node;
  std::vector<int> set;
  std::vector<int> scratch;
  double cur_rss = cache.rss(node, set);
  double cur_phi = phi_nodewise(m, 0, cur_rss, rss_fwd);

  for (;;) {
    Candidate c = best_addition(cache, node, potential, set, scratch);
    if (c.elem < 0) break;
    double cand_phi = phi_nodewise(m, static_cast<int>(set.size()) + 1, c.rss, rss_fwd);
    if (cand_phi < cur_phi) break;
    if (static_cast<int>(set.size()) >= m.d_in) {
      path.cap_hit = true;
      ++cache.cap_hits;
      break;
    }
    set.insert(std::lower_bound(set.begin(), set.end(), c.elem), c.elem);
    path.added.emplace_back(c.elem, c.rss);
    cur_rss = c.rss;
    cur_phi = cand_phi;
  }
  path.forward_final = set;

  cur_phi = phi_nodewise(m, static_cast<int>(set.size()), cur_rss, rss_bwd);
  while (!set.empty()) {
    Candidate c = best_removal(cache, node, set, scratch);
    if (c.elem < 0) break;
    double cand_phi = phi_nodewise(m, static_cast<int>(set.size()) - 1, c.rss, rss_bwd);
    if (cand_phi < cur_phi) break;
    set.erase(std::find(set.begin(), set.end(), c.elem));
    cur_rss = c.rss;
    cur_phi = cand_phi;
  }
  path.backward_final = set;
  return {std::move(set), std::move(path)};
}

MapResult build_from_paths(const ScoreModel& m, SelectionCache& cache) {
  const int p = cache.data().p();
  MapResult out;
  out.dag = Dag(p);
  Eigen::VectorXd rss_by_node(p);
  int edges = 0;
  for (int j = 0; j < p; ++j) {
    out.dag.parents[j] = cache.paths[j].forward_final;
    edges += static_cast<int>(out.dag.parents[j].size());
    rss_by_node[j] = cache.rss(j, out.dag.parents[j]);
  }
  out.state = make_score_state(std::move(rss_by_node), edges);
  out.log_score = phi(m, out.state);

  std::vector<int> scratch;
  for (;;) {
    double best_phi = 0.0;
    int best_i = -1, best_j = -1;
    double best_rss = 0.0;
    for (const auto& [i, j] : out.dag.edges()) {
      scratch.clear();
      for (int v : out.dag.parents[j])
        if (v != i) scratch.push_back(v);
      double r;
      try {
        r = cache.rss(j, scratch);
      } catch (const DegenerateDesignError&) {
        ++cache.degenerate_skips;
        continue;
      }
      double cand_phi = phi_substituted(m, out.state, j, r, -1);
      if (best_i < 0 || cand_phi > best_phi) {
        best_phi = cand_phi;
        best_i = i;
        best_j = j;
        best_rss = r;
      }
    }
    if (best_i < 0 || best_phi < out.log_score) break;
    out.dag.remove_edge(best_i, best_j);
    out.state.rss_by_node[best_j] = best_rss;
    out.state.edge_count -= 1;
    out.state.total_rss = kahan_sum(out.state.rss_by_node);
    out.log_score = best_phi;
  }
  return out;
}

MapResult map_dag(const ScoreModel& m, SelectionCache& cache, const Ordering& sigma) {
  const int p = sigma.size();
  for (int posn = 0; posn < p; ++posn) {
    int node = sigma.perm[posn];
    auto potential = potential_parents(sigma, node);
    auto [set, path] = nodewise_fb(m, cache, node, potential, cache.lower_sum_except(node),
                                   cache.upper_sum_except(node));
    cache.paths[node] = std::move(path);
  }
  MapResult out = build_from_paths(m, cache);
  out.nodewise_count = p;
  return out;
}

MapResult update_after_move(const ScoreModel& m, SelectionCache& cache, Ordering& sigma,
                            const Move& move, PathJournal* journal) {
  apply_move(sigma, move);
  auto [lo, hi] = touched_range(move);
  if (journal) {
    journal->move = move;
    journal->saved.clear();
  }
  for (int posn = lo; posn <= hi; ++posn) {
    int node = sigma.perm[posn];
    if (journal) journal->saved.emplace_back(node, cache.paths[node]);
    auto potential = potential_parents(sigma, node);
    auto [set, path] = nodewise_fb(m, cache, node, potential, cache.lower_sum_except(node),
                                   cache.upper_sum_except(node));
    cache.paths[node] = std::move(path);
  }
  MapResult out = build_from_paths(m, cache);
  out.nodewise_count = hi - lo + 1;
  return out;
}

void undo_move(SelectionCache& cache, Ordering& sigma, const PathJournal& journal) {
  for (const auto& [node, path] : journal.saved) cache.paths[node] = path;
  apply_move(sigma, inverse(journal.move));
}

}  // namespace evdag
