#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evdag/dataset.hpp"
#include "evdag/graph.hpp"
#include "evdag/score.hpp"

namespace evdag {

// Record of one node's stepwise selection. `added` lists the forward
// additions in order with the residual after each; forward_final is the
// sorted set at the end of the forward stage (the node's parents in the
// pre-pruning DAG), backward_final the sorted set after the nodewise
// backward stage.
struct SearchPath {
  int node = -1;
  std::vector<std::pair<int, double>> added;
  std::vector<int> forward_final;
  std::vector<int> backward_final;
  bool cap_hit = false;
};

// Memoized residual store for one dataset plus the per-node selection paths
// of the current ordering. Residuals are computed on first request and kept
// for the lifetime of the cache, so repeated selections across moves mostly
// reduce to hash lookups; a memoized value is always the output of
// evdag::rss, never an approximation.
class SelectionCache {
 public:
  explicit SelectionCache(const DataMatrix& data);

  const DataMatrix& data() const { return *data_; }
  const RssBounds& bounds() const { return bounds_; }
  // Fixed-order sums of the bound vectors excluding one node; these are the
  // forward / backward context totals of the ordering-space selection.
  double lower_sum_except(int node) const { return lower_except_[node]; }
  double upper_sum_except(int node) const { return upper_except_[node]; }

  double rss(int node, std::span<const int> sorted_parents);

  std::vector<SearchPath> paths;

  std::uint64_t memo_hits = 0;
  std::uint64_t memo_misses = 0;
  std::uint64_t cap_hits = 0;
  std::uint64_t degenerate_skips = 0;

  // Re-checks every memoized entry against a fresh solve (test support).
  double max_memo_error() const;

 private:
  struct SetHash {
    using is_transparent = void;
    std::size_t operator()(std::span<const int> v) const {
      std::size_t h = 1469598103934665603ull;
      for (int x : v) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
      }
      return h;
    }
    std::size_t operator()(const std::vector<int>& v) const {
      return (*this)(std::span<const int>(v));
    }
  };
  struct SetEq {
    using is_transparent = void;
    bool operator()(std::span<const int> a, std::span<const int> b) const {
      return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
    }
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
      return a == b;
    }
    bool operator()(const std::vector<int>& a, std::span<const int> b) const {
      return (*this)(std::span<const int>(a), b);
    }
    bool operator()(std::span<const int> a, const std::vector<int>& b) const {
      return (*this)(a, std::span<const int>(b));
    }
  };
  const DataMatrix* data_;
  RssBounds bounds_;
  std::vector<double> lower_except_;
  std::vector<double> upper_except_;
  std::vector<std::unordered_map<std::vector<int>, double, SetHash, SetEq>> memo_;
};

// One node's forward-backward stepwise selection against the candidate set
// `potential` (sorted). rss_fwd / rss_bwd are the residual totals of the
// other nodes used by the forward and backward stages. Candidates whose Gram
// submatrix degenerates are skipped. Returns the backward-stage set; the path
// records both stages.
std::pair<std::vector<int>, SearchPath> nodewise_fb(const ScoreModel& m, SelectionCache& cache,
                                                    int node, std::span<const int> potential,
                                                    double rss_fwd, double rss_bwd);

struct MapResult {
  Dag dag;
  ScoreState state;
  double log_score = 0.0;
  int nodewise_count = 0;
};

// Assembles the DAG whose parents are each path's forward_final set, then
// greedily deletes edges while the full score does not decrease (ties broken
// toward the lexicographically smallest edge). Requires cache.paths valid.
MapResult build_from_paths(const ScoreModel& m, SelectionCache& cache);

// Highest-scoring DAG consistent with sigma: per-node forward-backward
// selection with the bound totals as context, then the DAG-level backward
// pass. Rewrites cache.paths for every node.
MapResult map_dag(const ScoreModel& m, SelectionCache& cache, const Ordering& sigma);

struct PathJournal {
  Move move{};
  std::vector<std::pair<int, SearchPath>> saved;
};

// Applies the move to sigma in place and refreshes only the touched
// positions' selection paths before rebuilding the DAG; the result matches
// map_dag on the moved ordering bitwise. nodewise_count is the number of
// selections performed (the touched range width). When journal is non-null
// the displaced paths are saved for undo_move.
MapResult update_after_move(const ScoreModel& m, SelectionCache& cache, Ordering& sigma,
                            const Move& move, PathJournal* journal = nullptr);

// Reverses update_after_move: restores the journaled paths and un-applies the
// move from sigma.
void undo_move(SelectionCache& cache, Ordering& sigma, const PathJournal& journal);

}  // namespace evdag
