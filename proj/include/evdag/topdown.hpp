#pragma once

#include <Eigen/Dense>

#include "evdag/selection.hpp"

namespace evdag {

// One top-down sweep: seed the ordering with the node of smallest current
// residual, then repeatedly re-select every unplaced node's parents from the
// placed prefix (forward-backward, with the running residual total of the
// other nodes as context), refresh its residual, and append the unplaced node
// of smallest residual. rss_init supplies the starting residual estimates.
// With exhaustive = true the per-node selection enumerates all subsets of the
// prefix up to the in-degree cap instead of the stepwise search (p <= 12).
struct TopDownPass {
  Ordering ordering;
  Eigen::VectorXd rss;
};

TopDownPass topdown_pass(const ScoreModel& m, SelectionCache& cache,
                         const Eigen::VectorXd& rss_init, bool exhaustive = false);

struct TopDownResult {
  Ordering ordering;
  Eigen::VectorXd rss;  // residuals that reproduce `ordering` under one more pass
  int outer_iterations = 0;
  bool converged = false;
};

// Iterates topdown_pass to a fixed point of the ordering, starting from the
// Gram diagonal, stopping after max_outer sweeps if no fixed point appears.
TopDownResult iterative_topdown(const ScoreModel& m, SelectionCache& cache, int max_outer = 20,
                                bool exhaustive = false);

}  // namespace evdag
