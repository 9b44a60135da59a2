#pragma once

#include <Eigen/Dense>

#include "evdag/common.hpp"

namespace evdag {

struct Hyperparams {
  double c0 = 3.0;
  double alpha = 0.99;
  double gamma = 0.01;
  double kappa = 0.0;
  int d_in = -1;  // -1 resolves to min(p - 1, 10)
};

int resolve_d_in(const Hyperparams& h, int p);

enum class ScoreKind { nondecomposable, decomposable };

// Precomputed score coefficients for a fixed dataset size. Both kinds share
// the per-edge penalty k0 = c0 log p + log(1 + alpha/gamma) / 2. The
// nondecomposable log score of a DAG is
//   -|G| k0 - k1 log(sum_j rss_j),        k1 = (alpha p n + kappa) / 2,
// coupling the nodes through the shared total; the decomposable variant is
//   -|G| k0 - k1d sum_j log(rss_j),       k1d = (alpha n + kappa) / 2,
// which splits over nodes and scores Markov-equivalent DAGs identically.
struct ScoreModel {
  Hyperparams h;
  int n = 0;
  int p = 0;
  int d_in = 0;
  ScoreKind kind = ScoreKind::nondecomposable;
  double k0 = 0.0;
  double k1 = 0.0;
  double k1d = 0.0;
};

ScoreModel make_score_model(const Hyperparams& h, int n, int p,
                            ScoreKind kind = ScoreKind::nondecomposable);

// Per-node residuals of the current DAG plus the derived pieces of the score.
// total_rss is always the fixed-order compensated sum of rss_by_node, so any
// two routes that arrive at the same residual vector agree bitwise.
struct ScoreState {
  Eigen::VectorXd rss_by_node;
  double total_rss = 0.0;
  int edge_count = 0;
};

ScoreState make_score_state(Eigen::VectorXd rss_by_node, int edge_count);

double phi(const ScoreModel& m, const ScoreState& s);
double phi(const ScoreModel& m, int edge_count, const Eigen::VectorXd& rss_by_node);

// phi of the state obtained by replacing node `at`'s residual with `repl` and
// shifting the edge count by `edge_delta`, evaluated with the same summation
// discipline as phi so the result matches a fresh evaluation bitwise.
double phi_substituted(const ScoreModel& m, const ScoreState& s, int at, double repl,
                       int edge_delta);

// Score of one node's parent set holding the rest of the DAG fixed, up to a
// constant not depending on the set: rss_rest carries the other nodes'
// residual total (ignored by the decomposable kind).
double phi_nodewise(const ScoreModel& m, int set_size, double rss_node, double rss_rest);

// log min(1, exp(phi_proposed - phi_current)); proposals are symmetric.
double log_accept_ratio(double phi_proposed, double phi_current);

}  // namespace evdag
