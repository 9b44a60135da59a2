#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "evdag/dataset.hpp"
#include "evdag/graph.hpp"
#include "evdag/score.hpp"

namespace evdag {

// Structural error of an estimated edge-probability matrix against a binary
// truth. hd sums the absolute entry gaps |gamma* - gamma_hat|; fnr and fdr are the
// missed / false edge mass in percent; flip is the reversed-edge mass in
// percent of true edges. degenerate marks an empty true graph (fnr and flip
// forced to 0) and fdr is 0 when the estimate carries no mass.
struct MetricReport {
  double hd = 0.0;
  double fnr = 0.0;
  double fdr = 0.0;
  double flip = 0.0;
  bool degenerate = false;
};

MetricReport metrics(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate);

// Potential scale reduction of one scalar stream across chains (all the same
// length, at least 2 chains): with W the mean within-chain variance and B/T
// the variance of the chain means, PSRF = sqrt(((T-1)/T W + (1+1/m) B/T) / W).
// Returns 1 when every chain is constant and equal, +infinity when constant
// chains disagree.
double psrf(const std::vector<std::vector<double>>& chains);

// Per-directed-edge PSRF of inclusion indicators across sampled DAG streams.
struct GelmanRubinReport {
  Eigen::MatrixXd psrf;       // p x p, diagonal 0
  double max_psrf = 0.0;
  double frac_below_1p1 = 0.0;  // fraction of off-diagonal entries <= 1.1
  int infinite_count = 0;
};

GelmanRubinReport gelman_rubin(const std::vector<std::vector<Dag>>& chain_samples, int p);

// Exact posterior by enumeration of all orderings and all consistent DAGs
// under the in-degree cap (hard limit p <= 6). Order probabilities follow the
// highest-scoring DAG per ordering; DAG probabilities aggregate the orderings
// whose best DAG coincides, so a DAG's mass carries its ordering multiplicity.
struct ExactPosterior {
  std::vector<std::vector<int>> orders;      // all p! permutations
  std::vector<double> order_probs;           // aligned with orders
  std::vector<Dag> map_dags;                 // best DAG per ordering, aligned
  std::vector<std::pair<Dag, double>> dag_probs;  // grouped, descending mass
};

ExactPosterior exact_posterior(const DataMatrix& d, const Hyperparams& h,
                               ScoreKind kind = ScoreKind::nondecomposable);

}  // namespace evdag
