#pragma once

#include <Eigen/Dense>

#include "evdag/graph.hpp"
#include "evdag/rng.hpp"

namespace evdag {

enum class WeightKind { uniform_signed, normal };
enum class VarianceKind { equal, uniform_band };

struct SimConfig {
  int p = 0;
  int n = 0;
  double edge_prob = 0.0;
  WeightKind weight_kind = WeightKind::uniform_signed;
  double w_lo = 0.3;  // magnitude band for uniform_signed
  double w_hi = 1.0;
  VarianceKind var_kind = VarianceKind::equal;
  double omega = 1.0;  // shared noise variance (equal kind)
  double band = 0.0;   // omega_j ~ Uniform[1 - band, 1 + band] (uniform_band kind)
};

// True model: DAG over 0..p-1 ordered by the identity (i -> j only for
// i < j), weight matrix b with b(i, j) the coefficient of i in j's equation,
// per-node noise variances omega.
struct GroundTruth {
  Dag dag;
  Eigen::MatrixXd b;
  Eigen::VectorXd omega;
};

// Draw order: edge indicators for i < j (row-major), then weights in the same
// order, then variances by node. Equal-variance draws consume no randomness
// for omega, so truths with the two variance kinds share their graph under a
// common rng state.
GroundTruth sample_truth(const SimConfig& cfg, Philox& rng);

// n i.i.d. rows of the linear model; noise drawn column by column, columns
// then filled in the identity (topological) order.
Eigen::MatrixXd gen_data(const GroundTruth& truth, int n, Philox& rng);

// Population covariance (I - B^T)^{-1} Omega (I - B)^{-1} implied by the
// model; source nodes are exactly the nodes whose diagonal entry equals their
// noise variance.
Eigen::MatrixXd model_covariance(const GroundTruth& truth);

// Relabels nodes by new_label_of (old id -> new id), permuting the truth and
// the columns of x consistently.
void relabel(GroundTruth& truth, Eigen::MatrixXd& x, const std::vector<int>& new_label_of);

}  // namespace evdag
