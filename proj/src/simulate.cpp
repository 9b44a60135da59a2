#include "evdag/simulate.hpp"

#include <cmath>

namespace evdag {

GroundTruth sample_truth(const SimConfig& cfg, Philox& rng) {
  if (cfg.p < 2 || cfg.edge_prob < 0.0 || cfg.edge_prob > 1.0)
    throw ConfigError("sample_truth: need p >= 2 and edge_prob in [0, 1]");
  if (cfg.weight_kind == WeightKind::uniform_signed &&
      (cfg.w_lo <= 0.0 || cfg.w_hi < cfg.w_lo))
    throw ConfigError("sample_truth: need 0 < w_lo <= w_hi");
  if (cfg.omega <= 0.0 || cfg.band < 0.0 || cfg.band >= 1.0)
    throw ConfigError("sample_truth: need omega > 0 and band in [0, 1)");
  GroundTruth t;
  t.dag = Dag(cfg.p);
  t.b = Eigen::MatrixXd::Zero(cfg.p, cfg.p);
  for (int i = 0; i < cfg.p; ++i)
    for (int j = i + 1; j < cfg.p; ++j)
      if (rng.uniform01() < cfg.edge_prob) t.dag.add_edge(i, j);
  for (int i = 0; i < cfg.p; ++i)
    for (int j = i + 1; j < cfg.p; ++j) {
      if (!t.dag.has_edge(i, j)) continue;
      double w;
      if (cfg.weight_kind == WeightKind::uniform_signed) {
        double mag = cfg.w_lo + (cfg.w_hi - cfg.w_lo) * rng.uniform01();
        w = rng.uniform01() < 0.5 ? -mag : mag;
      } else {
        w = rng.normal();
      }
      t.b(i, j) = w;
    }
  t.omega.resize(cfg.p);
  if (cfg.var_kind == VarianceKind::equal) {
    t.omega.setConstant(cfg.omega);
  } else {
    for (int j = 0; j < cfg.p; ++j)
      t.omega[j] = 1.0 - cfg.band + 2.0 * cfg.band * rng.uniform01();
  }
  return t;
}

Eigen::MatrixXd gen_data(const GroundTruth& truth, int n, Philox& rng) {
  const int p = truth.dag.p();
  if (n < 2) throw ConfigError("gen_data: need n >= 2");
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j) {
    double sd = std::sqrt(truth.omega[j]);
    for (int r = 0; r < n; ++r) x(r, j) = sd * rng.normal();
  }
  for (int j = 0; j < p; ++j)
    for (int i : truth.dag.parents[j]) x.col(j) += truth.b(i, j) * x.col(i);
  return x;
}

Eigen::MatrixXd model_covariance(const GroundTruth& truth) {
  const int p = truth.dag.p();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) - truth.b.transpose();
  Eigen::MatrixXd inv = m.partialPivLu().inverse();
  return inv * truth.omega.asDiagonal() * inv.transpose();
}

void relabel(GroundTruth& truth, Eigen::MatrixXd& x, const std::vector<int>& new_label_of) {
  const int p = truth.dag.p();
  Ordering check = Ordering::from_perm(new_label_of);  // validates the permutation
  (void)check;
  Dag dag(p);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd omega(p);
  Eigen::MatrixXd xp(x.rows(), p);
  for (int j = 0; j < p; ++j) {
    int nj = new_label_of[j];
    omega[nj] = truth.omega[j];
    xp.col(nj) = x.col(j);
    for (int i : truth.dag.parents[j]) {
      dag.add_edge(new_label_of[i], nj);
      b(new_label_of[i], nj) = truth.b(i, j);
    }
  }
  truth.dag = std::move(dag);
  truth.b = std::move(b);
  truth.omega = std::move(omega);
  x = std::move(xp);
}

}  // namespace evdag
