#include "evdag/score.hpp"

#include <algorithm>
#include <cmath>

namespace evdag {

int resolve_d_in(const Hyperparams& h, int p) {
  int d = h.d_in >= 0 ? h.d_in : std::min(p - 1, 10);
  return std::min(d, p - 1);
}

ScoreModel make_score_model(const Hyperparams& h, int n, int p, ScoreKind kind) {
  if (n < 1 || p < 2) throw ConfigError("score model needs n >= 1, p >= 2");
  if (h.alpha <= 0.0 || h.gamma <= 0.0 || h.kappa < 0.0 || h.c0 < 0.0)
    throw ConfigError("score hyperparameters need alpha > 0, gamma > 0, kappa >= 0, c0 >= 0");
  ScoreModel m;
  m.h = h;
  m.n = n;
  m.p = p;
  m.d_in = resolve_d_in(h, p);
  m.kind = kind;
  m.k0 = h.c0 * std::log(static_cast<double>(p)) + 0.5 * std::log1p(h.alpha / h.gamma);
  m.k1 = (h.alpha * p * n + h.kappa) / 2.0;
  m.k1d = (h.alpha * n + h.kappa) / 2.0;
  return m;
}

ScoreState make_score_state(Eigen::VectorXd rss_by_node, int edge_count) {
  ScoreState s;
  s.total_rss = kahan_sum(rss_by_node);
  s.rss_by_node = std::move(rss_by_node);
  s.edge_count = edge_count;
  return s;
}

namespace {

double log_sum_compensated(const Eigen::VectorXd& v, int replace_at, double repl) {
  double logs = 0.0, comp = 0.0;
  for (int j = 0; j < v.size(); ++j) {
    double y = std::log(j == replace_at ? repl : v[j]) - comp;
    double t = logs + y;
    comp = (t - logs) - y;
    logs = t;
  }
  return logs;
}

}  // namespace

double phi(const ScoreModel& m, const ScoreState& s) {
  if (m.kind == ScoreKind::nondecomposable)
    return -s.edge_count * m.k0 - m.k1 * std::log(s.total_rss);
  return -s.edge_count * m.k0 - m.k1d * log_sum_compensated(s.rss_by_node, -1, 0.0);
}

double phi(const ScoreModel& m, int edge_count, const Eigen::VectorXd& rss_by_node) {
  return phi(m, make_score_state(rss_by_node, edge_count));
}

double phi_substituted(const ScoreModel& m, const ScoreState& s, int at, double repl,
                       int edge_delta) {
  int ec = s.edge_count + edge_delta;
  if (m.kind == ScoreKind::nondecomposable)
    return -ec * m.k0 - m.k1 * std::log(kahan_sum_with(s.rss_by_node, at, repl));
  return -ec * m.k0 - m.k1d * log_sum_compensated(s.rss_by_node, at, repl);
}

double phi_nodewise(const ScoreModel& m, int set_size, double rss_node, double rss_rest) {
  if (m.kind == ScoreKind::nondecomposable)
    return -set_size * m.k0 - m.k1 * std::log(rss_rest + rss_node);
  return -set_size * m.k0 - m.k1d * std::log(rss_node);
}

double log_accept_ratio(double phi_proposed, double phi_current) {
  return std::min(0.0, phi_proposed - phi_current);
}

}  // namespace evdag
