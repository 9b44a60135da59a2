#include "evdag/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "evdag/evaluate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace evdag::cli {

namespace {

void write_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << j.dump(2) << "\n";
}

std::string band_dir_name(double b) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "band_%.2f", b);
  return buf;
}

std::string rep_dir_name(int r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rep_%03d", r);
  return buf;
}

void write_one_replicate(const fs::path& dir, const SimConfig& cfg, std::uint64_t seed,
                         std::uint64_t stream, bool relabel_nodes) {
  fs::create_directories(dir);
  Philox rng(seed, stream);
  GroundTruth truth = sample_truth(cfg, rng);
  Eigen::MatrixXd x = gen_data(truth, cfg.n, rng);
  if (relabel_nodes) {
    Ordering labels = random_ordering(cfg.p, rng);
    relabel(truth, x, labels.perm);
  }
  write_matrix_csv((dir / "data.csv").string(), x);
  write_edge_list((dir / "truth_edges.txt").string(), truth.dag);
  write_matrix_csv((dir / "weights.csv").string(), truth.b);
  write_matrix_csv((dir / "omegas.csv").string(), truth.omega.transpose());
}

json sim_config_json(const SimConfig& c) {
  json j;
  j["p"] = c.p;
  j["n"] = c.n;
  j["edge_prob"] = c.edge_prob;
  j["weights"] = c.weight_kind == WeightKind::uniform_signed ? "uniform_signed" : "normal";
  j["w_lo"] = c.w_lo;
  j["w_hi"] = c.w_hi;
  j["variances"] = c.var_kind == VarianceKind::equal ? "equal" : "uniform_band";
  j["omega"] = c.omega;
  j["band"] = c.band;
  return j;
}

DataMatrix load_for_run(const std::string& path, bool header, bool standardize) {
  DataMatrix d = load_matrix(path, header);
  if (standardize) {
    Eigen::MatrixXd x = d.x;
    standardize_columns(x);
    d = make_data(std::move(x), d.names);
  }
  return d;
}

const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::adjacent: return "adjacent";
    case MoveKind::transposition: return "transposition";
    case MoveKind::shuffle: return "shuffle";
  }
  return "?";
}

}  // namespace

int run_simulate(const SimulateArgs& a) {
  fs::path root(a.out_dir);
  fs::create_directories(root);
  std::vector<double> bands = a.sweep_band;
  const bool sweeping = !bands.empty();
  json manifest;
  manifest["command"] = "simulate";
  manifest["seed"] = a.seed;
  manifest["replicates"] = a.replicates;
  manifest["config"] = sim_config_json(a.sim);
  if (sweeping) manifest["sweep_band"] = bands;
  manifest["relabel"] = a.relabel;
  auto dirs = json::array();

  if (!sweeping) bands.push_back(a.sim.band);
  for (std::size_t bi = 0; bi < bands.size(); ++bi) {
    SimConfig cfg = a.sim;
    cfg.band = bands[bi];
    if (sweeping) cfg.var_kind = cfg.band == 0.0 ? VarianceKind::equal : VarianceKind::uniform_band;
    fs::path base = sweeping ? root / band_dir_name(cfg.band) : root;
    for (int r = 0; r < a.replicates; ++r) {
      fs::path dir = a.replicates > 1 || sweeping ? base / rep_dir_name(r) : base;
      std::uint64_t stream = static_cast<std::uint64_t>(bi) * 1000000u + static_cast<std::uint64_t>(r);
      write_one_replicate(dir, cfg, a.seed, stream, a.relabel);
      dirs.push_back(fs::relative(dir, root).string());
    }
  }
  manifest["directories"] = std::move(dirs);
  write_json((root / "manifest.json").string(), manifest);
  return 0;
}

int run_learn(const LearnArgs& a) {
  DataMatrix d = load_for_run(a.data_path, a.header, a.standardize);
  fs::path root(a.out_dir);
  fs::create_directories(root);

  ChainConfig cfg = a.chain;
  if (cfg.init == ChainConfig::Init::given) {
    if (a.init_order_path.empty())
      throw ConfigError("--init given requires --init-order");
    cfg.given_order = read_ordering(a.init_order_path).perm;
  }

  MultiChainRun run = run_multichain(d, a.h, cfg, a.chains, a.jobs);

  const int p = d.p();
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(p, p);
  int ok = 0;
  json chains_json = json::array();
  for (int c = 0; c < a.chains; ++c) {
    if (!run.outputs[c]) continue;
    const ChainOutput& o = *run.outputs[c];
    char name[32];
    std::snprintf(name, sizeof(name), "chain_%02d", c);
    fs::path cd = root / name;
    fs::create_directories(cd);
    write_trace_csv((cd / "trace.csv").string(), o.trace);
    write_matrix_csv((cd / "pip.csv").string(), o.pip);
    write_edge_list((cd / "final_dag.txt").string(), o.final_dag);
    write_ordering((cd / "initial_order.txt").string(), o.initial_ordering);
    write_ordering((cd / "final_order.txt").string(), o.final_ordering);
    if (!o.samples.empty()) write_samples_jsonl((cd / "samples.jsonl").string(), o.samples);
    pooled += o.pip;
    ++ok;
    json cj;
    cj["chain"] = c;
    cj["final_log_score"] = o.final_log_score;
    cj["effective_iterations"] = o.effective_iterations;
    cj["rb_skipped"] = o.rb_skipped;
    long acc = 0;
    for (const auto& row : o.trace) acc += row.accepted ? 1 : 0;
    cj["acceptance_rate"] =
        o.trace.empty() ? 0.0 : static_cast<double>(acc) / static_cast<double>(o.trace.size());
    chains_json.push_back(std::move(cj));
  }
  for (const auto& [c, msg] : run.failures)
    std::cerr << "chain " << c << " failed: " << msg << "\n";
  if (ok > 0) {
    pooled /= static_cast<double>(ok);
    write_matrix_csv((root / "pip.csv").string(), pooled);
    Dag calls(p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (i != j && pooled(i, j) >= a.threshold) calls.add_edge(i, j);
    write_edge_list((root / "map_edges.txt").string(), calls);
  }

  json manifest;
  manifest["command"] = "learn";
  manifest["data"] = a.data_path;
  manifest["header"] = a.header;
  manifest["standardize"] = a.standardize;
  manifest["n"] = d.n();
  manifest["p"] = p;
  manifest["iterations"] = cfg.iterations;
  manifest["burn_in"] = resolve_burn_in(cfg);
  manifest["neighborhood"] = move_name(cfg.neighborhood);
  manifest["score"] =
      cfg.score == ScoreKind::nondecomposable ? "nondecomposable" : "decomposable";
  manifest["init"] = cfg.init == ChainConfig::Init::itd
                         ? "itd"
                         : cfg.init == ChainConfig::Init::random ? "random" : "given";
  manifest["seed"] = cfg.seed;
  manifest["thin"] = cfg.thin;
  manifest["effective_budget"] = cfg.effective_budget;
  manifest["chains"] = a.chains;
  manifest["jobs"] = a.jobs;
  manifest["threshold"] = a.threshold;
  manifest["hyperparams"] = {{"c0", a.h.c0},
                             {"alpha", a.h.alpha},
                             {"gamma", a.h.gamma},
                             {"kappa", a.h.kappa},
                             {"d_in", resolve_d_in(a.h, p)}};
  manifest["chain_results"] = std::move(chains_json);
  if (!run.failures.empty()) {
    auto fj = json::array();
    for (const auto& [c, msg] : run.failures) fj.push_back({{"chain", c}, {"error", msg}});
    manifest["failures"] = std::move(fj);
  }
  write_json((root / "manifest.json").string(), manifest);
  return run.failures.empty() ? 0 : 1;
}

namespace {

json metrics_json(const MetricReport& m) {
  return {{"hd", m.hd}, {"fnr", m.fnr}, {"fdr", m.fdr}, {"flip", m.flip},
          {"degenerate", m.degenerate}};
}

MetricReport eval_pair(const std::string& truth_path, const std::string& pip_path,
                       double threshold) {
  Eigen::MatrixXd pip = read_matrix_csv(pip_path);
  if (pip.rows() != pip.cols()) throw ParseError(pip_path + ": matrix is not square");
  const int p = static_cast<int>(pip.rows());
  Dag truth = read_edge_list(truth_path, p);
  if (threshold >= 0.0)
    pip = (pip.array() >= threshold).cast<double>().matrix();
  pip.diagonal().setZero();
  return metrics(adjacency(truth), pip);
}

}  // namespace

int run_eval(const EvalArgs& a) {
  json out;
  out["command"] = "eval";
  if (a.batch_root.empty()) {
    MetricReport m = eval_pair(a.truth_path, a.pip_path, a.threshold);
    out["metrics"] = metrics_json(m);
  } else {
    std::vector<fs::path> reps;
    for (const auto& e : fs::directory_iterator(a.batch_root))
      if (e.is_directory() && e.path().filename().string().rfind("rep_", 0) == 0)
        reps.push_back(e.path());
    std::sort(reps.begin(), reps.end());
    if (reps.empty()) throw ConfigError("no rep_* directories under '" + a.batch_root + "'");
    auto rows = json::array();
    std::vector<MetricReport> all;
    for (const auto& r : reps) {
      MetricReport m =
          eval_pair((r / a.truth_rel).string(), (r / a.pip_rel).string(), a.threshold);
      json row = metrics_json(m);
      row["replicate"] = r.filename().string();
      rows.push_back(std::move(row));
      all.push_back(m);
    }
    auto agg = [&](auto get) {
      double mean = 0.0;
      for (const auto& m : all) mean += get(m);
      mean /= all.size();
      double var = 0.0;
      for (const auto& m : all) var += (get(m) - mean) * (get(m) - mean);
      var = all.size() > 1 ? var / (all.size() - 1) : 0.0;
      return std::pair<double, double>(mean, std::sqrt(var / all.size()));
    };
    auto [hd_m, hd_se] = agg([](const MetricReport& m) { return m.hd; });
    auto [fnr_m, fnr_se] = agg([](const MetricReport& m) { return m.fnr; });
    auto [fdr_m, fdr_se] = agg([](const MetricReport& m) { return m.fdr; });
    auto [flip_m, flip_se] = agg([](const MetricReport& m) { return m.flip; });
    out["replicates"] = std::move(rows);
    out["mean"] = {{"hd", hd_m}, {"fnr", fnr_m}, {"fdr", fdr_m}, {"flip", flip_m}};
    out["se"] = {{"hd", hd_se}, {"fnr", fnr_se}, {"fdr", fdr_se}, {"flip", flip_se}};
  }
  if (a.threshold >= 0.0) out["threshold"] = a.threshold;
  if (a.out_path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    write_json(a.out_path, out);
  }
  return 0;
}

int run_diagnose(const DiagnoseArgs& a) {
  if (a.sample_paths.size() < 2) throw ConfigError("diagnose needs at least two sample files");
  if (a.p < 2) throw ConfigError("diagnose needs --p >= 2");
  std::vector<std::vector<Dag>> chains;
  std::size_t len = 0;
  for (const auto& path : a.sample_paths) {
    auto rows = read_samples_jsonl(path, a.p);
    std::vector<Dag> dags;
    dags.reserve(rows.size());
    for (auto& r : rows) dags.push_back(std::move(r.dag));
    if (chains.empty()) {
      len = dags.size();
    } else if (dags.size() != len) {
      throw ConfigError("sample files differ in length (" + std::to_string(dags.size()) +
                        " vs " + std::to_string(len) + ")");
    }
    chains.push_back(std::move(dags));
  }
  GelmanRubinReport rep = gelman_rubin(chains, a.p);
  json out;
  out["command"] = "diagnose";
  out["chains"] = a.sample_paths.size();
  out["samples_per_chain"] = len;
  out["max_psrf"] = std::isinf(rep.max_psrf) ? json("inf") : json(rep.max_psrf);
  out["frac_below_1p1"] = rep.frac_below_1p1;
  out["infinite_count"] = rep.infinite_count;
  auto mat = json::array();
  for (int i = 0; i < a.p; ++i) {
    auto row = json::array();
    for (int j = 0; j < a.p; ++j) {
      double v = rep.psrf(i, j);
      row.push_back(std::isinf(v) ? json("inf") : json(v));
    }
    mat.push_back(std::move(row));
  }
  out["psrf"] = std::move(mat);
  if (a.out_path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    write_json(a.out_path, out);
  }
  return 0;
}

int run_oracle(const OracleArgs& a) {
  DataMatrix d = load_for_run(a.data_path, a.header, a.standardize);
  ExactPosterior post = exact_posterior(d, a.h, a.score);
  {
    std::ofstream f(a.out_prefix + "orders.csv");
    if (!f) throw ParseError("cannot write '" + a.out_prefix + "orders.csv'");
    f << "ordering,probability\n";
    for (std::size_t i = 0; i < post.orders.size(); ++i) {
      for (std::size_t k = 0; k < post.orders[i].size(); ++k)
        f << (k ? " " : "") << post.orders[i][k] + 1;
      f << "," << format_double(post.order_probs[i]) << "\n";
    }
  }
  {
    std::ofstream f(a.out_prefix + "dags.csv");
    if (!f) throw ParseError("cannot write '" + a.out_prefix + "dags.csv'");
    f << "edges,probability\n";
    for (const auto& [g, prob] : post.dag_probs) {
      auto edges = g.edges();
      if (edges.empty()) {
        f << "-";
      } else {
        for (std::size_t k = 0; k < edges.size(); ++k)
          f << (k ? " " : "") << edges[k].first + 1 << ">" << edges[k].second + 1;
      }
      f << "," << format_double(prob) << "\n";
    }
  }
  return 0;
}

}  // namespace evdag::cli
