#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "evdag/cli.hpp"

namespace {

void add_hyper_flags(CLI::App* app, evdag::Hyperparams& h) {
  app->add_option("--c0", h.c0, "sparsity exponent")->capture_default_str();
  app->add_option("--alpha", h.alpha, "likelihood tempering weight")->capture_default_str();
  app->add_option("--gamma", h.gamma, "prior scale ratio")->capture_default_str();
  app->add_option("--kappa", h.kappa, "residual exponent offset")->capture_default_str();
  app->add_option("--d-in", h.d_in, "in-degree cap (-1: min(p-1, 10))")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian structure learning for equal-variance Gaussian DAG models"};
  app.require_subcommand(1);

  evdag::cli::SimulateArgs sim;
  std::string sim_weights = "uniform", sim_vars = "equal";
  auto* s = app.add_subcommand("simulate", "generate synthetic datasets");
  s->add_option("--out", sim.out_dir, "output directory")->required();
  s->add_option("--p", sim.sim.p, "number of nodes")->required();
  s->add_option("--n", sim.sim.n, "number of observations")->required();
  s->add_option("--edge-prob", sim.sim.edge_prob, "pairwise edge probability")->required();
  s->add_option("--weights", sim_weights, "uniform|normal")->capture_default_str();
  s->add_option("--w-lo", sim.sim.w_lo, "uniform weight magnitude lower end")
      ->capture_default_str();
  s->add_option("--w-hi", sim.sim.w_hi, "uniform weight magnitude upper end")
      ->capture_default_str();
  s->add_option("--variances", sim_vars, "equal|band")->capture_default_str();
  s->add_option("--omega", sim.sim.omega, "shared noise variance")->capture_default_str();
  s->add_option("--band", sim.sim.band, "variance band half-width b")->capture_default_str();
  s->add_option("--seed", sim.seed, "base seed")->capture_default_str();
  s->add_option("--replicates", sim.replicates, "independent datasets")->capture_default_str();
  s->add_option("--sweep-band", sim.sweep_band,
                "band values; one subdirectory per value, overrides --variances");
  s->add_flag("--relabel", sim.relabel, "randomly relabel nodes after generation");

  evdag::cli::LearnArgs learn;
  std::string learn_move = "transposition", learn_score = "nondecomposable", learn_init = "itd";
  auto* l = app.add_subcommand("learn", "sample orderings and estimate edge probabilities");
  l->add_option("--data", learn.data_path, "CSV data file")->required();
  l->add_flag("--header", learn.header, "first CSV line is a header");
  l->add_flag("--standardize", learn.standardize, "z-score columns before learning");
  l->add_option("--out", learn.out_dir, "output directory")->required();
  l->add_option("--iterations", learn.chain.iterations, "MCMC iterations")
      ->capture_default_str();
  l->add_option("--burn-in", learn.chain.burn_in, "burn-in iterations (-1: half)")
      ->capture_default_str();
  l->add_option("--neighborhood", learn_move, "adjacent|transposition|shuffle")
      ->capture_default_str();
  l->add_option("--score", learn_score, "nondecomposable|decomposable")->capture_default_str();
  l->add_option("--init", learn_init, "itd|random|given")->capture_default_str();
  l->add_option("--init-order", learn.init_order_path, "ordering file for --init given");
  l->add_option("--seed", learn.chain.seed, "base seed")->capture_default_str();
  l->add_option("--thin", learn.chain.thin, "keep every thin-th post-burn-in DAG")
      ->capture_default_str();
  l->add_option("--effective-budget", learn.chain.effective_budget,
                "stop after this many nodewise selections (0: off)")
      ->capture_default_str();
  l->add_option("--chains", learn.chains, "number of chains")->capture_default_str();
  l->add_option("--jobs", learn.jobs, "chains run concurrently")->capture_default_str();
  l->add_option("--threshold", learn.threshold, "edge call threshold on pooled probabilities")
      ->capture_default_str();
  add_hyper_flags(l, learn.h);

  evdag::cli::EvalArgs ev;
  auto* e = app.add_subcommand("eval", "compare edge probabilities against a known graph");
  e->add_option("--truth", ev.truth_path, "true edge list");
  e->add_option("--pip", ev.pip_path, "edge-probability CSV");
  e->add_option("--threshold", ev.threshold, "binarize probabilities first (-1: off)")
      ->capture_default_str();
  e->add_option("--out", ev.out_path, "output JSON (default: stdout)");
  e->add_option("--batch-root", ev.batch_root, "aggregate over rep_* subdirectories");
  e->add_option("--truth-rel", ev.truth_rel, "truth path inside each replicate")
      ->capture_default_str();
  e->add_option("--pip-rel", ev.pip_rel, "probability path inside each replicate")
      ->capture_default_str();

  evdag::cli::DiagnoseArgs diag;
  auto* g = app.add_subcommand("diagnose", "Gelman-Rubin diagnostics from sample streams");
  g->add_option("--samples", diag.sample_paths, "sample JSONL files (two or more)")
      ->required()
      ->expected(-2);
  g->add_option("--p", diag.p, "number of nodes")->required();
  g->add_option("--out", diag.out_path, "output JSON (default: stdout)");

  evdag::cli::OracleArgs orc;
  std::string orc_score = "nondecomposable";
  auto* o = app.add_subcommand("oracle", "exact posterior by enumeration (p <= 6)");
  o->add_option("--data", orc.data_path, "CSV data file")->required();
  o->add_flag("--header", orc.header, "first CSV line is a header");
  o->add_flag("--standardize", orc.standardize, "z-score columns first");
  o->add_option("--out-prefix", orc.out_prefix, "prefix for orders.csv / dags.csv")->required();
  o->add_option("--score", orc_score, "nondecomposable|decomposable")->capture_default_str();
  add_hyper_flags(o, orc.h);

  CLI11_PARSE(app, argc, argv);

  try {
    if (s->parsed()) {
      if (sim_weights == "uniform") {
        sim.sim.weight_kind = evdag::WeightKind::uniform_signed;
      } else if (sim_weights == "normal") {
        sim.sim.weight_kind = evdag::WeightKind::normal;
      } else {
        throw evdag::ConfigError("--weights must be uniform or normal");
      }
      if (sim_vars == "equal") {
        sim.sim.var_kind = evdag::VarianceKind::equal;
      } else if (sim_vars == "band") {
        sim.sim.var_kind = evdag::VarianceKind::uniform_band;
      } else {
        throw evdag::ConfigError("--variances must be equal or band");
      }
      return evdag::cli::run_simulate(sim);
    }
    if (l->parsed()) {
      const std::map<std::string, evdag::MoveKind> moves{
          {"adjacent", evdag::MoveKind::adjacent},
          {"transposition", evdag::MoveKind::transposition},
          {"shuffle", evdag::MoveKind::shuffle}};
      auto mit = moves.find(learn_move);
      if (mit == moves.end())
        throw evdag::ConfigError("--neighborhood must be adjacent, transposition, or shuffle");
      learn.chain.neighborhood = mit->second;
      if (learn_score == "nondecomposable") {
        learn.chain.score = evdag::ScoreKind::nondecomposable;
      } else if (learn_score == "decomposable") {
        learn.chain.score = evdag::ScoreKind::decomposable;
      } else {
        throw evdag::ConfigError("--score must be nondecomposable or decomposable");
      }
      if (learn_init == "itd") {
        learn.chain.init = evdag::ChainConfig::Init::itd;
      } else if (learn_init == "random") {
        learn.chain.init = evdag::ChainConfig::Init::random;
      } else if (learn_init == "given") {
        learn.chain.init = evdag::ChainConfig::Init::given;
      } else {
        throw evdag::ConfigError("--init must be itd, random, or given");
      }
      return evdag::cli::run_learn(learn);
    }
    if (e->parsed()) {
      if (ev.batch_root.empty() && (ev.truth_path.empty() || ev.pip_path.empty()))
        throw evdag::ConfigError("eval needs --truth and --pip, or --batch-root");
      return evdag::cli::run_eval(ev);
    }
    if (g->parsed()) return evdag::cli::run_diagnose(diag);
    if (o->parsed()) {
      if (orc_score == "nondecomposable") {
        orc.score = evdag::ScoreKind::nondecomposable;
      } else if (orc_score == "decomposable") {
        orc.score = evdag::ScoreKind::decomposable;
      } else {
        throw evdag::ConfigError("--score must be nondecomposable or decomposable");
      }
      return evdag::cli::run_oracle(orc);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
