#pragma once

#include <string>
#include <vector>

#include "evdag/io.hpp"
#include "evdag/simulate.hpp"

namespace evdag::cli {

struct SimulateArgs {
  std::string out_dir;
  SimConfig sim;
  std::uint64_t seed = 1;
  int replicates = 1;
  std::vector<double> sweep_band;  // when nonempty, one subdirectory per band value
  bool relabel = false;            // random node relabeling after generation
};

struct LearnArgs {
  std::string data_path;
  bool header = false;
  bool standardize = false;
  std::string out_dir;
  Hyperparams h;
  ChainConfig chain;
  std::string init_order_path;  // read when chain.init == given
  int chains = 1;
  int jobs = 1;
  double threshold = 0.5;
};

struct EvalArgs {
  std::string truth_path;
  std::string pip_path;
  double threshold = -1.0;  // < 0 scores the probabilities as they are
  std::string out_path;
  std::string batch_root;   // when nonempty, aggregate over its rep_* subdirectories
  std::string truth_rel = "truth_edges.txt";
  std::string pip_rel = "pip.csv";
};

struct DiagnoseArgs {
  std::vector<std::string> sample_paths;
  int p = 0;
  std::string out_path;
};

struct OracleArgs {
  std::string data_path;
  bool header = false;
  bool standardize = false;
  Hyperparams h;
  ScoreKind score = ScoreKind::nondecomposable;
  std::string out_prefix;
};

int run_simulate(const SimulateArgs& a);
int run_learn(const LearnArgs& a);
int run_eval(const EvalArgs& a);
int run_diagnose(const DiagnoseArgs& a);
int run_oracle(const OracleArgs& a);

}  // namespace evdag::cli
