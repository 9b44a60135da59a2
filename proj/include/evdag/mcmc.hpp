#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evdag/evaluate.hpp"
#include "evdag/selection.hpp"
#include "evdag/topdown.hpp"

namespace evdag {

struct ChainConfig {
  long iterations = 3000;
  long burn_in = -1;  // -1 resolves to iterations / 2
  MoveKind neighborhood = MoveKind::transposition;
  ScoreKind score = ScoreKind::nondecomposable;
  enum class Init { itd, random, given };
  Init init = Init::itd;
  std::vector<int> given_order;  // used when init == given
  std::uint64_t seed = 0;
  long thin = 0;             // keep every thin-th post-burn-in DAG; 0 keeps none
  long effective_budget = 0; // stop once the cumulative selection count reaches this; 0 = off
  int max_outer = 20;        // warm-start sweep cap
};

long resolve_burn_in(const ChainConfig& cfg);

struct TraceRow {
  long iteration = 0;
  double log_score = 0.0;
  bool accepted = false;
  int nodewise_count = 0;   // selections performed for this proposal
  long effective_cum = 0;   // running total of nodewise_count
};

struct SampleRow {
  long iteration = 0;
  Dag dag;
};

struct ChainOutput {
  Ordering final_ordering;
  Dag final_dag;
  double final_log_score = 0.0;
  Eigen::MatrixXd pip;  // mean of the per-iteration edge-probability matrices after burn-in
  std::vector<TraceRow> trace;
  std::vector<SampleRow> samples;
  long effective_iterations = 0;
  long rb_skipped = 0;  // edge probabilities zeroed by degenerate solves
  Ordering initial_ordering;
};

// Edge-probability matrix of one (ordering, DAG) state: entry (i, j) compares
// the scores with the edge i -> j forced in and forced out, for each i placed
// before j; other entries are 0. The in-degree cap does not apply here.
// Degenerate solves zero the entry and bump *skipped.
Eigen::MatrixXd rb_matrix(const ScoreModel& m, SelectionCache& cache, const Ordering& sigma,
                          const Dag& dag, const ScoreState& state, long* skipped = nullptr);

// Random-walk Metropolis over orderings scored by their best consistent DAG.
// Proposals are uniform on the chosen neighborhood and symmetric, so the
// acceptance ratio is the score difference alone. Deterministic for a fixed
// config and dataset.
ChainOutput run_chain(const DataMatrix& data, const Hyperparams& h, const ChainConfig& cfg);

struct MultiChainRun {
  std::vector<std::optional<ChainOutput>> outputs;  // index = chain id
  std::vector<std::pair<int, std::string>> failures;
};

// Runs n_chains chains with per-chain seeds cfg.seed + chain id, up to `jobs`
// at a time. A failing chain records its error and does not disturb siblings.
MultiChainRun run_multichain(const DataMatrix& data, const Hyperparams& h,
                             const ChainConfig& cfg, int n_chains, int jobs = 1);

}  // namespace evdag
