#pragma once

#include <utility>
#include <vector>

#include "evdag/common.hpp"
#include "evdag/rng.hpp"

namespace evdag {

// Permutation of node ids kept together with its inverse. perm[pos] is the
// node at that position; pos[node] is where the node sits.
struct Ordering {
  std::vector<int> perm;
  std::vector<int> pos;

  static Ordering identity(int p);
  static Ordering from_perm(std::vector<int> perm);
  int size() const { return static_cast<int>(perm.size()); }
  bool operator==(const Ordering& o) const { return perm == o.perm; }
};

Ordering random_ordering(int p, Philox& rng);

enum class MoveKind { adjacent, transposition, shuffle };

// A proposal on position indices. For adjacent and transposition moves i < j
// and the two positions are swapped; a shuffle removes the element at i and
// reinserts it at j (i != j, either direction), shifting the span between.
struct Move {
  MoveKind kind;
  int i;
  int j;
};

void apply_move(Ordering& sigma, const Move& m);
Move inverse(const Move& m);
// Inclusive position range whose occupants change predecessor sets.
std::pair<int, int> touched_range(const Move& m);
Move sample_move(int p, MoveKind kind, Philox& rng);
// Number of equally likely proposals sample_move draws from.
long move_space_size(int p, MoveKind kind);

// Sorted ids of nodes placed before `node` in sigma.
std::vector<int> potential_parents(const Ordering& sigma, int node);

// Parent-set representation of a DAG; each list sorted ascending.
struct Dag {
  std::vector<std::vector<int>> parents;

  explicit Dag(int p = 0) : parents(p) {}
  int p() const { return static_cast<int>(parents.size()); }
  int edge_count() const;
  bool has_edge(int from, int to) const;
  void add_edge(int from, int to);
  void remove_edge(int from, int to);
  // Edges as (from, to) pairs in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;
  bool operator==(const Dag& o) const { return parents == o.parents; }
};

bool is_consistent(const Dag& g, const Ordering& sigma);
bool is_acyclic(const Dag& g);
// Dense 0/1 adjacency, adj(i, j) = 1 iff i -> j.
Eigen::MatrixXd adjacency(const Dag& g);

}  // namespace evdag
