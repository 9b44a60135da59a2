#include "evdag/graph.hpp"

#include <algorithm>
#include <numeric>

namespace evdag {

Ordering Ordering::identity(int p) {
  Ordering o;
  o.perm.resize(p);
  o.pos.resize(p);
  std::iota(o.perm.begin(), o.perm.end(), 0);
  std::iota(o.pos.begin(), o.pos.end(), 0);
  return o;
}

Ordering Ordering::from_perm(std::vector<int> perm) {
  const int p = static_cast<int>(perm.size());
  Ordering o;
  o.pos.assign(p, -1);
  for (int i = 0; i < p; ++i) {
    int v = perm[i];
    if (v < 0 || v >= p || o.pos[v] != -1)
      throw ConfigError("not a permutation of 0.." + std::to_string(p - 1));
    o.pos[v] = i;
  }
  o.perm = std::move(perm);
  return o;
}

Ordering random_ordering(int p, Philox& rng) {
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = p - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
  return Ordering::from_perm(std::move(perm));
}

void apply_move(Ordering& sigma, const Move& m) {
  const int p = sigma.size();
  if (m.i < 0 || m.j < 0 || m.i >= p || m.j >= p || m.i == m.j)
    throw ConfigError("move positions out of range");
  switch (m.kind) {
    case MoveKind::adjacent:
    case MoveKind::transposition: {
      if (m.i >= m.j) throw ConfigError("swap move needs i < j");
      if (m.kind == MoveKind::adjacent && m.j != m.i + 1)
        throw ConfigError("adjacent move needs j = i + 1");
      std::swap(sigma.perm[m.i], sigma.perm[m.j]);
      sigma.pos[sigma.perm[m.i]] = m.i;
      sigma.pos[sigma.perm[m.j]] = m.j;
      break;
    }
    case MoveKind::shuffle: {
      int v = sigma.perm[m.i];
      if (m.i < m.j) {
        for (int k = m.i; k < m.j; ++k) {
          sigma.perm[k] = sigma.perm[k + 1];
          sigma.pos[sigma.perm[k]] = k;
        }
      } else {
        for (int k = m.i; k > m.j; --k) {
          sigma.perm[k] = sigma.perm[k - 1];
          sigma.pos[sigma.perm[k]] = k;
        }
      }
      sigma.perm[m.j] = v;
      sigma.pos[v] = m.j;
      break;
    }
  }
}

Move inverse(const Move& m) {
  if (m.kind == MoveKind::shuffle) return {m.kind, m.j, m.i};
  return m;
}

std::pair<int, int> touched_range(const Move& m) {
  return {std::min(m.i, m.j), std::max(m.i, m.j)};
}

long move_space_size(int p, MoveKind kind) {
  switch (kind) {
    case MoveKind::adjacent:
      return p - 1;
    case MoveKind::transposition:
      return static_cast<long>(p) * (p - 1) / 2;
    case MoveKind::shuffle:
      return static_cast<long>(p) * (p - 1);
  }
  return 0;
}

Move sample_move(int p, MoveKind kind, Philox& rng) {
  if (p < 2) throw ConfigError("sample_move needs p >= 2");
  switch (kind) {
    case MoveKind::adjacent: {
      int i = static_cast<int>(rng.uniform_int(p - 1));
      return {kind, i, i + 1};
    }
    case MoveKind::transposition: {
      long k = rng.uniform_int(move_space_size(p, kind));
      for (int i = 0;; ++i) {
        long row = p - 1 - i;
        if (k < row) return {kind, i, i + 1 + static_cast<int>(k)};
        k -= row;
      }
    }
    case MoveKind::shuffle: {
      long k = rng.uniform_int(move_space_size(p, kind));
      int i = static_cast<int>(k / (p - 1));
      int r = static_cast<int>(k % (p - 1));
      return {kind, i, r >= i ? r + 1 : r};
    }
  }
  throw ConfigError("unknown move kind");
}

std::vector<int> potential_parents(const Ordering& sigma, int node) {
  std::vector<int> out;
  const int mypos = sigma.pos[node];
  out.reserve(mypos);
  for (int v = 0; v < sigma.size(); ++v)
    if (sigma.pos[v] < mypos) out.push_back(v);
  return out;
}

int Dag::edge_count() const {
  int c = 0;
  for (const auto& pa : parents) c += static_cast<int>(pa.size());
  return c;
}

bool Dag::has_edge(int from, int to) const {
  const auto& pa = parents[to];
  return std::binary_search(pa.begin(), pa.end(), from);
}

void Dag::add_edge(int from, int to) {
  auto& pa = parents[to];
  auto it = std::lower_bound(pa.begin(), pa.end(), from);
  if (it != pa.end() && *it == from) throw ConfigError("edge already present");
  pa.insert(it, from);
}

void Dag::remove_edge(int from, int to) {
  auto& pa = parents[to];
  auto it = std::lower_bound(pa.begin(), pa.end(), from);
  if (it == pa.end() || *it != from) throw ConfigError("edge not present");
  pa.erase(it);
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count());
  for (int j = 0; j < p(); ++j)
    for (int i : parents[j]) out.emplace_back(i, j);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_consistent(const Dag& g, const Ordering& sigma) {
  if (g.p() != sigma.size()) return false;
  for (int j = 0; j < g.p(); ++j)
    for (int i : g.parents[j])
      if (sigma.pos[i] >= sigma.pos[j]) return false;
  return true;
}

bool is_acyclic(const Dag& g) {
  const int p = g.p();
  std::vector<int> state(p, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::pair<int, std::size_t>> stack;
  for (int start = 0; start < p; ++start) {
    if (state[start] != 0) continue;
    stack.emplace_back(start, 0);
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < g.parents[v].size()) {
        int u = g.parents[v][idx++];
        if (state[u] == 1) return false;
        if (state[u] == 0) {
          state[u] = 1;
          stack.emplace_back(u, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

Eigen::MatrixXd adjacency(const Dag& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.p(), g.p());
  for (int j = 0; j < g.p(); ++j)
    for (int i : g.parents[j]) a(i, j) = 1.0;
  return a;
}

}  // namespace evdag
