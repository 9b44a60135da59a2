#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evdag/common.hpp"

namespace evdag {

// Observation matrix plus its precomputed Gram matrix. All residual sums of
// squares are solved on Gram submatrices, so costs after construction depend
// on p, not n.
struct DataMatrix {
  Eigen::MatrixXd x;     // n rows (observations) by p columns (nodes)
  Eigen::MatrixXd gram;  // x^T x
  std::vector<std::string> names;  // empty, or one per column

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }
};

DataMatrix make_data(Eigen::MatrixXd x, std::vector<std::string> names = {});

// Reads a comma-separated numeric file, one observation per row.
DataMatrix load_matrix(const std::string& path, bool has_header);

// In-place column z-scoring (mean 0, unit sample variance).
void standardize_columns(Eigen::MatrixXd& x);

// Residual sum of squares of column `node` regressed (through the origin) on
// the columns in `parents`, which must be sorted, unique, in range, and not
// contain `node`. Solved as gram(node,node) - g^T G_SS^{-1} g via a pivoted
// LDLT of the Gram submatrix; a pivot below 1e-10 times the largest diagonal
// entry, or |parents| >= n, raises DegenerateDesignError.
double rss(const DataMatrix& d, int node, std::span<const int> parents);

struct RssBounds {
  Eigen::VectorXd lower;  // rss against all other columns (or fallback floor)
  Eigen::VectorXd upper;  // rss against the empty set (gram diagonal)
  int fallback_count = 0; // nodes whose lower bound used the floor
};

// Per-node extremes of rss over parent sets. When p >= n or the full
// complement solve degenerates, the lower bound falls back to 1e-8 times the
// upper bound; fallbacks are counted and logged.
RssBounds rss_bounds(const DataMatrix& d);

constexpr double kPivotRelTol = 1e-10;
constexpr double kLowerFloorRel = 1e-8;

}  // namespace evdag
