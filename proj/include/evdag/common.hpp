#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace evdag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV cell, edge list line, config field).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Gram submatrix not numerically positive definite, or |S| >= n.
class DegenerateDesignError : public Error {
 public:
  DegenerateDesignError(std::string msg, int node, std::vector<int> subset)
      : Error(std::move(msg)), node(node), subset(std::move(subset)) {}
  int node;
  std::vector<int> subset;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

void log_warn(const std::string& msg);

// Compensated (Kahan) sum in index order. Every total that feeds a score is
// produced by this routine so independently computed states agree bitwise.
double kahan_sum(std::span<const double> values);
double kahan_sum(const Eigen::VectorXd& values);
// Same sum with values[skip] excluded.
double kahan_sum_except(const Eigen::VectorXd& values, int skip);
// Same sum with values[replace_at] replaced by replacement.
double kahan_sum_with(const Eigen::VectorXd& values, int replace_at, double replacement);

std::string join_ints(std::span<const int> v, char sep = ' ');

}  // namespace evdag
