#include "evdag/common.hpp"

#include <iostream>
#include <sstream>

namespace evdag {

void log_warn(const std::string& msg) { std::cerr << "[warn] " << msg << "\n"; }

double kahan_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double kahan_sum(const Eigen::VectorXd& values) {
  return kahan_sum(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

double kahan_sum_except(const Eigen::VectorXd& values, int skip) {
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < values.size(); ++i) {
    if (i == skip) continue;
    double y = values[i] - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double kahan_sum_with(const Eigen::VectorXd& values, int replace_at, double replacement) {
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < values.size(); ++i) {
    double v = (i == replace_at) ? replacement : values[i];
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::string join_ints(std::span<const int> v, char sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

}  // namespace evdag
