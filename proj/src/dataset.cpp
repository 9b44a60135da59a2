#include "evdag/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace evdag {

DataMatrix make_data(Eigen::MatrixXd x, std::vector<std::string> names) {
  if (x.rows() < 2 || x.cols() < 2)
    throw ConfigError("data matrix needs at least 2 rows and 2 columns, got " +
                      std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  if (!names.empty() && static_cast<int>(names.size()) != x.cols())
    throw ConfigError("column name count does not match column count");
  if (!x.allFinite()) throw ConfigError("data matrix contains non-finite entries");
  DataMatrix d;
  d.gram = x.transpose() * x;
  d.x = std::move(x);
  d.names = std::move(names);
  return d;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, int row, int col) {
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
  double v = 0.0;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": cannot parse '" + cell + "' as a number");
  if (!std::isfinite(v))
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": non-finite value '" + cell + "'");
  return v;
}

}  // namespace

DataMatrix load_matrix(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    auto cells = split_csv_line(line);
    if (lineno == 1 && has_header) {
      names.assign(cells.begin(), cells.end());
      ncols = cells.size();
      continue;
    }
    if (ncols == 0) ncols = cells.size();
    if (cells.size() != ncols)
      throw ParseError("row " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(ncols));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      row[c] = parse_cell(cells[c], lineno, static_cast<int>(c) + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("'" + path + "' has no data rows");
  Eigen::MatrixXd x(rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ncols; ++c) x(r, c) = rows[r][c];
  return make_data(std::move(x), std::move(names));
}

void standardize_columns(Eigen::MatrixXd& x) {
  const auto n = x.rows();
  if (n < 2) throw ConfigError("standardization needs at least 2 rows");
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(n - 1));
    if (sd == 0.0)
      throw ConfigError("column " + std::to_string(j + 1) + " is constant; cannot standardize");
    x.col(j) /= sd;
  }
}

double rss(const DataMatrix& d, int node, std::span<const int> parents) {
  const int p = d.p();
  if (node < 0 || node >= p) throw ConfigError("rss: node index out of range");
  const int s = static_cast<int>(parents.size());
  for (int k = 0; k < s; ++k) {
    int v = parents[k];
    if (v < 0 || v >= p) throw ConfigError("rss: parent index out of range");
    if (v == node)
      throw ConfigError("rss: parent set contains the node itself (node " +
                        std::to_string(node) + ")");
    if (k > 0 && parents[k - 1] >= v) throw ConfigError("rss: parent set not sorted/unique");
  }
  if (s >= d.n())
    throw DegenerateDesignError("rss: node " + std::to_string(node) + " with " +
                                    std::to_string(s) + " parents but only " +
                                    std::to_string(d.n()) + " observations",
                                node, std::vector<int>(parents.begin(), parents.end()));
  const double diag = d.gram(node, node);
  if (s == 0) return diag;

  Eigen::MatrixXd gss(s, s);
  Eigen::VectorXd g(s);
  for (int a = 0; a < s; ++a) {
    g[a] = d.gram(parents[a], node);
    for (int b = 0; b < s; ++b) gss(a, b) = d.gram(parents[a], parents[b]);
  }
  double max_diag = gss.diagonal().maxCoeff();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gss);
  bool bad = max_diag <= 0.0 || ldlt.info() != Eigen::Success ||
             ldlt.vectorD().minCoeff() < kPivotRelTol * max_diag;
  if (bad)
    throw DegenerateDesignError(
        "rss: Gram submatrix for node " + std::to_string(node) + ", parents {" +
            join_ints(parents, ',') + "} is numerically singular",
        node, std::vector<int>(parents.begin(), parents.end()));
  double fit = g.dot(ldlt.solve(g));
  double r = diag - fit;
  return r > 0.0 ? r : 0.0;
}

RssBounds rss_bounds(const DataMatrix& d) {
  const int p = d.p();
  RssBounds b;
  b.upper = d.gram.diagonal();
  b.lower.resize(p);
  for (int j = 0; j < p; ++j)
    if (b.upper[j] <= 0.0)
      throw DegenerateDesignError("rss_bounds: column " + std::to_string(j) + " has zero norm",
                                  j, {});
  std::vector<int> rest(p - 1);
  for (int j = 0; j < p; ++j) {
    double floor = kLowerFloorRel * b.upper[j];
    double lo = -1.0;
    if (p < d.n()) {
      int k = 0;
      for (int v = 0; v < p; ++v)
        if (v != j) rest[k++] = v;
      try {
        lo = rss(d, j, rest);
      } catch (const DegenerateDesignError&) {
        lo = -1.0;
      }
    }
    if (lo <= 0.0) {
      b.lower[j] = floor;
      ++b.fallback_count;
    } else {
      b.lower[j] = lo;
    }
  }
  if (b.fallback_count > 0)
    log_warn("rss_bounds: lower-bound floor used for " + std::to_string(b.fallback_count) +
             " of " + std::to_string(p) + " nodes");
  return b;
}

}  // namespace evdag
