#include "evdag/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace evdag {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write '" + path + "'");
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return f;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
  auto f = open_out(path);
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != m.cols())
      throw ConfigError("header size does not match column count");
    for (std::size_t j = 0; j < header.size(); ++j)
      f << (j ? "," : "") << header[j];
    f << "\n";
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      f << (c ? "," : "") << format_double(m(r, c));
    f << "\n";
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto f = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::string cell;
    std::istringstream ls(line);
    int col = 0;
    while (std::getline(ls, cell, ',')) {
      ++col;
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      std::size_t head = cell.find_first_not_of(" \t");
      if (head == std::string::npos) head = cell.size();
      double v = 0.0;
      auto res = std::from_chars(cell.data() + head, cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw ParseError(path + ": row " + std::to_string(lineno) + ", column " +
                         std::to_string(col) + ": cannot parse '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError(path + ": row " + std::to_string(lineno) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(rows[0].size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty matrix");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[0].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_edge_list(const std::string& path, const Dag& g) {
  auto f = open_out(path);
  for (const auto& [i, j] : g.edges()) f << (i + 1) << " " << (j + 1) << "\n";
}

Dag read_edge_list(const std::string& path, int p) {
  auto f = open_in(path);
  Dag g(p);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::istringstream ls(line);
    long a, b;
    if (!(ls >> a)) continue;  // blank line
    std::string extra;
    if (!(ls >> b) || (ls >> extra))
      throw ParseError(path + ": line " + std::to_string(lineno) +
                       ": expected 'from to' pair");
    if (a < 1 || a > p || b < 1 || b > p || a == b)
      throw ParseError(path + ": line " + std::to_string(lineno) + ": edge " +
                       std::to_string(a) + " -> " + std::to_string(b) +
                       " out of range for p = " + std::to_string(p));
    if (g.has_edge(static_cast<int>(a) - 1, static_cast<int>(b) - 1))
      throw ParseError(path + ": line " + std::to_string(lineno) + ": duplicate edge");
    g.add_edge(static_cast<int>(a) - 1, static_cast<int>(b) - 1);
  }
  if (!is_acyclic(g)) throw ParseError(path + ": edge list contains a cycle");
  return g;
}

void write_ordering(const std::string& path, const Ordering& o) {
  auto f = open_out(path);
  for (int i = 0; i < o.size(); ++i) f << (i ? " " : "") << (o.perm[i] + 1);
  f << "\n";
}

Ordering read_ordering(const std::string& path) {
  auto f = open_in(path);
  std::vector<int> perm;
  long v;
  while (f >> v) perm.push_back(static_cast<int>(v) - 1);
  if (perm.empty()) throw ParseError(path + ": empty ordering");
  try {
    return Ordering::from_perm(std::move(perm));
  } catch (const ConfigError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  auto f = open_out(path);
  f << "iteration,log_score,accepted,nodewise_count,effective_cum\n";
  for (const auto& r : trace)
    f << r.iteration << "," << format_double(r.log_score) << "," << (r.accepted ? 1 : 0) << ","
      << r.nodewise_count << "," << r.effective_cum << "\n";
}

void write_samples_jsonl(const std::string& path, const std::vector<SampleRow>& samples) {
  auto f = open_out(path);
  for (const auto& s : samples) {
    nlohmann::json row;
    row["iteration"] = s.iteration;
    auto edges = nlohmann::json::array();
    for (const auto& [i, j] : s.dag.edges()) edges.push_back({i + 1, j + 1});
    row["edges"] = std::move(edges);
    f << row.dump() << "\n";
  }
}

std::vector<SampleRow> read_samples_jsonl(const std::string& path, int p) {
  auto f = open_in(path);
  std::vector<SampleRow> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
    SampleRow s;
    s.iteration = row.value("iteration", 0L);
    s.dag = Dag(p);
    if (!row.contains("edges") || !row["edges"].is_array())
      throw ParseError(path + ": line " + std::to_string(lineno) + ": missing edges array");
    for (const auto& e : row["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw ParseError(path + ": line " + std::to_string(lineno) + ": bad edge entry");
      long a = e[0].get<long>(), b = e[1].get<long>();
      if (a < 1 || a > p || b < 1 || b > p || a == b)
        throw ParseError(path + ": line " + std::to_string(lineno) + ": edge out of range");
      s.dag.add_edge(static_cast<int>(a) - 1, static_cast<int>(b) - 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace evdag
