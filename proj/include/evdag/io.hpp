#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evdag/graph.hpp"
#include "evdag/mcmc.hpp"

namespace evdag {

// Numbers are written with enough digits to round-trip exactly.
std::string format_double(double v);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header = {});
// Plain numeric CSV without header; any rectangular shape.
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Edge list, one "from to" pair per line, 1-based, lexicographic order.
void write_edge_list(const std::string& path, const Dag& g);
Dag read_edge_list(const std::string& path, int p);

// Single line of 1-based node ids separated by spaces.
void write_ordering(const std::string& path, const Ordering& o);
Ordering read_ordering(const std::string& path);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

// One JSON object per line: {"iteration": t, "edges": [[from, to], ...]},
// edges 1-based.
void write_samples_jsonl(const std::string& path, const std::vector<SampleRow>& samples);
std::vector<SampleRow> read_samples_jsonl(const std::string& path, int p);

}  // namespace evdag
