#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "evdag/dataset.hpp"
#include "evdag/rng.hpp"

using namespace evdag;

namespace {

// Independent residual computation: QR factorization of the raw design block,
// no Gram matrix involved.
double rss_by_qr(const Eigen::MatrixXd& x, int node, const std::vector<int>& parents) {
  if (parents.empty()) return x.col(node).squaredNorm();
  Eigen::MatrixXd xs(x.rows(), parents.size());
  for (std::size_t k = 0; k < parents.size(); ++k) xs.col(k) = x.col(parents[k]);
  Eigen::VectorXd beta = xs.colPivHouseholderQr().solve(x.col(node));
  return (x.col(node) - xs * beta).squaredNorm();
}

Eigen::MatrixXd random_matrix(int n, int p, std::uint64_t seed) {
  Philox g(seed);
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = g.normal();
  return x;
}

std::string temp_path(const char* name) {
  return std::string("/tmp/evdag_test_") + name;
}

}  // namespace

TEST_CASE("hand-computed residuals on a tiny integer matrix") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 0, 1, 1, 0;
  DataMatrix d = make_data(x);
  // Gram = [[2, 2], [2, 5]].
  CHECK(d.gram(0, 0) == 2.0);
  CHECK(d.gram(0, 1) == 2.0);
  CHECK(d.gram(1, 1) == 5.0);
  CHECK(rss(d, 0, {}) == 2.0);
  CHECK(rss(d, 1, {}) == 5.0);
  std::vector<int> s0{0}, s1{1};
  CHECK(rss(d, 1, s0) == doctest::Approx(3.0).epsilon(1e-14));       // 5 - 4/2
  CHECK(rss(d, 0, s1) == doctest::Approx(2.0 - 0.8).epsilon(1e-14)); // 2 - 4/5
}

TEST_CASE("residuals agree with the QR route on random data") {
  Philox pick(99);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 20 + static_cast<int>(pick.uniform_int(40));
    int p = 4 + static_cast<int>(pick.uniform_int(6));
    Eigen::MatrixXd x = random_matrix(n, p, 1000 + rep);
    DataMatrix d = make_data(x);
    int node = static_cast<int>(pick.uniform_int(p));
    std::vector<int> parents;
    for (int v = 0; v < p; ++v)
      if (v != node && pick.uniform01() < 0.5) parents.push_back(v);
    double mine = rss(d, node, parents);
    double ref = rss_by_qr(x, node, parents);
    CHECK(mine == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("residuals shrink weakly along nested parent sets") {
  Eigen::MatrixXd x = random_matrix(60, 8, 7);
  DataMatrix d = make_data(x);
  std::vector<int> parents;
  double prev = rss(d, 0, parents);
  for (int v = 1; v < 8; ++v) {
    parents.push_back(v);
    double cur = rss(d, 0, parents);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("validation of parent sets") {
  DataMatrix d = make_data(random_matrix(10, 4, 8));
  std::vector<int> self{0}, unsorted{2, 1}, dup{1, 1}, oor{4};
  CHECK_THROWS_AS(rss(d, 0, self), ConfigError);
  CHECK_THROWS_AS(rss(d, 0, unsorted), ConfigError);
  CHECK_THROWS_AS(rss(d, 0, dup), ConfigError);
  CHECK_THROWS_AS(rss(d, 0, oor), ConfigError);
}

TEST_CASE("degenerate designs are rejected") {
  Eigen::MatrixXd x = random_matrix(30, 4, 9);
  x.col(2) = x.col(1);  // exact copy
  DataMatrix d = make_data(x);
  std::vector<int> both{1, 2}, one{1};
  CHECK_THROWS_AS(rss(d, 0, both), DegenerateDesignError);
  CHECK_NOTHROW(rss(d, 0, one));
  try {
    rss(d, 0, both);
  } catch (const DegenerateDesignError& e) {
    CHECK(e.node == 0);
    CHECK(e.subset == std::vector<int>{1, 2});
  }
}

TEST_CASE("more parents than observations is an error") {
  DataMatrix d = make_data(random_matrix(4, 6, 10));
  std::vector<int> s{1, 2, 3, 4};
  CHECK_THROWS_AS(rss(d, 0, s), DegenerateDesignError);
}

TEST_CASE("bounds bracket residuals over random parent sets") {
  Eigen::MatrixXd x = random_matrix(80, 6, 11);
  DataMatrix d = make_data(x);
  RssBounds b = rss_bounds(d);
  CHECK(b.fallback_count == 0);
  Philox pick(12);
  for (int j = 0; j < 6; ++j) {
    CHECK(b.upper[j] == d.gram(j, j));
    CHECK(b.lower[j] > 0.0);
    CHECK(b.lower[j] <= b.upper[j]);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<int> parents;
      for (int v = 0; v < 6; ++v)
        if (v != j && pick.uniform01() < 0.5) parents.push_back(v);
      double r = rss(d, j, parents);
      CHECK(r <= b.upper[j] + 1e-9);
      CHECK(r >= b.lower[j] - 1e-9 * b.upper[j]);
    }
  }
}

TEST_CASE("wide data falls back to the floor lower bound") {
  Eigen::MatrixXd x = random_matrix(5, 8, 13);
  DataMatrix d = make_data(x);
  RssBounds b = rss_bounds(d);
  CHECK(b.fallback_count == 8);
  for (int j = 0; j < 8; ++j)
    CHECK(b.lower[j] == doctest::Approx(kLowerFloorRel * b.upper[j]));
}

TEST_CASE("duplicated column falls back only where the solve degenerates") {
  Eigen::MatrixXd x = random_matrix(50, 4, 14);
  x.col(3) = x.col(0);
  DataMatrix d = make_data(x);
  RssBounds b = rss_bounds(d);
  // Full-complement solves all include the duplicate pair.
  CHECK(b.fallback_count == 4);
}

TEST_CASE("csv round trip with and without header") {
  auto path = temp_path("data.csv");
  {
    std::ofstream f(path);
    f << "a,b,c\n1,2.5,3\n4,-1e-2,0.5\n7,8,9\n";
  }
  DataMatrix d = load_matrix(path, true);
  CHECK(d.n() == 3);
  CHECK(d.p() == 3);
  CHECK(d.names == std::vector<std::string>{"a", "b", "c"});
  CHECK(d.x(0, 1) == 2.5);
  CHECK(d.x(1, 1) == -1e-2);
  std::remove(path.c_str());
}

TEST_CASE("csv header rows do not parse as data") {
  auto path = temp_path("hdr.csv");
  {
    std::ofstream f(path);
    f << "a,b\n1,2\n3,4\n";
  }
  CHECK_THROWS_AS(load_matrix(path, false), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("csv errors name the offending cell") {
  auto path = temp_path("bad.csv");
  {
    std::ofstream f(path);
    f << "1,2\n3,nan\n";
  }
  try {
    load_matrix(path, false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  {
    std::ofstream f(path);
    f << "1,2\n3\n";
  }
  try {
    load_matrix(path, false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("too-small matrices are rejected") {
  auto path = temp_path("small.csv");
  {
    std::ofstream f(path);
    f << "1\n2\n";
  }
  CHECK_THROWS(load_matrix(path, false));
  std::remove(path.c_str());
  CHECK_THROWS_AS(make_data(Eigen::MatrixXd::Ones(1, 3)), ConfigError);
}

TEST_CASE("standardization centers and scales") {
  Eigen::MatrixXd x = random_matrix(40, 3, 15);
  x.col(1) *= 10.0;
  x.col(2).array() += 5.0;
  standardize_columns(x);
  for (int j = 0; j < 3; ++j) {
    CHECK(x.col(j).mean() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(x.col(j).squaredNorm() / 39.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  Eigen::MatrixXd constant = Eigen::MatrixXd::Ones(10, 2);
  CHECK_THROWS_AS(standardize_columns(constant), ConfigError);
}
