#include <doctest.h>

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>
#include <coarselab/linalg.hpp>
#include <coarselab/rng.hpp>
#include <coarselab/spectral.hpp>

#include "support/oracles.hpp"

#include <cmath>

using namespace coarselab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix adjacency_matrix(const Adjacency& adj) {
  Matrix a(static_cast<Eigen::Index>(adj.size()), static_cast<Eigen::Index>(adj.size()));
  for (Index i = 0; i < adj.size(); ++i)
    for (Index j = 0; j < adj.size(); ++j) a(i, j) = adj[i][j];
  return a;
}

// Second-smallest Laplacian eigenvalue by bisection on the shifted matrix.
double oracle_gap(const RegularGraph& g) {
  const Matrix lap = static_cast<double>(g.degree()) * Matrix::Identity(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size())) -
                     adjacency_matrix(g.adjacency());
  const Matrix shifted = lap + 1e3 * Matrix::Ones(lap.rows(), lap.cols()) / static_cast<double>(lap.rows());
  return oracle::min_eigenvalue(shifted);
}

}  // namespace

TEST_CASE("laplacian gaps of small graphs") {
  const RegularGraph c4(cycle_graph(4));
  const auto r4 = laplacian_gap(c4);
  CHECK(r4.lambda == doctest::Approx(2.0));
  CHECK(r4.spectrum(0) == doctest::Approx(0.0));
  CHECK(r4.spectrum(3) == doctest::Approx(4.0));
  CHECK(laplacian_gap(RegularGraph(complete_graph(4))).lambda == doctest::Approx(4.0));
  CHECK(laplacian_gap(RegularGraph(cycle_graph(6))).lambda == doctest::Approx(1.0));
  for (std::size_t n : {5, 7, 9, 12}) {
    const RegularGraph g(cycle_graph(n));
    CHECK(laplacian_gap(g).lambda == doctest::Approx(oracle::cycle_gap(n)));
    CHECK(laplacian_gap(g).lambda == doctest::Approx(oracle_gap(g)).epsilon(1e-8));
  }
  const RegularGraph cube(hypercube_graph(4));
  CHECK(laplacian_gap(cube).lambda == doctest::Approx(2.0));
}

TEST_CASE("regular graph validation") {
  CHECK_THROWS_AS(RegularGraph(path_graph(4)), PreconditionError);
  Adjacency two_triangles(6, std::vector<int>(6, 0));
  for (Index b : {0, 3})
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        if (i != j) two_triangles[b + i][b + j] = 1;
  CHECK_THROWS_AS(RegularGraph{two_triangles}, PreconditionError);
  std::vector<std::vector<int>> colors(4, std::vector<int>(4, -1));
  colors[0][1] = colors[1][0] = 0;
  CHECK_THROWS_AS(RegularGraph(cycle_graph(4), colors), PreconditionError);
  const RegularGraph c5(cycle_graph(5));
  CHECK(c5.degree() == 2);
  CHECK(c5.edges().size() == 5);
  CHECK_FALSE(c5.colored());
}

TEST_CASE("poincare inequality") {
  const RegularGraph c4(cycle_graph(4));
  const auto flat = poincare_check(c4, Vector::Constant(4, 3.0));
  CHECK(flat.lhs == doctest::Approx(0.0));
  CHECK(flat.rhs == doctest::Approx(0.0));
  CHECK(flat.holds);
  const auto eq = poincare_check(c4, vec({1, 0, -1, 0}));
  CHECK(eq.lhs == doctest::Approx(2.0));
  CHECK(eq.rhs == doctest::Approx(2.0));
  CHECK(eq.holds);

  Rng rng(13);
  for (const auto& adj : {complete_graph(4), cycle_graph(7), hypercube_graph(3)}) {
    const RegularGraph g(adj);
    const double lambda = laplacian_gap(g).lambda;
    for (int t = 0; t < 1000; ++t) {
      Vector f(static_cast<Eigen::Index>(g.size()));
      for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = rng.normal();
      CHECK(poincare_check(g, f, lambda).holds);
    }
    const auto rep = laplacian_gap(g);
    const auto at = poincare_check(g, rep.eigenvector, rep.lambda);
    CHECK(std::abs(at.lhs - at.rhs) < 1e-8);
  }
}

TEST_CASE("expansion constants against brute force") {
  std::size_t size = 0;
  const auto k4 = expansion_constant(complete_graph(4));
  CHECK(k4.c == doctest::Approx(4.0 / 3.0));
  CHECK(k4.subset.size() == 3);
  CHECK(k4.exact);
  const auto c6 = expansion_constant(cycle_graph(6));
  CHECK(c6.c == doctest::Approx(oracle::brute_expansion(cycle_graph(6), &size)));
  CHECK(c6.c == doctest::Approx(6.0 / 5.0));
  CHECK(c6.subset.size() == size);
  for (const auto& adj : {cycle_graph(9), hypercube_graph(3), tree_graph(2, 2), path_graph(7)})
    CHECK(expansion_constant(adj).c == doctest::Approx(oracle::brute_expansion(adj)));

  Adjacency split(6, std::vector<int>(6, 0));
  for (Index b : {0, 3})
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        if (i != j) split[b + i][b + j] = 1;
  CHECK(expansion_constant(split).c == 0.0);
  CHECK(vertex_boundary(cycle_graph(6), {1, 1, 1, 0, 0, 0}) == 2);
}

TEST_CASE("expansion options") {
  ExpansionOptions sampled;
  sampled.mode = ExpansionOptions::Mode::Sampled;
  CHECK_THROWS_AS(expansion_constant(cycle_graph(8), sampled), PreconditionError);
  sampled.samples = 500;
  sampled.seed = 3;
  const auto s = expansion_constant(cycle_graph(24), sampled);
  CHECK_FALSE(s.exact);
  CHECK(s.evaluated == 500);
  // Arcs minimize the ratio on a cycle, so sampling can only land at or above the arc minimum.
  double arc = 1e300;
  for (double a = 1; a < 24; ++a) arc = std::min(arc, 2.0 / ((1.0 - a / 24.0) * a));
  CHECK(s.c >= arc - 1e-12);
  const auto again = expansion_constant(cycle_graph(24), sampled);
  CHECK(again.c == s.c);
  CHECK_THROWS_AS(expansion_constant(cycle_graph(21)), PreconditionError);
}

TEST_CASE("concentration of edge-bounded embeddings") {
  const RegularGraph c4(cycle_graph(4));
  const auto flat = concentration_test(c4, 2.0, Matrix::Ones(4, 2), 1.0);
  CHECK(flat.inside_stated == 4);
  Matrix f(4, 1);
  f << 1, 0, -1, 0;
  const auto r = concentration_test(c4, 2.0, f, 1.0);
  CHECK(r.radius_stated == doctest::Approx(1.0));
  CHECK(r.inside_stated >= 2);
  CHECK(r.holds_stated());
  CHECK_THROWS_AS(concentration_test(c4, 2.0, 3.0 * f, 1.0), PreconditionError);

  const auto g = random_regular_graph(32, 3, 1);
  const auto spec = laplacian_gap(g);
  Matrix lap = 3.0 * Matrix::Identity(32, 32) - adjacency_matrix(g.adjacency());
  const auto eig = linalg::sym_eigen(lap);
  const Matrix emb = eig.vectors.middleCols(1, 2);
  double c = 0.0;
  for (const auto& [v, w] : g.edges())
    c = std::max(c, (emb.row(static_cast<Eigen::Index>(v)) - emb.row(static_cast<Eigen::Index>(w))).norm());
  const auto rr = concentration_test(g, spec.lambda, emb, c);
  CHECK(rr.required == 16);
  CHECK(rr.holds_markov());
  CHECK(rr.inside_stated >= 16);
}

TEST_CASE("random regular graphs") {
  const auto k4 = random_regular_graph(4, 3, 0);
  CHECK(k4.adjacency() == complete_graph(4));
  const auto g = random_regular_graph(16, 3, 7);
  CHECK(g.degree() == 3);
  CHECK(is_connected(g.adjacency()));
  CHECK(laplacian_gap(g).lambda > 0.0);
  CHECK(random_regular_graph(16, 3, 7).adjacency() == g.adjacency());
  CHECK_THROWS_AS(random_regular_graph(5, 3, 0), PreconditionError);
  CHECK_THROWS_AS(random_regular_graph(3, 3, 0), PreconditionError);
  CHECK_THROWS_AS(random_regular_graph(6, 0, 0), PreconditionError);
}
