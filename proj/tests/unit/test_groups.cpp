#include <doctest.h>

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>
#include <coarselab/groups.hpp>

#include "support/oracles.hpp"

#include <algorithm>
#include <numeric>

using namespace coarselab;

namespace {

std::vector<std::vector<Index>> cyclic_table(std::size_t n) {
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("g" + std::to_string(i));
  return v;
}

// Breadth-first word lengths computed directly from the table.
std::vector<int> bfs_lengths(const FiniteGroup& g) {
  std::vector<int> len(g.size(), -1);
  std::vector<Index> frontier{g.identity()};
  len[g.identity()] = 0;
  while (!frontier.empty()) {
    std::vector<Index> next;
    for (Index a : frontier)
      for (Index s : g.generators()) {
        const Index b = g.table()[a][s];
        if (len[b] < 0) {
          len[b] = len[a] + 1;
          next.push_back(b);
        }
      }
    frontier = std::move(next);
  }
  return len;
}

}  // namespace

TEST_CASE("group axioms are checked") {
  CHECK_NOTHROW(FiniteGroup(names(3), cyclic_table(3), {1, 2}));
  const std::vector<std::vector<Index>> loop{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK_THROWS_AS(FiniteGroup(names(5), loop, {1, 2, 3, 4}), InvariantError);
  CHECK_THROWS_AS(FiniteGroup(names(3), {{0, 1, 2}, {1, 1, 0}, {2, 0, 1}}, {1, 2}), InvariantError);
  CHECK_THROWS_AS(FiniteGroup(names(3), cyclic_table(3), {1}), PreconditionError);
  CHECK_THROWS_AS(FiniteGroup(names(3), cyclic_table(3), {0, 1, 2}), PreconditionError);
  CHECK_THROWS_AS(FiniteGroup(names(4), cyclic_table(4), {2}), PreconditionError);
  CHECK_THROWS_AS(FiniteGroup(names(3), cyclic_table(3), {1, 2}, std::vector<int>{0, 0, 1}), InvariantError);
  CHECK_THROWS_AS(FiniteGroup(names(3), cyclic_table(3), {1, 2}, std::vector<int>{0, 1, 2}), InvariantError);
  CHECK_THROWS_AS(FiniteGroup(names(4), cyclic_table(4), {1, 3}, std::vector<int>{0, 1, 5, 1}), InvariantError);
}

TEST_CASE("user lengths without a generating set") {
  const FiniteGroup g(names(4), cyclic_table(4), {2}, std::vector<int>{0, 1, 1, 1});
  CHECK(g.user_lengths());
  CHECK_FALSE(g.generates());
  CHECK(length_metric(g).d(0, 3) == 1.0);
  CHECK_THROWS_AS(cayley_metric(g), PreconditionError);
  const auto w = word_lengths(g);
  CHECK_FALSE(w[1].has_value());
  CHECK(w[2] == 1);
}

TEST_CASE("cayley metrics") {
  const auto z4 = cayley_metric(cyclic_group(4));
  CHECK(z4.d(0, 2) == 2.0);
  CHECK(z4.dist() == graph_metric(cycle_graph(4)).dist());
  const auto sq = cayley_metric(z2_power(2));
  CHECK(sq.d(0, 3) == 2.0);
  CHECK(sq.d(1, 2) == 2.0);
  CHECK(sq.d(0, 1) == 1.0);
  for (const auto& g : {cyclic_group(12), dihedral_group(8), z2_power(5), direct_product(cyclic_group(3), cyclic_group(4)),
                        direct_power(cyclic_group(3), 3)}) {
    CHECK(g.size() <= 32);
    const auto m = cayley_metric(g);
    const auto len = bfs_lengths(g);
    for (Index a = 0; a < g.size(); ++a) {
      CHECK(m.d(a, a) == 0.0);
      CHECK(g.length(a) == len[a]);
      for (Index x = 0; x < g.size(); ++x)
        for (Index y = 0; y < g.size(); ++y) CHECK(m.d(g.mul(a, x), g.mul(a, y)) == m.d(x, y));
    }
  }
}

TEST_CASE("named constructions") {
  const auto d4 = dihedral_group(4);
  CHECK(d4.size() == 8);
  CHECK(d4.element(0) == "e");
  CHECK(d4.find("s").has_value());
  const Index s = *d4.find("s"), r = *d4.find("r1");
  CHECK(d4.mul(s, s) == d4.identity());
  CHECK(d4.mul(d4.mul(s, r), s) == d4.inv(r));
  CHECK(z2_power(3).element(5) == "101");
  const auto p = direct_power(cyclic_group(2), 2);
  CHECK(p.element(1) == "(0,1)");
  CHECK(direct_power(cyclic_group(5), 1).size() == 5);
  CHECK(cyclic_group(2).generators().size() == 1);
  CHECK(cyclic_group(1).size() == 1);
  CHECK(cyclic_group(7).ball(2).size() == 5);
}

TEST_CASE("cayley graphs carry one colour per generator") {
  const auto g = cayley_graph(cyclic_group(5));
  CHECK(g.colored());
  CHECK(g.color_count() == 2);
  CHECK(g.degree() == 2);
  CHECK_THROWS_AS(cayley_graph(cyclic_group(1)), PreconditionError);
}

TEST_CASE("subgroups and normality") {
  const auto d3 = dihedral_group(3);
  const Index s = *d3.find("s");
  const auto h = generated_subgroup(d3, {s});
  CHECK(h.size() == 2);
  CHECK(is_subgroup(d3, h));
  CHECK_FALSE(is_normal(d3, h));
  const auto rot = generated_subgroup(d3, {*d3.find("r1")});
  CHECK(rot.size() == 3);
  CHECK(is_normal(d3, rot));
  CHECK_FALSE(is_subgroup(d3, {0, s, *d3.find("r1")}));
  CHECK_THROWS_AS(quotient(d3, h), PreconditionError);
  CHECK_THROWS_AS(quotient(d3, {s}), PreconditionError);
}

TEST_CASE("quotient metrics minimize over lifts") {
  const auto z4 = cyclic_group(4);
  const auto two = quotient_metric(z4, {0, 2});
  CHECK(two.size() == 2);
  CHECK(two.d(0, 1) == 1.0);

  const auto z8 = cyclic_group(8);
  const auto q = quotient(z8, {0, 4});
  CHECK(q.space.d(q.projection[0], q.projection[2]) == 2.0);
  CHECK(q.group.size() == 4);

  const auto same = quotient_metric(z8, {0});
  CHECK(same.dist() == cayley_metric(z8).dist());

  for (const auto& [g, k] : {std::pair{dihedral_group(6), std::vector<Index>{}}, std::pair{cyclic_group(12), std::vector<Index>{0, 4, 8}},
                             std::pair{z2_power(4), std::vector<Index>{0, 3}}}) {
    auto kernel = k.empty() ? generated_subgroup(g, {*g.find("r3")}) : k;
    const auto qq = quotient(g, kernel);
    const auto big = cayley_metric(g);
    for (Index a = 0; a < g.size(); ++a)
      for (Index b = 0; b < g.size(); ++b) {
        double best = 1e300;
        for (Index x = 0; x < g.size(); ++x)
          for (Index y = 0; y < g.size(); ++y)
            if (qq.projection[x] == qq.projection[a] && qq.projection[y] == qq.projection[b]) best = std::min(best, big.d(x, y));
        CHECK(qq.space.d(qq.projection[a], qq.projection[b]) == best);
        CHECK(qq.space.d(qq.projection[a], qq.projection[b]) <= big.d(a, b));
      }
  }
}

TEST_CASE("box spaces from quotient chains") {
  const QuotientChain chain(cyclic_group(8), {{0, 2, 4, 6}, {0, 4}});
  const auto box = box_space(chain);
  CHECK(box.blocks.size() == 2);
  CHECK(box.blocks[0].space.size() == 2);
  CHECK(box.blocks[1].space.size() == 4);
  CHECK(box.space.size() == 6);
  CHECK(box.offsets == std::vector<std::size_t>{0, 2});
  for (Index x = 0; x < 2; ++x)
    for (Index y = 2; y < 6; ++y) CHECK(box.space.d(x, y) >= 3.0);
  CHECK(box.space.d(2, 4) == 2.0);

  const auto single = box_space(QuotientChain(cyclic_group(6), {{0, 3}}));
  CHECK(single.space.dist() == quotient_metric(cyclic_group(6), {0, 3}).dist());

  CHECK_THROWS_AS(QuotientChain(cyclic_group(8), {}), PreconditionError);
  CHECK_THROWS_AS(QuotientChain(cyclic_group(8), {{0, 4}, {0, 2, 4, 6}}), PreconditionError);
  CHECK_THROWS_AS(QuotientChain(dihedral_group(3), {{0, 3}}), PreconditionError);
  const auto dy = dyadic_chain(3);
  CHECK(dy.size() == 3);
  CHECK(dy.intersection() == std::vector<Index>{0});
}

TEST_CASE("box kernel from the identity and constant functions") {
  const auto box = box_space(dyadic_chain(3));
  std::vector<double> delta(8, 0.0);
  delta[0] = 1.0;
  const auto id = box_kernel(box, delta);
  CHECK(id.first_isometric == 0);
  CHECK(id.witness.k.isApprox(Matrix::Identity(14, 14)));
  const Matrix ones = Matrix::Ones(14, 14);
  for (std::size_t b = 0; b < 3; ++b) {
    const auto psi = box_function(box, ones, b);
    for (double v : psi) CHECK(v == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(box_function(box, ones, 3), PreconditionError);
}

TEST_CASE("triangle bump on dyadic boxes") {
  for (std::size_t k = 3; k <= 5; ++k) {
    const std::size_t n = std::size_t{1} << k;
    std::vector<double> phi(n, 0.0);
    phi[0] = 1.0;
    phi[1] = phi[n - 1] = 2.0 / 3.0;
    phi[2] = phi[n - 2] = 1.0 / 3.0;
    const auto box = box_space(dyadic_chain(k));
    const auto bk = box_kernel(box, phi);
    CHECK(bk.first_isometric == 2);
    CHECK(bk.support_radius == 2.0);
    const auto rep = measure_witness(bk.witness, box.space, 1.0);
    CHECK(rep.valid);
    CHECK(rep.eps_measured == doctest::Approx(1.0 / 3.0));
    CHECK(rep.S_measured <= 2.0);
    CHECK(oracle::min_eigenvalue(bk.witness.k) >= -1e-9);
    const auto last = box_function(box, bk.witness.k, k - 1);
    for (Index g = 0; g < n; ++g) CHECK(last[g] == doctest::Approx(phi[g]));
  }
  std::vector<double> phi{1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 3.0, 2.0 / 3.0};
  const QuotientChain shallow(cyclic_group(8), {{0, 2, 4, 6}, {0, 4}});
  CHECK_THROWS_AS(box_kernel(box_space(shallow), phi), PreconditionError);
  std::vector<double> asym{1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(box_kernel(box_space(dyadic_chain(3)), asym), PreconditionError);
}

TEST_CASE("isometry radius of quotient maps") {
  const auto z8 = cyclic_group(8);
  const auto q = quotient(z8, {0, 4});
  CHECK(isometric_on_ball(z8, q, 1.0));
  CHECK_FALSE(isometric_on_ball(z8, q, 2.0));
}

TEST_CASE("hypercube space over Z2") {
  const auto space = hypercube_space(cyclic_group(2), 3);
  CHECK(space.size() == 2 + 4 + 8);
  CHECK(space.d(2, 5) == 2.0);
  auto gap = [&](Index lo1, Index hi1, Index lo2, Index hi2) {
    double best = 1e300;
    for (Index x = lo1; x < hi1; ++x)
      for (Index y = lo2; y < hi2; ++y) best = std::min(best, space.d(x, y));
    return best;
  };
  CHECK(gap(0, 2, 2, 6) == 2.0);
  CHECK(gap(2, 6, 6, 14) == 3.0);
  CHECK(gap(0, 2, 6, 14) == 5.0);
  const auto adj = hypercube_graph(3);
  const auto hops = oracle::hop_distances(adj);
  for (Index x = 0; x < 8; ++x)
    for (Index y = 0; y < 8; ++y) CHECK(space.d(6 + x, 6 + y) == static_cast<double>(hops[x][y]));
  CHECK_THROWS_AS(hypercube_space(cyclic_group(2), 0), PreconditionError);
}
