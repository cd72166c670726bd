#include <doctest.h>

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>
#include <coarselab/metric.hpp>

#include "support/oracles.hpp"

using namespace coarselab;

namespace {

FiniteMetricSpace segment(std::size_t n) { return graph_metric(path_graph(n)); }

FiniteMetricSpace two_points(double d) {
  Matrix m(2, 2);
  m << 0, d, d, 0;
  return FiniteMetricSpace(m);
}

}  // namespace

TEST_CASE("graph metric matches hop counts on small graphs") {
  for (const auto& adj : {path_graph(3), cycle_graph(4), complete_graph(3), tree_graph(2, 3), hypercube_graph(3),
                          cycle_graph(9)}) {
    const auto space = graph_metric(adj);
    const auto hops = oracle::hop_distances(adj);
    for (Index i = 0; i < adj.size(); ++i)
      for (Index j = 0; j < adj.size(); ++j) CHECK(space.d(i, j) == static_cast<double>(hops[i][j]));
    CHECK(space.integral());
  }
  CHECK(graph_metric(path_graph(3)).d(0, 2) == 2);
  CHECK(graph_metric(cycle_graph(4)).d(0, 2) == 2);
  const auto k3 = graph_metric(complete_graph(3));
  CHECK(k3.d(0, 1) == 1);
  CHECK(k3.d(1, 2) == 1);
}

TEST_CASE("disconnected graph is rejected with both points named") {
  Adjacency adj{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  CHECK_FALSE(is_connected(adj));
  try {
    graph_metric(adj);
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("0") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
}

TEST_CASE("malformed adjacency is rejected") {
  CHECK_THROWS_AS(validate_adjacency({{0, 1}, {0, 0}}), PreconditionError);
  CHECK_THROWS_AS(validate_adjacency({{1, 0}, {0, 0}}), PreconditionError);
  CHECK_THROWS_AS(validate_adjacency({{0, 1}}), PreconditionError);
}

TEST_CASE("metric axioms are enforced by the constructor") {
  Matrix asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{asym}, InvariantError);
  Matrix zero(2, 2);
  zero << 0, 0, 0, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{zero}, InvariantError);
  Matrix tri(3, 3);
  tri << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{tri}, InvariantError);
  Matrix diag(2, 2);
  diag << 1, 1, 1, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{diag}, InvariantError);
  CHECK(two_points(0.5).d(0, 1) == 0.5);
}

TEST_CASE("lp products") {
  const auto bit = two_points(1.0);
  const auto l1 = lp_product(bit, bit, 1.0);
  CHECK(l1.size() == 4);
  CHECK(l1.d(0, 3) == 2);
  const auto linf = lp_product(bit, bit, std::numeric_limits<double>::infinity());
  CHECK(linf.d(0, 3) == 1);
  const auto seg = segment(3);
  const auto grid = lp_product(seg, seg, 1.0);
  // (0,0) -> (2,1): x-major index 2*3 + 1
  CHECK(grid.d(0, 7) == 3);
  CHECK(grid.id(7) == "(2,1)");
  const auto l2 = lp_product(seg, seg, 2.0);
  CHECK(l2.d(0, 7) == doctest::Approx(std::sqrt(5.0)));
  for (double p : {1.0, 1.5, 2.0, 3.0})
    for (Index a = 0; a < 9; ++a)
      for (Index b = 0; b < 9; ++b) {
        const double dx = seg.d(a / 3, b / 3), dy = seg.d(a % 3, b % 3);
        CHECK(lp_product(seg, seg, p).d(a, b) >= std::max(dx, dy) - 1e-12);
      }
  CHECK_THROWS_AS(lp_product(seg, seg, 0.5), PreconditionError);
}

TEST_CASE("separated unions") {
  const auto k2 = two_points(1.0);
  const auto single = separated_union({k2});
  CHECK(single.d(0, 1) == 1);
  const auto two = separated_union({k2, k2});
  CHECK(two.d(0, 2) == 2);
  CHECK(two.d(1, 3) == 2);
  CHECK(two.d(2, 3) == 1);
  CHECK(two.blocks() == std::vector<int>{0, 0, 1, 1});
  const auto nowak = separated_union({k2, k2, k2}, GapPolicy::Nowak);
  CHECK(nowak.d(0, 2) == 2);
  CHECK(nowak.d(2, 4) == 3);
  CHECK(nowak.d(0, 4) == 5);
  CHECK(union_gap(GapPolicy::MaxDiamPlusOne, {1.0, 4.0}, 0, 1) == 5);
  CHECK_THROWS_AS(separated_union({}), PreconditionError);
  // Blocks too wide for the additive gaps break the triangle inequality.
  CHECK_THROWS_AS(separated_union({segment(8), segment(8)}, GapPolicy::Nowak), PreconditionError);
}

TEST_CASE("greedy nets") {
  const auto seg = segment(5);
  CHECK(net_extract(seg, 1.0).indices == std::vector<Index>{0, 1, 2, 3, 4});
  const auto net = net_extract(seg, 2.0);
  CHECK(net.indices == std::vector<Index>{0, 2, 4});
  CHECK(net_extract(net.space, 2.0).indices == std::vector<Index>{0, 1, 2});
  CHECK(net_extract(two_points(0.5), 1.0).indices == std::vector<Index>{0});
  const auto c9 = graph_metric(cycle_graph(9));
  const auto n3 = net_extract(c9, 3.0);
  for (Index x = 0; x < c9.size(); ++x) {
    double nearest = 1e9;
    for (Index y : n3.indices) nearest = std::min(nearest, c9.d(x, y));
    CHECK(nearest < 3.0);
  }
  CHECK_THROWS_AS(net_extract(seg, 0.0), PreconditionError);
}

TEST_CASE("compression profiles") {
  const auto seg = segment(5);
  const auto id = compression_profile(PointMap::into_space(seg, seg, {0, 1, 2, 3, 4}));
  REQUIRE(id.bins.size() == 4);
  for (const auto& b : id.bins) {
    CHECK(b.rho1 == b.r_lo);
    CHECK(b.rho2 == b.r_lo);
  }
  CHECK(id.proper);
  const auto constant = compression_profile(PointMap::into_space(seg, seg, {2, 2, 2, 2, 2}));
  for (const auto& b : constant.bins) CHECK(b.rho2 == 0);
  CHECK_FALSE(constant.proper);

  const auto cube = graph_metric(hypercube_graph(3));
  Matrix coords(8, 3);
  for (Index v = 0; v < 8; ++v)
    for (Index b = 0; b < 3; ++b) coords(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(b)) = (v >> b) & 1U;
  const auto prof = compression_profile(PointMap::into_coordinates(cube, coords));
  REQUIRE(prof.bins.size() == 3);
  for (const auto& b : prof.bins) {
    CHECK(b.rho1 == doctest::Approx(std::sqrt(b.r_lo)).epsilon(1e-12));
    CHECK(b.rho2 == doctest::Approx(std::sqrt(b.r_lo)).epsilon(1e-12));
    CHECK(b.rho1 <= b.rho2);
  }
  CHECK(prof.proper);
  CHECK_THROWS_AS(PointMap::into_space(seg, seg, {0, 1}), PreconditionError);
}

TEST_CASE("empty profile bins are omitted") {
  Matrix m(3, 3);
  m << 0, 1, 5, 1, 0, 5, 5, 5, 0;
  const FiniteMetricSpace space(m);
  const auto prof = compression_profile(PointMap::into_space(space, space, {0, 1, 2}));
  REQUIRE(prof.bins.size() == 2);
  CHECK(prof.bins[0].r_lo == 1);
  CHECK(prof.bins[1].r_lo == 5);
}

TEST_CASE("composition profile is bounded by composed upper envelopes") {
  const auto seg = segment(7);
  const auto half = graph_metric(path_graph(4));
  const auto f = PointMap::into_space(seg, half, {0, 0, 1, 1, 2, 2, 3});
  const auto g = PointMap::into_space(half, seg, {0, 2, 4, 6});
  const auto gf = compose(f, g);
  const auto pf = compression_profile(f), pg = compression_profile(g), pgf = compression_profile(gf);
  for (const auto& b : pgf.bins) CHECK(b.rho2 <= pg.rho2_upper(pf.rho2_upper(b.r_lo)) + 1e-12);
}

TEST_CASE("bounded geometry table") {
  CHECK(bounded_geometry_stats(two_points(1.0), {0.5, 1.0}) == std::vector<std::size_t>{1, 2});
  CHECK(bounded_geometry_stats(graph_metric(cycle_graph(4)), {1.0}) == std::vector<std::size_t>{3});
  CHECK_THROWS_AS(bounded_geometry_stats(two_points(1.0), {-1.0}), PreconditionError);
}

TEST_CASE("balls, subspaces and set distances") {
  const auto seg = segment(5);
  CHECK(seg.closed_ball(2, 1.0) == std::vector<Index>{1, 2, 3});
  CHECK(seg.ball_size(0, 2.0) == 3);
  const auto sub = seg.subspace({0, 4});
  CHECK(sub.d(0, 1) == 4);
  CHECK(seg.diameter_of({1, 3}) == 2);
  std::vector<char> member{0, 0, 0, 0, 1};
  CHECK(seg.distance_to_set(0, member) == 4);
  CHECK(std::isinf(seg.distance_to_set(0, std::vector<char>(5, 0))));
  CHECK(seg.find("3") == Index{3});
  CHECK_FALSE(seg.find("x").has_value());
  CHECK(seg.distance_values() == std::vector<double>{0, 1, 2, 3, 4});
}
