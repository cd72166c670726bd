#include <doctest.h>

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>
#include <coarselab/witness.hpp>

#include "support/fixtures.hpp"

#include <cmath>

using namespace coarselab;

namespace {

FiniteMetricSpace two_points() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return FiniteMetricSpace(m);
}

ConversionParams at_scale(double R) {
  ConversionParams p;
  p.R = R;
  return p;
}

}  // namespace

TEST_CASE("quantization keeps the largest remainders") {
  CHECK(quantize({0.3, 0.7}, 10) == std::vector<std::uint64_t>{3, 7});
  CHECK(quantize({1.0 / 3, 1.0 / 3, 1.0 / 3}, 10) == std::vector<std::uint64_t>{4, 3, 3});
  CHECK(quantize({0.5, 0.5}, 1) == std::vector<std::uint64_t>{1, 0});
  CHECK_THROWS(quantize({0.5, 0.5}, 0));
  CHECK_THROWS(quantize({-0.1, 1.1}, 10));
}

TEST_CASE("A-family to l1 on two points") {
  AFamily a;
  a.sets = {{{0, 1}}, {{0, 1}, {1, 1}}};
  const auto c = convert_witness(a, two_points(), Form::Lp, at_scale(1.0));
  CHECK(c.route == "1->2");
  CHECK(c.eps_in == doctest::Approx(1.0));
  const auto& xi = std::get<LpWitness>(c.witness).xi;
  CHECK(xi(0, 0) == 1.0);
  CHECK(xi(1, 0) == 0.5);
  CHECK(xi(1, 1) == 0.5);
  CHECK(c.out_quantity == doctest::Approx(1.0));
  CHECK(c.bound == doctest::Approx(2.0));
  CHECK(c.ok());
}

TEST_CASE("l1 to A-family quantizes each row") {
  LpWitness w;
  w.xi = Matrix(2, 2);
  w.xi << 0.3, 0.7, 0.7, 0.3;
  auto params = at_scale(1.0);
  params.N = 2;
  params.M = 10;
  const auto c = convert_witness(w, two_points(), Form::AFamily, params);
  CHECK(c.route == "3->1");
  const auto& a = std::get<AFamily>(c.witness);
  std::size_t first = 0, second = 0;
  for (const auto& [y, n] : a.sets[0]) (y == 0 ? first : second) += 1;
  CHECK(first == 3);
  CHECK(second == 7);
  CHECK(a.sets[1].size() == 10);
}

TEST_CASE("l1 to A-family requires the bounded-geometry bound") {
  LpWitness w;
  w.xi = Matrix::Constant(2, 2, 0.5);
  CHECK_THROWS_AS(convert_witness(w, two_points(), Form::AFamily, at_scale(1.0)), PreconditionError);
  auto params = at_scale(1.0);
  params.N = 1;
  CHECK_THROWS_AS(convert_witness(w, two_points(), Form::AFamily, params), PreconditionError);
  w.params.p = 2.0;
  w.xi = Matrix::Constant(2, 2, std::sqrt(0.5));
  params.N = 2;
  CHECK_THROWS_AS(convert_witness(w, two_points(), Form::AFamily, params), PreconditionError);
}

TEST_CASE("constant unit vectors give the all-ones kernel") {
  VectorWitness v;
  v.f = Matrix::Ones(3, 1);
  const auto space = graph_metric(path_graph(3));
  const auto c = convert_witness(v, space, Form::Kernel, at_scale(1.0));
  CHECK(c.route == "7->8");
  CHECK(std::get<KernelWitness>(c.witness).k.isApprox(Matrix::Ones(3, 3)));
  CHECK(c.out_quantity == 0.0);
}

TEST_CASE("unsupported pairs and invalid inputs are rejected") {
  const auto space = graph_metric(cycle_graph(6));
  const auto w = fixture::ball_witness(space, 1.0, 1.0);
  CHECK_THROWS_AS(convert_witness(w, space, Form::Kernel, at_scale(1.0)), PreconditionError);
  CHECK_THROWS_AS(convert_witness(w, space, Form::Vector, at_scale(1.0)), PreconditionError);
  AFamily a;
  a.sets.assign(6, {{0, 1}});
  CHECK_THROWS_AS(convert_witness(a, space, Form::Kernel, at_scale(1.0)), PreconditionError);
  LpWitness bad = w;
  bad.xi *= 2.0;
  CHECK_THROWS_AS(convert_witness(bad, space, Form::Partition, at_scale(1.0)), PreconditionError);
  CHECK_THROWS_AS(convert_witness(w, space, Form::Lp, at_scale(-1.0)), PreconditionError);
}

TEST_CASE("kernel to l2 rejects kernels that are not of positive type") {
  KernelWitness k;
  k.k = Matrix(2, 2);
  k.k << 1, 0, 0, 1;
  k.k(0, 1) = k.k(1, 0) = 0.0;
  CHECK_NOTHROW(convert_witness(k, two_points(), Form::Lp, at_scale(1.0)));
  k.k << 1, 1.5, 1.5, 1;
  CHECK_THROWS_AS(convert_witness(k, two_points(), Form::Lp, at_scale(1.0)), PreconditionError);
}

TEST_CASE("every route meets its degradation bound on the corpus") {
  const auto corpus = fixture::conversion_corpus();
  REQUIRE(corpus.size() == 25);
  for (const auto& [name, space] : corpus) {
    CAPTURE(name);
    const double r = std::min(2.0, space.diameter());
    const auto l1 = fixture::ball_witness(space, r, 1.0);
    const auto l2 = fixture::ball_witness(space, r, 2.0);
    const auto N = bounded_geometry_stats(space, {r}).front();
    for (double R : {1.0, 2.0}) {
      auto params = at_scale(R);
      params.N = N;
      params.q = 2.0;

      const auto to_a = convert_witness(l1, space, Form::AFamily, params);
      CHECK(to_a.ok());
      CHECK(convert_witness(to_a.witness, space, Form::Lp, params).ok());

      const auto lq = convert_witness(l1, space, Form::Lp, params);
      CHECK(lq.ok());
      CHECK(lq.out_quantity <= std::sqrt(lq.input.eps_measured) + 1e-9);

      const auto tail = convert_witness(l1, space, Form::Tail, params);
      CHECK(tail.ok());
      const auto tail5 = convert_witness(tail.witness, space, Form::Tail, params);
      CHECK(tail5.bound_holds);
      CHECK(tail5.S_holds);
      const auto back = convert_witness(tail5.witness, space, Form::Lp, params);
      CHECK(back.ok());

      const auto part = convert_witness(l1, space, Form::Partition, params);
      CHECK(part.ok());
      CHECK(part.output.eps_measured == doctest::Approx(part.input.eps_measured));
      const auto recovered = convert_witness(part.witness, space, Form::Lp, params);
      CHECK(recovered.ok());
      CHECK(recovered.output.eps_measured == doctest::Approx(part.input.eps_measured));

      const auto vec = convert_witness(l2, space, Form::Vector, params);
      CHECK(vec.ok());
      const auto ker = convert_witness(vec.witness, space, Form::Kernel, params);
      CHECK(ker.ok());
      CHECK(ker.out_quantity <= vec.output.eps_measured * vec.output.eps_measured / 2.0 + 1e-9);
      const auto root = convert_witness(ker.witness, space, Form::Lp, params);
      CHECK(root.output.valid);
      CHECK(root.bound_holds);
    }
  }
}

TEST_CASE("kernel to l2 reports its truncation radius") {
  const auto space = graph_metric(cycle_graph(8));
  const auto l2 = fixture::ball_witness(space, 1.0, 2.0);
  auto params = at_scale(1.0);
  const auto vec = convert_witness(l2, space, Form::Vector, params);
  const auto ker = convert_witness(vec.witness, space, Form::Kernel, params);
  params.truncation = 4.0;
  const auto full = convert_witness(ker.witness, space, Form::Lp, params);
  CHECK(full.route == "8->2");
  CHECK(full.S_bound == 4.0);
  CHECK(full.output.S_measured <= 4.0);
  CHECK_FALSE(full.notes.empty());
}
