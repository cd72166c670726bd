#include <doctest.h>

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>
#include <coarselab/kernels.hpp>
#include <coarselab/rng.hpp>

#include "support/oracles.hpp"

#include <cmath>

using namespace coarselab;

namespace {

Matrix line(std::initializer_list<double> xs) {
  Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

Kernel squared_line() {
  Matrix k(3, 3);
  k << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  return Kernel(k);
}

Matrix random_points(Rng& rng, Eigen::Index n, Eigen::Index dim) {
  Matrix m(n, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix random_symmetric(Rng& rng, Eigen::Index n, double lo, double hi, double diag) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = diag;
    for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(lo, hi);
  }
  return m;
}

Matrix hamming2() {
  Matrix pts(4, 2);
  pts << 0, 0, 0, 1, 1, 0, 1, 1;
  return pts;
}

}  // namespace

TEST_CASE("classification of the standard examples") {
  CHECK(classify_kernel(Kernel(Matrix::Identity(4, 4))).positive_type);
  CHECK(classify_kernel(Kernel(Matrix::Ones(4, 4))).positive_type);
  const auto sq = classify_kernel(squared_line());
  CHECK(sq.negative_type);
  CHECK_FALSE(sq.positive_type);
  CHECK(sq.min_eigenvalue == doctest::Approx(oracle::min_eigenvalue(squared_line().values())));
  Matrix bad(3, 3);
  bad << 0, 1, 10, 1, 0, 1, 10, 1, 0;
  CHECK_FALSE(classify_kernel(Kernel(bad)).negative_type);
}

TEST_CASE("asymmetric and non-square kernels are rejected") {
  Matrix a(2, 2);
  a << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(Kernel{a}, PreconditionError);
  CHECK_THROWS_AS(Kernel{Matrix::Ones(2, 3)}, PreconditionError);
}

TEST_CASE("normalization and propagation flags") {
  CHECK(Kernel(Matrix::Identity(3, 3)).normalization() == Kernel::Normalization::Positive);
  CHECK(squared_line().normalization() == Kernel::Normalization::Negative);
  CHECK(Kernel(Matrix::Constant(2, 2, 3.0)).normalization() == Kernel::Normalization::None);
  const auto space = graph_metric(path_graph(3));
  Matrix k = Matrix::Identity(3, 3);
  k(0, 1) = k(1, 0) = 0.5;
  CHECK(Kernel(k).propagation(space) == 1.0);
  CHECK(squared_line().propagation(space) == 2.0);
}

TEST_CASE("negative-mode embedding of the Hamming square") {
  const auto k = lp_negtype_kernel(hamming2(), 1.0);
  const auto e = embed_from_kernel(k, KernelMode::Negative);
  const Matrix& f = e.embedding.coords;
  CHECK((f.row(0) - f.row(3)).squaredNorm() == doctest::Approx(2.0));
  CHECK((f.row(0) - f.row(1)).squaredNorm() == doctest::Approx(1.0));
  CHECK(e.reconstruction_error < 1e-8);
  CHECK(f.row(0).norm() < 1e-12);
}

TEST_CASE("positive-mode embeddings of the constant and identity kernels") {
  const auto ones = embed_from_kernel(Kernel(Matrix::Ones(3, 3)), KernelMode::Positive);
  CHECK(ones.embedding.dimension() == 1);
  CHECK(ones.embedding.coords.row(0).isApprox(ones.embedding.coords.row(2)));
  CHECK(ones.embedding.coords.row(0).norm() == doctest::Approx(1.0));
  const auto id = embed_from_kernel(Kernel(Matrix::Identity(4, 4)), KernelMode::Positive);
  const Matrix g = id.embedding.coords * id.embedding.coords.transpose();
  CHECK((g - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("embedding rejects kernels of the wrong type") {
  CHECK_THROWS_AS(embed_from_kernel(squared_line(), KernelMode::Positive), PreconditionError);
  CHECK_THROWS_AS(embed_from_kernel(Kernel(Matrix::Identity(3, 3)), KernelMode::Negative), PreconditionError);
}

TEST_CASE("embedding round trip reproduces random kernels") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(7));
    const Matrix pts = random_points(rng, n, 3);
    const auto neg = lp_negtype_kernel(pts, 2.0);
    CHECK(embed_from_kernel(neg, KernelMode::Negative).reconstruction_error < 1e-8);
    const Kernel pos(pts * pts.transpose());
    CHECK(embed_from_kernel(pos, KernelMode::Positive).reconstruction_error < 1e-8);
  }
}

TEST_CASE("exp and power transforms of the squared line kernel") {
  const auto g = exp_transform(squared_line(), 1.0);
  CHECK(g(0, 2) == doctest::Approx(std::exp(-4.0)));
  CHECK(classify_kernel(g).positive_type);
  const auto h = power_transform(squared_line(), 0.5);
  CHECK(h(0, 2) == doctest::Approx(2.0));
  CHECK(h(0, 1) == doctest::Approx(1.0));
  CHECK(classify_kernel(h).negative_type);
  CHECK_THROWS_AS(power_transform(squared_line(), 1.0), PreconditionError);
  CHECK_THROWS_AS(exp_transform(Kernel(Matrix::Identity(3, 3)) , -1.0), PreconditionError);
}

TEST_CASE("gaussian kernel of unit-distance points") {
  Embedding f;
  f.coords = line({0.0, 1.0});
  const auto k = gaussian_kernel(f, 1.0);
  CHECK(k(0, 1) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(k.normalization() == Kernel::Normalization::Positive);
  CHECK(gaussian_t0(0.5, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(gaussian_kernel(f, 0.0), PreconditionError);
}

TEST_CASE("schoenberg equivalence on random normalized kernels") {
  Rng rng(11);
  std::size_t disagreements = 0, negatives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(7));
    Matrix k;
    if (trial % 2 == 0) {
      const double p = trial % 4 == 0 ? 2.0 : 1.0;
      k = lp_negtype_kernel(random_points(rng, n, 2), p).values();
    } else {
      k = random_symmetric(rng, n, 0.0, 3.0, 0.0);
    }
    const bool neg = classify_kernel(Kernel(k), 1e-8).negative_type;
    negatives += neg ? 1 : 0;
    bool all_psd = true;
    for (int e = -4; e <= 4; ++e) {
      const Matrix g = (-std::ldexp(1.0, e) * k).array().exp().matrix();
      all_psd = all_psd && oracle::min_eigenvalue(g) >= -1e-8;
    }
    disagreements += neg != all_psd ? 1 : 0;
  }
  CHECK(disagreements == 0);
  CHECK(negatives >= 30);
}

TEST_CASE("schur products of positive kernels stay positive") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(7));
    const Matrix a = random_points(rng, n, 2), b = random_points(rng, n, 3);
    const auto s = schur_product(Kernel(a * a.transpose()), Kernel(b * b.transpose()));
    CHECK(oracle::min_eigenvalue(s.values()) >= -1e-9 * std::max(1.0, s.values().cwiseAbs().maxCoeff()));
  }
  CHECK_THROWS_AS(schur_product(squared_line(), Kernel(Matrix::Identity(3, 3))), PreconditionError);
  CHECK_THROWS_AS(schur_product(Kernel(Matrix::Identity(2, 2)), Kernel(Matrix::Identity(3, 3))), PreconditionError);
}

TEST_CASE("power transform keeps random squared distances of negative type") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = lp_negtype_kernel(random_points(rng, 6, 3), 2.0);
    for (double alpha : {0.25, 0.5, 0.75}) CHECK(classify_kernel(power_transform(k, alpha), 1e-8).negative_type);
  }
}

TEST_CASE("lp negative-type kernels on small point sets") {
  const auto k1 = lp_negtype_kernel(line({0, 1, 3}), 1.0);
  Matrix want(3, 3);
  want << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  CHECK(k1.values().isApprox(want));
  const auto k2 = lp_negtype_kernel(line({0, 1, 3}), 2.0);
  CHECK(k2(0, 2) == 9.0);
  CHECK(k2(1, 2) == 4.0);
  const auto h = lp_negtype_kernel(hamming2(), 1.0);
  CHECK(h(0, 3) == 2.0);
  CHECK(h(1, 2) == 2.0);
  CHECK(h(0, 1) == 1.0);
  CHECK(classify_kernel(lp_negtype_kernel(line({0, 1, 3}), 0.5)).negative_type);
  CHECK_THROWS_AS(lp_negtype_kernel(line({0, 1}), 2.5), PreconditionError);
  CHECK_THROWS_AS(lp_negtype_kernel(line({0, 1}), 0.0), PreconditionError);
}

TEST_CASE("mazur maps") {
  Vector e(3);
  e << 0, 1, 0;
  CHECK(mazur_map(e, 1.0, 3.0) == e);
  Vector half(2);
  half << 0.5, 0.5;
  const auto m = mazur_map(half, 1.0, 2.0);
  CHECK(m(0) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(m.norm() == doctest::Approx(1.0).epsilon(1e-12));
  half(0) = -0.5;
  CHECK(mazur_map(half, 1.0, 2.0)(0) == doctest::Approx(-0.70711).epsilon(1e-5));
  CHECK(mazur_map(half, 1.0, 1.0) == half);
  Vector notunit(2);
  notunit << 1.0, 1.0;
  CHECK_THROWS_AS(mazur_map(notunit, 2.0, 1.0), PreconditionError);

  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(5);
    for (Eigen::Index i = 0; i < 5; ++i) x(i) = rng.normal();
    const double p = rng.uniform(1.0, 4.0), q = rng.uniform(1.0, 4.0);
    x /= std::pow(x.cwiseAbs().array().pow(p).sum(), 1.0 / p);
    const auto y = mazur_map(x, p, q);
    CHECK(std::abs(std::pow(y.cwiseAbs().array().pow(q).sum(), 1.0 / q) - 1.0) < 1e-12);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK((x(i) < 0) == (y(i) < 0));
  }
}

TEST_CASE("ce sum of a scheduled kernel list on a long cycle") {
  const auto space = graph_metric(cycle_graph(40));
  std::vector<Kernel> list;
  for (int n = 1; n <= 3; ++n) {
    // Triangle-window Gram kernels have |1 - k| = d / L on pairs closer than L.
    const double L = std::ldexp(1.0, n) * n * 2 + 1;
    Matrix k = Matrix::Zero(40, 40);
    for (Index x = 0; x < 40; ++x)
      for (Index y = 0; y < 40; ++y) k(x, y) = std::max(0.0, 1.0 - space.d(x, y) / L);
    list.emplace_back(k);
  }
  const auto r = ce_sum(list, &space);
  CHECK(r.terms == 3);
  CHECK(r.schedule_checked);
  CHECK(r.growth_holds);
  CHECK(classify_kernel(r.kernel, 1e-8).negative_type);
  CHECK_THROWS_AS(ce_sum({squared_line()}), PreconditionError);
  CHECK_THROWS_AS(ce_sum({}), PreconditionError);
}

TEST_CASE("operator bridge") {
  const auto seg = graph_metric(path_graph(5));
  auto id = kernel_operator_bridge(Kernel(Matrix::Identity(5, 5)), seg);
  CHECK(id.norm == doctest::Approx(1.0));
  CHECK(id.op.isApprox(Matrix::Identity(5, 5)));
  Matrix band = Matrix::Identity(5, 5);
  for (Eigen::Index i = 0; i + 1 < 5; ++i) band(i, i + 1) = band(i + 1, i) = 0.5;
  const auto b = kernel_operator_bridge(Kernel(band), seg);
  CHECK(b.propagation == 1.0);
  CHECK(b.N == 3);
  CHECK(b.op(0, 2) == 0.0);
  CHECK(b.norm_ok);
  CHECK(b.agreement());

  Rng rng(21);
  const auto cyc = graph_metric(cycle_graph(8));
  for (int trial = 0; trial < 10; ++trial) {
    Matrix f = Matrix::Zero(8, 8);
    for (Index x = 0; x < 8; ++x) {
      f(x, x) = 1.0;
      f(x, (x + 1) % 8) = rng.uniform();
    }
    for (Index x = 0; x < 8; ++x) f.row(static_cast<Eigen::Index>(x)).normalize();
    const Matrix k = f * f.transpose();
    const auto r = kernel_operator_bridge(Kernel(k), cyc);
    CHECK(r.propagation <= 2.0);
    CHECK(r.N <= 5);
    CHECK(r.norm <= 5.0);
    CHECK(r.kernel_positive == (oracle::min_eigenvalue(k) >= -1e-9));
    CHECK(r.agreement());
  }
}
