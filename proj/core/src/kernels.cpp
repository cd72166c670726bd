#include "coarselab/kernels.hpp"

#include "coarselab/error.hpp"
#include "coarselab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace coarselab {

Kernel::Kernel(Matrix values) : k_(std::move(values)) {
  require(k_.rows() == k_.cols(), "kernel must be a square matrix");
  require(k_.allFinite(), "kernel entries must be finite");
  const double scale = std::max(1.0, linalg::max_abs(k_));
  if (!linalg::is_symmetric(k_, 1e-9 * scale)) fail_precondition("kernel is not symmetric");
}

Kernel::Normalization Kernel::normalization(double tol) const {
  if (k_.rows() == 0) return Normalization::None;
  const auto diag = k_.diagonal();
  if ((diag.array() - 1.0).abs().maxCoeff() <= tol) return Normalization::Positive;
  if (diag.cwiseAbs().maxCoeff() <= tol) return Normalization::Negative;
  return Normalization::None;
}

double Kernel::propagation(const FiniteMetricSpace& space, double tol) const {
  require(space.size() == size(), "kernel and space sizes differ");
  double s = 0.0;
  for (Index x = 0; x < size(); ++x)
    for (Index y = 0; y < size(); ++y)
      if (std::abs((*this)(x, y)) > tol) s = std::max(s, space.d(x, y));
  return s;
}

KernelClass classify_kernel(const Kernel& k, double tol) {
  KernelClass c;
  c.scale = linalg::max_abs(k.values());
  c.tol = tol;
  const double slack = tol * c.scale;
  if (k.size() == 0) {
    c.positive_type = c.negative_type = true;
    return c;
  }
  c.min_eigenvalue = linalg::sym_eigen(k.values()).values(0);
  c.positive_type = c.min_eigenvalue >= -slack;
  if (k.size() == 1) {
    c.max_meanzero = 0.0;
  } else {
    const Matrix u = linalg::mean_zero_basis(k.size());
    const Matrix compressed = u.transpose() * k.values() * u;
    c.max_meanzero = linalg::sym_eigen(0.5 * (compressed + compressed.transpose())).values.maxCoeff();
  }
  c.negative_type = c.max_meanzero <= slack;
  return c;
}

EmbeddingResult embed_from_kernel(const Kernel& k, KernelMode mode, double tol) {
  const std::size_t n = k.size();
  require(n > 0, "embed_from_kernel: empty kernel");
  const auto cls = classify_kernel(k, tol);
  const double slack = tol * std::max(cls.scale, 1e-300);
  Matrix gram;
  if (mode == KernelMode::Positive) {
    if (!cls.positive_type)
      fail_precondition("embed_from_kernel: kernel is not of positive type (min eigenvalue " +
                        std::to_string(cls.min_eigenvalue) + ")");
    gram = k.values();
  } else {
    if (!cls.negative_type)
      fail_precondition("embed_from_kernel: kernel is not of negative type (mean-zero form " +
                        std::to_string(cls.max_meanzero) + ")");
    if (k.normalization(tol * std::max(1.0, cls.scale)) != Kernel::Normalization::Negative &&
        cls.scale > 0.0)
      fail_precondition("embed_from_kernel: negative mode needs a zero diagonal");
    gram = Matrix(n, n);
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) gram(x, y) = 0.5 * (k(x, 0) + k(0, y) - k(x, y));
  }
  EmbeddingResult out;
  auto eig = linalg::sym_eigen(gram);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values(i);
    if (lam < -slack && lam < -1e-12)
      fail_precondition("embed_from_kernel: Gram eigenvalue " + std::to_string(lam) + " below tolerance");
    if (lam < 0.0) {
      out.clipped_mass += -lam;
    } else if (lam > 0.0) {
      keep.push_back(i);
    }
  }
  Matrix coords(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    coords.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(keep[c]) * std::sqrt(eig.values(keep[c]));
  // Largest eigenvector first reads better in exports.
  out.embedding.coords = coords.rowwise().reverse();
  const Matrix& f = out.embedding.coords;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      const double got = mode == KernelMode::Positive
                             ? f.row(static_cast<Eigen::Index>(x)).dot(f.row(static_cast<Eigen::Index>(y)))
                             : (f.row(static_cast<Eigen::Index>(x)) - f.row(static_cast<Eigen::Index>(y))).squaredNorm();
      out.reconstruction_error = std::max(out.reconstruction_error, std::abs(got - k(x, y)));
    }
  }
  return out;
}

Kernel schur_product(const Kernel& k, const Kernel& l, double tol) {
  require(k.size() == l.size(), "schur_product: size mismatch");
  require(classify_kernel(k, tol).positive_type, "schur_product: first kernel is not of positive type");
  require(classify_kernel(l, tol).positive_type, "schur_product: second kernel is not of positive type");
  return Kernel(k.values().cwiseProduct(l.values()));
}

Kernel exp_transform(const Kernel& k, double t, double tol) {
  require(t >= 0.0, "exp_transform: t must be nonnegative");
  require(classify_kernel(k, tol).negative_type, "exp_transform: kernel is not of negative type");
  return Kernel((-t * k.values().array()).exp().matrix());
}

Kernel power_transform(const Kernel& k, double alpha, double tol) {
  require(alpha > 0.0 && alpha < 1.0, "power_transform: alpha must lie in (0, 1)");
  require(k.values().minCoeff() >= 0.0, "power_transform: kernel must be entrywise nonnegative");
  require(classify_kernel(k, tol).negative_type, "power_transform: kernel is not of negative type");
  return Kernel(k.values().array().pow(alpha).matrix());
}

Kernel gaussian_kernel(const Embedding& f, double t) {
  require(t > 0.0, "gaussian_kernel: t must be positive");
  const auto n = f.coords.rows();
  Matrix k(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) k(x, y) = std::exp(-t * (f.coords.row(x) - f.coords.row(y)).squaredNorm());
  return Kernel(std::move(k));
}

double gaussian_t0(double eps, double rho2_at_R) { return eps / (1.0 + rho2_at_R * rho2_at_R); }

CeSumResult ce_sum(const std::vector<Kernel>& list, const FiniteMetricSpace* space, double tol) {
  require(!list.empty(), "ce_sum: empty kernel list");
  const std::size_t n = list.front().size();
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& kn : list) {
    require(kn.size() == n, "ce_sum: kernels differ in size");
    require(kn.normalization(tol) == Kernel::Normalization::Positive, "ce_sum: kernels must be normalized");
    require(classify_kernel(kn, tol).positive_type, "ce_sum: kernels must be of positive type");
    sum += (Matrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) - kn.values());
  }
  CeSumResult out;
  out.kernel = Kernel(sum);
  out.terms = list.size();
  if (space) {
    require(space->size() == n, "ce_sum: space size mismatch");
    out.schedule_checked = true;
    for (std::size_t i = 0; i < list.size() && out.schedule_checked; ++i) {
      const double scale = static_cast<double>(i + 1);
      const double limit = std::ldexp(1.0, -static_cast<int>(i + 1));
      for (Index x = 0; x < n && out.schedule_checked; ++x)
        for (Index y = 0; y < n; ++y)
          if (space->within(x, y, scale) && !(std::abs(1.0 - list[i](x, y)) < limit)) {
            out.schedule_checked = false;
            break;
          }
    }
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) {
        const double ratio = std::abs(sum(x, y)) / (2.0 * space->d(x, y) + 1.0);
        out.worst_growth_ratio = std::max(out.worst_growth_ratio, ratio);
      }
    out.growth_holds = out.worst_growth_ratio <= 1.0 + 1e-12;
  }
  return out;
}

Kernel lp_negtype_kernel(const Matrix& points, double p) {
  require(p > 0.0 && p <= 2.0, "lp_negtype_kernel: p must lie in (0, 2]");
  const auto n = points.rows();
  Matrix k(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      k(x, y) = p == 2.0   ? (points.row(x) - points.row(y)).squaredNorm()
                : p == 1.0 ? (points.row(x) - points.row(y)).cwiseAbs().sum()
                           : (points.row(x) - points.row(y)).cwiseAbs().array().pow(p).sum();
  return Kernel(std::move(k));
}

Vector mazur_map(const Vector& x, double p, double q) {
  require(p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q), "mazur_map: exponents must be finite and >= 1");
  const double norm = std::pow(x.cwiseAbs().array().pow(p).sum(), 1.0 / p);
  require(std::abs(norm - 1.0) <= 1e-9, "mazur_map: input is not a unit vector in l^p");
  if (p == q) return x;
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::pow(std::abs(x(i)), p / q);
    out(i) = x(i) < 0 ? -a : a;
  }
  return out;
}

OperatorBridge kernel_operator_bridge(const Kernel& k, const FiniteMetricSpace& space, double tol) {
  require(k.size() == space.size(), "kernel_operator_bridge: size mismatch");
  OperatorBridge b;
  b.op = k.values();
  b.propagation = k.propagation(space, tol);
  b.N = bounded_geometry_stats(space, {b.propagation}).front();
  b.norm = linalg::spectral_norm(b.op);
  b.norm_bound = static_cast<double>(b.N) * linalg::max_abs(b.op);
  b.norm_ok = b.norm <= b.norm_bound * (1 + 1e-12) + 1e-12;
  b.kernel_positive = classify_kernel(k, tol).positive_type;
  // Operator positivity via <T v, v> over the eigenbasis of its symmetric part.
  const Matrix sym = 0.5 * (b.op + b.op.transpose());
  b.operator_positive = linalg::sym_eigen(sym).values(0) >= -tol * linalg::max_abs(b.op);
  return b;
}

}  // namespace coarselab
