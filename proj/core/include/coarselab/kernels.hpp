#pragma once

#include "coarselab/metric.hpp"
#include "coarselab/witness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coarselab {

/// Symmetric real kernel over the points of a finite space.
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(Matrix values);

  const Matrix& values() const noexcept { return k_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(k_.rows()); }
  double operator()(Index x, Index y) const { return k_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)); }

  enum class Normalization { None, Positive, Negative };
  /// Positive when the diagonal is 1, Negative when it is 0.
  Normalization normalization(double tol = 1e-9) const;
  /// Largest d(x, y) with k(x, y) != 0 (within tol).
  double propagation(const FiniteMetricSpace& space, double tol = 1e-9) const;

 private:
  Matrix k_;
};

struct KernelClass {
  bool positive_type = false;
  double min_eigenvalue = 0.0;
  bool negative_type = false;
  double max_meanzero = 0.0;  ///< largest eigenvalue of k compressed to the mean-zero subspace
  double scale = 0.0;         ///< max |k|, the reference for tolerances
  double tol = 0.0;
};

KernelClass classify_kernel(const Kernel& k, double tol = 1e-9);

struct Embedding {
  Matrix coords;  ///< one row per point
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(coords.cols()); }
};

enum class KernelMode { Positive, Negative };

struct EmbeddingResult {
  Embedding embedding;
  double clipped_mass = 0.0;
  double reconstruction_error = 0.0;  ///< max entrywise error of the reproduced kernel
};

EmbeddingResult embed_from_kernel(const Kernel& k, KernelMode mode, double tol = 1e-9);

// Transforms. Each checks its classification precondition.
Kernel schur_product(const Kernel& k, const Kernel& l, double tol = 1e-9);
Kernel exp_transform(const Kernel& k, double t, double tol = 1e-9);
Kernel power_transform(const Kernel& k, double alpha, double tol = 1e-9);
Kernel gaussian_kernel(const Embedding& f, double t);
/// t_0 = eps / (1 + rho2(R)^2).
double gaussian_t0(double eps, double rho2_at_R);

struct CeSumResult {
  Kernel kernel;
  std::size_t terms = 0;            ///< truncation index of the series
  bool schedule_checked = false;    ///< list follows the (n, 2^-n) schedule
  bool growth_holds = true;         ///< |k(x,y)| <= 2 d(x,y) + 1 when checked
  double worst_growth_ratio = 0.0;  ///< max |k| / (2d + 1)
};

/// k = sum_n (1 - k_n). With a space the schedule and growth bound are checked.
CeSumResult ce_sum(const std::vector<Kernel>& list, const FiniteMetricSpace* space = nullptr,
                   double tol = 1e-9);

/// k(x, y) = ||x - y||_p^p for the rows of `points`.
Kernel lp_negtype_kernel(const Matrix& points, double p);

/// |x_n|^{p/q} sign(x_n).
Vector mazur_map(const Vector& x, double p, double q);

struct SequenceEmbedding {
  Embedding embedding;
  CompressionProfile profile;
  std::vector<double> thresholds;  ///< S_k used for Q_t
  double p = 2.0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  double min_lower_slack = kInf;   ///< min over pairs of image distance - lower bound
  double min_upper_slack = kInf;   ///< min over pairs of upper bound - image distance
  bool bounds_hold() const { return lower_violations == 0 && upper_violations == 0; }
};

/// Q_t = #{k : 2 S_k < t} with S_k the measured support radius of witness k.
std::size_t yu_count(const std::vector<double>& support_radii, double t, double tol);

/// Witness k (1-based) must be an l^2 witness with variation < 2^-k at scale k.
SequenceEmbedding yu_embedding(const FiniteMetricSpace& space, const std::vector<LpWitness>& seq);

/// Witness n must have variation < 2^-n at scale n; S_n is the measured
/// separation threshold for delta.
SequenceEmbedding lp_sequence_embedding(const FiniteMetricSpace& space, const std::vector<LpWitness>& seq,
                                        double delta);

struct OperatorBridge {
  Matrix op;
  double norm = 0.0;
  double propagation = 0.0;
  std::size_t N = 0;
  double norm_bound = 0.0;  ///< N * max |k|
  bool norm_ok = false;
  bool kernel_positive = false;
  bool operator_positive = false;
  bool agreement() const { return kernel_positive == operator_positive; }
};

OperatorBridge kernel_operator_bridge(const Kernel& k, const FiniteMetricSpace& space, double tol = 1e-9);

}  // namespace coarselab
