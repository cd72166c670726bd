#pragma once

#include "coarselab/metric.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace coarselab {

/// Declared parameters carried by a witness. Never trusted by measurement.
struct WitnessParams {
  double R = 0.0;
  double eps = 0.0;
  double S = 0.0;
  double p = 1.0;
  double delta = 0.0;
};

/// Element (y, n) of X x N.
using Tag = std::pair<Index, std::uint32_t>;

struct AFamily {
  std::vector<std::vector<Tag>> sets;  ///< sorted, duplicate-free per point
  WitnessParams params;
  /// Optional per-point flag marking sets cut short by a finite boundary.
  std::vector<char> truncated;
};

/// Row x holds the function xi_x over the points of the space.
struct LpWitness {
  Matrix xi;
  WitnessParams params;
};

/// Row x holds zeta_x; params.S and params.delta carry the tail data.
struct TailWitness {
  Matrix zeta;
  WitnessParams params;
};

/// Row i of phi is the function phi_i over the points; cover[i] is U_i.
struct PartitionWitness {
  std::vector<std::vector<Index>> cover;
  Matrix phi;
  WitnessParams params;
};

/// Row x holds the unit vector f(x).
struct VectorWitness {
  Matrix f;
  WitnessParams params;
};

struct KernelWitness {
  Matrix k;
  WitnessParams params;
};

using Witness =
    std::variant<AFamily, LpWitness, TailWitness, PartitionWitness, VectorWitness, KernelWitness>;

enum class Form { AFamily, Lp, Tail, Partition, Vector, Kernel };

Form form_of(const Witness& w);
std::string form_name(Form f);
Form parse_form(const std::string& name);
const WitnessParams& params_of(const Witness& w);
std::size_t witness_points(const Witness& w);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct WitnessReport {
  Form form = Form::Lp;
  double R_target = 0.0;
  double eps_measured = 0.0;   ///< worst variation over non-flagged pairs with d <= R
  double S_measured = 0.0;     ///< support radius (cover diameter for partitions)
  double norm_deviation = 0.0;
  std::optional<std::pair<Index, Index>> worst_pair;
  std::size_t pairs_checked = 0;
  std::size_t flagged_pairs = 0;
  double eps_with_flagged = 0.0;
  // Form specific diagnostics.
  double min_eigenvalue = 0.0;       ///< kernel
  double in_ball_min = 1.0;          ///< tail: min ||zeta_x on B(x,S)||_p at declared S
  double annulus_max = 0.0;          ///< tail: max annulus mass between S and R+S
  bool valid = true;
  std::vector<std::string> violations;
};

/// Exhaustive measurement of a witness on `space` at scale R_target.
WitnessReport measure_witness(const Witness& w, const FiniteMetricSpace& space, double R_target);

/// (|A_x symdiff A_y|, |A_x cap A_y|).
std::pair<std::size_t, std::size_t> afamily_counts(const AFamily& a, Index x, Index y);

/// ||u - v||_p on rows; p may be +inf.
double lp_distance(const Matrix& a, Index x, const Matrix& b, Index y, double p);
double lp_norm_row(const Matrix& a, Index x, double p);

// ---------------------------------------------------------------- conversions

/// Witness conditions by number; conversion routes are named after them, e.g. "3->1".
enum class Condition { A1 = 1, Lp2, Lp3, Tail4, Tail5, Partition6, Vector7, Kernel8 };

struct ConversionParams {
  double R = 1.0;                           ///< scale at which variations are measured
  double q = 1.0;                           ///< target exponent (2 -> 3)
  std::optional<std::size_t> N;            ///< bounded-geometry support bound (3 -> 1)
  std::optional<std::uint64_t> M;          ///< quantization constant (3 -> 1)
  double delta = 0.5;                       ///< tail delta (3 -> 4, 4 -> 5)
  std::optional<double> truncation;        ///< support radius for 8 -> 2
};

struct Conversion {
  Witness witness;
  FiniteMetricSpace space;  ///< space the output lives on
  std::string route;        ///< e.g. "3->1"
  WitnessReport input;
  WitnessReport output;
  double eps_in = 0.0;      ///< input quantity the bound is computed from
  double bound = kInf;      ///< degradation bound on the output quantity
  double out_quantity = 0.0;
  bool bound_holds = true;
  double S_bound = kInf;
  bool S_holds = true;
  std::vector<std::string> notes;

  bool ok() const { return bound_holds && S_holds && output.valid; }
};

/// Route chosen from the (source form, target form) pair; Lp -> Lp is 2 -> 3,
/// Tail -> Tail is 4 -> 5.
Conversion convert_witness(const Witness& w, const FiniteMetricSpace& space, Form target,
                           const ConversionParams& params);

/// Quantize a probability vector into integer counts summing to M
/// (largest remainder, ties to the lower index).
std::vector<std::uint64_t> quantize(const std::vector<double>& p, std::uint64_t M);

// ------------------------------------------------------------------- builders

enum class TreeBoundary { Truncate, ExtendRay };

struct TreeWitness {
  AFamily family;
  std::size_t K = 0;  ///< |A_v| = floor(3R/eps) + 1
};

/// A_v = first K vertices along the geodesic from v to `ray_end`, continued
/// by a ray leaving the tree at ray_end.
TreeWitness tree_witness(const FiniteMetricSpace& tree, Index ray_end, double R, double eps,
                         TreeBoundary boundary = TreeBoundary::Truncate);

struct LipschitzPartition {
  PartitionWitness witness;
  std::size_t multiplicity = 0;  ///< k
  double lebesgue = 0.0;         ///< L
  double lipschitz_bound = 0.0;  ///< (2k+2)(2k+3)/L
  double lipschitz_measured = 0.0;
  bool bound_holds = true;
  double variation_bound = 0.0;  ///< lipschitz_bound * R
  bool meets_target = false;     ///< variation_bound < eps
};

std::size_t cover_multiplicity(const FiniteMetricSpace& space,
                               const std::vector<std::vector<Index>>& cover);
/// Largest distance value L such that every closed L-ball lies in one set.
double lebesgue_number(const FiniteMetricSpace& space, const std::vector<std::vector<Index>>& cover);

LipschitzPartition lipschitz_partition(const FiniteMetricSpace& space,
                                       const std::vector<std::vector<Index>>& cover, double R,
                                       double eps);

/// Sorted points within distance r of `set`.
std::vector<Index> expansion(const FiniteMetricSpace& space, const std::vector<Index>& set, double r);

struct GlueResult {
  PartitionWitness witness;
  double eps_outer = 0.0;
  double eps_local = 0.0;
  double eps_out = 0.0;
  bool bound_holds = true;
};

/// locals[i] lives on expansion(cover_i, R), indexed in that sorted order.
GlueResult glue_witness(const FiniteMetricSpace& space, const PartitionWitness& outer,
                        const std::vector<PartitionWitness>& locals, double R);

struct DerivedResult {
  FiniteMetricSpace space;
  PartitionWitness witness;
  double eps_out = 0.0;
  double bound = 0.0;
  bool bound_holds = true;
  std::vector<std::string> notes;
};

DerivedResult product_witness(const FiniteMetricSpace& x, const PartitionWitness& wx,
                              const FiniteMetricSpace& y, const PartitionWitness& wy, double p,
                              double R);

/// blocks[i] lists the points of X_i; block_witnesses[i] lives on that subspace.
DerivedResult union_witness(const FiniteMetricSpace& space, const std::vector<std::vector<Index>>& blocks,
                            const std::vector<PartitionWitness>& block_witnesses, double L, double R);

/// Pull back along an isometric inclusion Y -> X given by `inclusion`.
DerivedResult subspace_witness(const FiniteMetricSpace& x, const PartitionWitness& w,
                               const FiniteMetricSpace& y, const std::vector<Index>& inclusion,
                               double R);

/// Uniform partition: one set equal to the whole space.
PartitionWitness trivial_partition(const FiniteMetricSpace& space);

}  // namespace coarselab
