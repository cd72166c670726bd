#pragma once

#include "coarselab/groups.hpp"
#include "coarselab/lp.hpp"
#include "coarselab/witness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coarselab {

/// Probability function on a finite group, supported in the closed ball B(e, S).
struct FolnerFunction {
  std::vector<double> values;
  double S = 0.0;
};

/// Validates a probability table and computes its support radius.
FolnerFunction make_folner(const FiniteGroup& g, std::vector<double> values);
FolnerFunction uniform_folner(const FiniteGroup& g);
FolnerFunction delta_folner(const FiniteGroup& g);

/// (g f)(h) = f(g^-1 h).
std::vector<double> translate(const FiniteGroup& g, Index by, const std::vector<double>& f);

/// max over 0 < |g| <= R of ||g f - f||_1; zero when the ball is trivial.
double reiter_defect(const FiniteGroup& g, const FolnerFunction& f, double R);
lp::Rational reiter_defect_exact(const FiniteGroup& g, const std::vector<lp::Rational>& f, double R);

enum class Arithmetic { Auto, Exact, Float };

/// Auto selects exact rationals up to this many elements.
inline constexpr std::size_t kExactLimit = 16;

struct FolnerOptimum {
  FolnerFunction f;
  double defect = 0.0;
  std::optional<lp::Rational> exact_defect;
  std::size_t pivots = 0;
};

/// Minimizes the Reiter defect at scale R over functions supported in B(e, S).
FolnerOptimum optimal_folner(const FiniteGroup& g, double R, double S, Arithmetic arithmetic = Arithmetic::Auto);

struct PropertyAOptimum {
  Matrix xi;  ///< row x is xi_x
  double defect = 0.0;
  std::optional<lp::Rational> exact_defect;
  std::size_t pivots = 0;
};

/// Joint LP over all per-point probability functions supported in B(x, S),
/// minimizing the worst l^1 variation over pairs with d <= R.
PropertyAOptimum optimal_property_a(const FiniteMetricSpace& space, double R, double S,
                                    Arithmetic arithmetic = Arithmetic::Auto);

enum class DiamForm { A, F };
std::string diam_form_name(DiamForm form);

struct DiamEntry {
  double R = 0.0;
  double eps = 0.0;
  int S = 0;
  double optimal_defect = 0.0;
};

struct DiamTable {
  std::string target;
  DiamForm form = DiamForm::F;
  bool exact = false;
  std::vector<DiamEntry> entries;
  /// Optimal defect for each (R, S) scanned, S = 0 .. diameter.
  std::vector<std::pair<double, std::vector<double>>> certificates;

  std::optional<int> lookup(double R, double eps) const;
  /// Non-decreasing in R and non-increasing in eps.
  bool monotone() const;
};

/// diam^F: least integer S whose optimal defect is strictly below eps.
DiamTable diam_folner(const FiniteGroup& g, const std::string& target, const std::vector<double>& R_grid,
                      const std::vector<double>& eps_grid, Arithmetic arithmetic = Arithmetic::Auto);
/// diam^A by the joint LP on the space.
DiamTable diam_property_a(const FiniteMetricSpace& space, const std::string& target,
                          const std::vector<double>& R_grid, const std::vector<double>& eps_grid,
                          Arithmetic arithmetic = Arithmetic::Auto);

/// xi_g = g f on the length metric of the group.
LpWitness folner_to_witness(const FiniteGroup& g, const FolnerFunction& f, double R);
/// f(h) = (1/|G|) sum_g xi_g(g h).
FolnerFunction witness_to_folner(const FiniteGroup& g, const LpWitness& w);

/// phi(h) = (1/|G|) sum_g k(g, g h). Rejects kernels that are not of positive type.
std::vector<double> kernel_to_function(const FiniteGroup& g, const Matrix& k, double tol = 1e-9);
/// k(g, h) = phi(g^-1 h).
Matrix function_to_kernel(const FiniteGroup& g, const std::vector<double>& phi);

struct GrowthRow {
  std::size_t n = 0;
  std::size_t order = 0;
  int S = 0;
  double defect = 0.0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  bool truncated = false;      ///< stopped early because the next group exceeded the budget
  std::size_t truncated_at = 0;
  bool nondecreasing = true;
};

/// diam^F(G^n; 1, eps) for n = 1 .. n_max, stopping once |G^n| exceeds `budget`.
GrowthReport growth_experiment(const FiniteGroup& base, double eps, std::size_t n_max,
                               std::size_t budget = kExactLimit);

}  // namespace coarselab
