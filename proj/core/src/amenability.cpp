#include "coarselab/amenability.hpp"

#include "coarselab/error.hpp"
#include "coarselab/kernels.hpp"
#include "coarselab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace coarselab {

namespace {

constexpr double kSumTol = 1e-9;

std::vector<Index> nontrivial_ball(const FiniteGroup& g, double R) {
  std::vector<Index> out;
  for (Index a : g.ball(R))
    if (a != g.identity()) out.push_back(a);
  return out;
}

bool use_exact(Arithmetic a, std::size_t size) {
  return a == Arithmetic::Exact || (a == Arithmetic::Auto && size <= kExactLimit);
}

double to_double(double v) { return v; }
double to_double(const lp::Rational& v) { return v.get_d(); }

template <class T>
struct Built {
  lp::Problem<T> problem;
  std::size_t t = 0;
};

/// Adds u_z >= |lhs_z - rhs_z| for every z and the row sum_z u_z <= t.
/// Each side is a variable index or nullopt for a structural zero.
template <class T>
void add_l1_bound(Built<T>& b, const std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>>& terms) {
  std::vector<std::pair<std::size_t, T>> total{{b.t, T(-1)}};
  for (const auto& [lhs, rhs] : terms) {
    if (!lhs && !rhs) continue;
    const std::size_t u = b.problem.add_var(T(0));
    total.emplace_back(u, T(1));
    for (int sign : {1, -1}) {
      std::vector<std::pair<std::size_t, T>> row{{u, T(1)}};
      if (lhs) row.emplace_back(*lhs, T(-sign));
      if (rhs) row.emplace_back(*rhs, T(sign));
      b.problem.add_row(std::move(row), lp::Sense::GreaterEq, T(0));
    }
  }
  b.problem.add_row(std::move(total), lp::Sense::LessEq, T(0));
}

template <class T>
struct Solved {
  std::vector<double> x;
  T objective{0};
  std::size_t pivots = 0;
};

template <class T>
Solved<T> run(const lp::Problem<T>& problem, const char* what) {
  const auto sol = lp::solve(problem);
  if (sol.status != lp::Status::Optimal)
    fail_invariant(std::string(what) + ": linear program did not reach an optimum (solver fault)");
  Solved<T> s;
  s.objective = sol.objective;
  s.pivots = sol.pivots;
  for (const auto& v : sol.x) s.x.push_back(to_double(v));
  return s;
}

template <class T>
FolnerOptimum folner_lp(const FiniteGroup& g, double R, double S) {
  const auto ball = g.ball(S);
  std::vector<std::optional<std::size_t>> var(g.size());
  Built<T> b;
  std::vector<std::pair<std::size_t, T>> sum;
  for (Index h : ball) {
    var[h] = b.problem.add_var(T(0));
    sum.emplace_back(*var[h], T(1));
  }
  b.t = b.problem.add_var(T(1));
  b.problem.add_row(std::move(sum), lp::Sense::Equal, T(1));
  for (Index a : nontrivial_ball(g, R)) {
    std::vector<char> in(g.size(), 0);
    std::vector<Index> support;
    for (Index h : ball) {
      for (Index z : {h, g.mul(a, h)})
        if (!in[z]) {
          in[z] = 1;
          support.push_back(z);
        }
    }
    std::sort(support.begin(), support.end());
    std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> terms;
    for (Index z : support) terms.emplace_back(var[g.mul(g.inv(a), z)], var[z]);
    add_l1_bound(b, terms);
  }
  const auto s = run(b.problem, "optimal_folner");
  FolnerOptimum out;
  std::vector<double> values(g.size(), 0.0);
  double total = 0.0;
  for (Index h : ball) total += values[h] = std::max(0.0, s.x[*var[h]]);
  for (auto& v : values) v /= total;
  out.f = make_folner(g, std::move(values));
  out.defect = to_double(s.objective);
  if constexpr (std::is_same_v<T, lp::Rational>) out.exact_defect = s.objective;
  out.pivots = s.pivots;
  return out;
}

template <class T>
PropertyAOptimum property_a_lp(const FiniteMetricSpace& space, double R, double S) {
  const std::size_t n = space.size();
  std::vector<std::vector<std::optional<std::size_t>>> var(n, std::vector<std::optional<std::size_t>>(n));
  Built<T> b;
  for (Index x = 0; x < n; ++x)
    for (Index y : space.closed_ball(x, S)) var[x][y] = b.problem.add_var(T(0));
  b.t = b.problem.add_var(T(1));
  for (Index x = 0; x < n; ++x) {
    std::vector<std::pair<std::size_t, T>> sum;
    for (Index y = 0; y < n; ++y)
      if (var[x][y]) sum.emplace_back(*var[x][y], T(1));
    b.problem.add_row(std::move(sum), lp::Sense::Equal, T(1));
  }
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) {
      if (!space.within(x, y, R)) continue;
      std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> terms;
      for (Index z = 0; z < n; ++z) terms.emplace_back(var[x][z], var[y][z]);
      add_l1_bound(b, terms);
    }
  const auto s = run(b.problem, "optimal_property_a");
  PropertyAOptimum out;
  out.xi = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      if (var[x][y]) out.xi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = std::max(0.0, s.x[*var[x][y]]);
  out.defect = to_double(s.objective);
  if constexpr (std::is_same_v<T, lp::Rational>) out.exact_defect = s.objective;
  out.pivots = s.pivots;
  return out;
}

struct Cell {
  double defect = 0.0;
  std::optional<lp::Rational> exact;
};

bool below(const Cell& c, double eps) {
  if (c.exact) return *c.exact < lp::Rational(eps);
  return c.defect < eps - kSumTol;
}

template <class Solve>
DiamTable scan(const std::string& target, DiamForm form, bool exact, double diameter,
               const std::vector<double>& R_grid, const std::vector<double>& eps_grid, Solve solve) {
  for (double eps : eps_grid) require(eps > 0.0, "diam table: eps values must be positive");
  for (double R : R_grid) require(R >= 0.0, "diam table: R values must be nonnegative");
  const int s_max = static_cast<int>(std::ceil(diameter - 1e-9));
  std::vector<std::vector<Cell>> cells(R_grid.size());
  parallel_chunks(R_grid.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (int S = 0; S <= s_max; ++S) {
        cells[i].push_back(solve(R_grid[i], static_cast<double>(S)));
        if (cells[i].back().defect == 0.0 && (!cells[i].back().exact || sgn(*cells[i].back().exact) == 0)) break;
      }
  });
  DiamTable table;
  table.target = target;
  table.form = form;
  table.exact = exact;
  for (std::size_t i = 0; i < R_grid.size(); ++i) {
    std::vector<double> defects;
    for (const auto& c : cells[i]) defects.push_back(c.defect);
    table.certificates.emplace_back(R_grid[i], defects);
    for (double eps : eps_grid) {
      std::optional<int> found;
      for (std::size_t S = 0; S < cells[i].size() && !found; ++S)
        if (below(cells[i][S], eps)) found = static_cast<int>(S);
      if (!found)
        fail_invariant("diam table: no admissible S up to the diameter for R=" + std::to_string(R_grid[i]) +
                       ", eps=" + std::to_string(eps));
      table.entries.push_back(DiamEntry{R_grid[i], eps, *found, cells[i][static_cast<std::size_t>(*found)].defect});
    }
  }
  return table;
}

}  // namespace

FolnerFunction make_folner(const FiniteGroup& g, std::vector<double> values) {
  require(values.size() == g.size(), "Folner function needs one value per group element");
  FolnerFunction f;
  double total = 0.0;
  for (Index h = 0; h < g.size(); ++h) {
    if (!(values[h] >= 0.0)) fail_invariant("Folner function is negative at " + g.element(h));
    total += values[h];
    if (values[h] > 0.0) f.S = std::max(f.S, static_cast<double>(g.length(h)));
  }
  if (std::abs(total - 1.0) > kSumTol) fail_invariant("Folner function does not sum to 1");
  f.values = std::move(values);
  return f;
}

FolnerFunction uniform_folner(const FiniteGroup& g) {
  return make_folner(g, std::vector<double>(g.size(), 1.0 / static_cast<double>(g.size())));
}

FolnerFunction delta_folner(const FiniteGroup& g) {
  std::vector<double> v(g.size(), 0.0);
  v[g.identity()] = 1.0;
  return make_folner(g, std::move(v));
}

std::vector<double> translate(const FiniteGroup& g, Index by, const std::vector<double>& f) {
  std::vector<double> out(g.size());
  const Index inv = g.inv(by);
  for (Index h = 0; h < g.size(); ++h) out[h] = f[g.mul(inv, h)];
  return out;
}

double reiter_defect(const FiniteGroup& g, const FolnerFunction& f, double R) {
  require(f.values.size() == g.size(), "reiter_defect: function size does not match the group");
  double worst = 0.0;
  for (Index a : nontrivial_ball(g, R)) {
    const auto moved = translate(g, a, f.values);
    double d = 0.0;
    for (Index h = 0; h < g.size(); ++h) d += std::abs(moved[h] - f.values[h]);
    worst = std::max(worst, d);
  }
  return worst;
}

lp::Rational reiter_defect_exact(const FiniteGroup& g, const std::vector<lp::Rational>& f, double R) {
  require(f.size() == g.size(), "reiter_defect_exact: function size does not match the group");
  lp::Rational worst = 0;
  for (Index a : nontrivial_ball(g, R)) {
    lp::Rational d = 0;
    for (Index h = 0; h < g.size(); ++h) d += abs(f[g.mul(g.inv(a), h)] - f[h]);
    if (d > worst) worst = d;
  }
  return worst;
}

FolnerOptimum optimal_folner(const FiniteGroup& g, double R, double S, Arithmetic arithmetic) {
  require(S >= 0.0, "optimal_folner: S must be nonnegative");
  require(R >= 0.0, "optimal_folner: R must be nonnegative");
  if (use_exact(arithmetic, g.size())) return folner_lp<lp::Rational>(g, R, S);
  return folner_lp<double>(g, R, S);
}

PropertyAOptimum optimal_property_a(const FiniteMetricSpace& space, double R, double S, Arithmetic arithmetic) {
  require(space.size() >= 1, "optimal_property_a: empty space");
  require(S >= 0.0 && R >= 0.0, "optimal_property_a: R and S must be nonnegative");
  if (use_exact(arithmetic, space.size())) return property_a_lp<lp::Rational>(space, R, S);
  return property_a_lp<double>(space, R, S);
}

std::string diam_form_name(DiamForm form) { return form == DiamForm::A ? "diamA" : "diamF"; }

std::optional<int> DiamTable::lookup(double R, double eps) const {
  for (const auto& e : entries)
    if (e.R == R && e.eps == eps) return e.S;
  return std::nullopt;
}

bool DiamTable::monotone() const {
  for (const auto& a : entries)
    for (const auto& b : entries) {
      if (a.eps == b.eps && a.R < b.R && a.S > b.S) return false;
      if (a.R == b.R && a.eps < b.eps && a.S < b.S) return false;
    }
  return true;
}

DiamTable diam_folner(const FiniteGroup& g, const std::string& target, const std::vector<double>& R_grid,
                      const std::vector<double>& eps_grid, Arithmetic arithmetic) {
  double diameter = 0.0;
  for (int l : g.lengths()) diameter = std::max(diameter, static_cast<double>(l));
  const bool exact = use_exact(arithmetic, g.size());
  return scan(target, DiamForm::F, exact, diameter, R_grid, eps_grid, [&](double R, double S) {
    const auto opt = optimal_folner(g, R, S, exact ? Arithmetic::Exact : Arithmetic::Float);
    return Cell{opt.defect, opt.exact_defect};
  });
}

DiamTable diam_property_a(const FiniteMetricSpace& space, const std::string& target,
                          const std::vector<double>& R_grid, const std::vector<double>& eps_grid,
                          Arithmetic arithmetic) {
  const bool exact = use_exact(arithmetic, space.size());
  return scan(target, DiamForm::A, exact, space.diameter(), R_grid, eps_grid, [&](double R, double S) {
    const auto opt = optimal_property_a(space, R, S, exact ? Arithmetic::Exact : Arithmetic::Float);
    return Cell{opt.defect, opt.exact_defect};
  });
}

LpWitness folner_to_witness(const FiniteGroup& g, const FolnerFunction& f, double R) {
  require(f.values.size() == g.size(), "folner_to_witness: function size does not match the group");
  const auto n = static_cast<Eigen::Index>(g.size());
  LpWitness w;
  w.xi = Matrix::Zero(n, n);
  for (Index a = 0; a < g.size(); ++a) {
    const auto row = translate(g, a, f.values);
    for (Index h = 0; h < g.size(); ++h) w.xi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(h)) = row[h];
  }
  w.params.R = R;
  w.params.eps = reiter_defect(g, f, R);
  w.params.S = f.S;
  w.params.p = 1.0;
  return w;
}

FolnerFunction witness_to_folner(const FiniteGroup& g, const LpWitness& w) {
  const std::size_t n = g.size();
  require(static_cast<std::size_t>(w.xi.rows()) == n && static_cast<std::size_t>(w.xi.cols()) == n,
          "witness_to_folner: witness does not live on the group");
  for (Index a = 0; a < n; ++a) {
    double row = 0.0;
    for (Index h = 0; h < n; ++h) {
      const double v = w.xi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(h));
      require(v >= 0.0, "witness_to_folner: witness must be nonnegative");
      row += v;
    }
    require(std::abs(row - 1.0) <= kSumTol, "witness_to_folner: row " + g.element(a) + " does not sum to 1");
  }
  std::vector<double> f(n, 0.0);
  for (Index h = 0; h < n; ++h) {
    double sum = 0.0;
    for (Index a = 0; a < n; ++a) sum += w.xi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(g.mul(a, h)));
    f[h] = sum / static_cast<double>(n);
  }
  return make_folner(g, std::move(f));
}

std::vector<double> kernel_to_function(const FiniteGroup& g, const Matrix& k, double tol) {
  const std::size_t n = g.size();
  require(static_cast<std::size_t>(k.rows()) == n && k.rows() == k.cols(),
          "kernel_to_function: kernel does not live on the group");
  const Kernel kernel(k);
  const auto cls = classify_kernel(kernel, tol);
  if (!cls.positive_type)
    fail_precondition("kernel_to_function: kernel is not of positive type (min eigenvalue " +
                      std::to_string(cls.min_eigenvalue) + ")");
  std::vector<double> phi(n, 0.0);
  for (Index h = 0; h < n; ++h) {
    double sum = 0.0;
    for (Index a = 0; a < n; ++a) sum += k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(g.mul(a, h)));
    phi[h] = sum / static_cast<double>(n);
  }
  return phi;
}

Matrix function_to_kernel(const FiniteGroup& g, const std::vector<double>& phi) {
  require(phi.size() == g.size(), "function_to_kernel: one value per group element");
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix k(n, n);
  for (Index a = 0; a < g.size(); ++a)
    for (Index b = 0; b < g.size(); ++b)
      k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = phi[g.mul(g.inv(a), b)];
  return k;
}

GrowthReport growth_experiment(const FiniteGroup& base, double eps, std::size_t n_max, std::size_t budget) {
  require(n_max >= 1, "growth_experiment: n_max must be positive");
  GrowthReport report;
  std::size_t order = 1;
  FiniteMetricSpace previous;
  for (std::size_t n = 1; n <= n_max; ++n) {
    order *= base.size();
    if (order > budget) {
      report.truncated = true;
      report.truncated_at = n;
      break;
    }
    const auto g = direct_power(base, n);
    const auto metric = cayley_metric(g);
    if (n > 1) {
      const auto product = lp_product(previous, cayley_metric(base), 1.0);
      if ((product.dist() - metric.dist()).cwiseAbs().maxCoeff() > 1e-9)
        fail_invariant("growth_experiment: product word metric differs from the l^1 product at n=" +
                       std::to_string(n));
    }
    previous = metric;
    const auto table = diam_folner(g, "power" + std::to_string(n), {1.0}, {eps});
    report.rows.push_back(GrowthRow{n, g.size(), table.entries[0].S, table.entries[0].optimal_defect});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (report.rows[i].S < report.rows[i - 1].S) report.nondecreasing = false;
  return report;
}

}  // namespace coarselab
