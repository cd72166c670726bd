#include "coarselab/error.hpp"
#include "coarselab/linalg.hpp"
#include "coarselab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coarselab {

Form form_of(const Witness& w) { return static_cast<Form>(w.index()); }

std::string form_name(Form f) {
  switch (f) {
    case Form::AFamily: return "a-family";
    case Form::Lp: return "lp";
    case Form::Tail: return "tail";
    case Form::Partition: return "partition";
    case Form::Vector: return "vector";
    case Form::Kernel: return "kernel";
  }
  return "?";
}

Form parse_form(const std::string& name) {
  for (Form f : {Form::AFamily, Form::Lp, Form::Tail, Form::Partition, Form::Vector, Form::Kernel})
    if (form_name(f) == name) return f;
  fail_precondition("unknown witness form '" + name + "'");
}

const WitnessParams& params_of(const Witness& w) {
  return std::visit([](const auto& v) -> const WitnessParams& { return v.params; }, w);
}

std::size_t witness_points(const Witness& w) {
  struct V {
    std::size_t operator()(const AFamily& a) const { return a.sets.size(); }
    std::size_t operator()(const LpWitness& a) const { return static_cast<std::size_t>(a.xi.rows()); }
    std::size_t operator()(const TailWitness& a) const { return static_cast<std::size_t>(a.zeta.rows()); }
    std::size_t operator()(const PartitionWitness& a) const { return static_cast<std::size_t>(a.phi.cols()); }
    std::size_t operator()(const VectorWitness& a) const { return static_cast<std::size_t>(a.f.rows()); }
    std::size_t operator()(const KernelWitness& a) const { return static_cast<std::size_t>(a.k.rows()); }
  };
  return std::visit(V{}, w);
}

std::pair<std::size_t, std::size_t> afamily_counts(const AFamily& a, Index x, Index y) {
  const auto& ax = a.sets[x];
  const auto& ay = a.sets[y];
  std::size_t common = 0;
  auto i = ax.begin();
  auto j = ay.begin();
  while (i != ax.end() && j != ay.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return {ax.size() + ay.size() - 2 * common, common};
}

double lp_distance(const Matrix& a, Index x, const Matrix& b, Index y, double p) {
  const auto ra = a.row(static_cast<Eigen::Index>(x));
  const auto rb = b.row(static_cast<Eigen::Index>(y));
  if (std::isinf(p)) return (ra - rb).cwiseAbs().maxCoeff();
  if (p == 1.0) return (ra - rb).cwiseAbs().sum();
  if (p == 2.0) return (ra - rb).norm();
  double s = 0.0;
  for (Eigen::Index j = 0; j < ra.size(); ++j) s += std::pow(std::abs(ra(j) - rb(j)), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm_row(const Matrix& a, Index x, double p) {
  const auto r = a.row(static_cast<Eigen::Index>(x));
  if (std::isinf(p)) return r.cwiseAbs().maxCoeff();
  if (p == 1.0) return r.cwiseAbs().sum();
  if (p == 2.0) return r.norm();
  double s = 0.0;
  for (Eigen::Index j = 0; j < r.size(); ++j) s += std::pow(std::abs(r(j)), p);
  return std::pow(s, 1.0 / p);
}

namespace {

constexpr double kUnitTol = 1e-9;

std::string pair_name(const FiniteMetricSpace& s, Index x, Index y) {
  return "(" + s.id(x) + "," + s.id(y) + ")";
}

void violation(WitnessReport& r, std::string what) {
  r.valid = false;
  r.violations.push_back(std::move(what));
}

template <class Variation>
void scan_pairs(WitnessReport& r, const FiniteMetricSpace& space, const std::vector<char>& flagged,
                Variation&& var) {
  r.eps_measured = 0.0;
  r.eps_with_flagged = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    for (Index y = x + 1; y < space.size(); ++y) {
      if (!space.within(x, y, r.R_target)) continue;
      const double v = var(x, y);
      const bool skip = !flagged.empty() && (flagged[x] || flagged[y]);
      r.eps_with_flagged = std::max(r.eps_with_flagged, v);
      if (skip) {
        ++r.flagged_pairs;
        continue;
      }
      ++r.pairs_checked;
      if (!r.worst_pair || v > r.eps_measured) {
        r.eps_measured = v;
        r.worst_pair = std::make_pair(x, y);
      }
    }
  }
}

double support_radius(const Matrix& rows, const FiniteMetricSpace& space) {
  double s = 0.0;
  for (Eigen::Index x = 0; x < rows.rows(); ++x)
    for (Eigen::Index y = 0; y < rows.cols(); ++y)
      if (rows(x, y) != 0.0) s = std::max(s, space.d(static_cast<Index>(x), static_cast<Index>(y)));
  return s;
}

void check_function_rows(WitnessReport& r, const Matrix& rows, const FiniteMetricSpace& space,
                         double p) {
  require(p >= 1.0, "witness exponent must be >= 1");
  for (Eigen::Index x = 0; x < rows.rows(); ++x) {
    for (Eigen::Index y = 0; y < rows.cols(); ++y) {
      if (rows(x, y) < 0.0 || !std::isfinite(rows(x, y))) {
        violation(r, "negative or non-finite value at " +
                         pair_name(space, static_cast<Index>(x), static_cast<Index>(y)));
        return;
      }
    }
    const double dev = std::abs(lp_norm_row(rows, static_cast<Index>(x), p) - 1.0);
    r.norm_deviation = std::max(r.norm_deviation, dev);
  }
  if (r.norm_deviation > kUnitTol)
    violation(r, "function norms deviate from 1 by " + std::to_string(r.norm_deviation));
}

// || row restricted to {y : lo < d(x,y) <= hi} ||_p  (lo < 0 includes x itself)
double shell_mass(const Matrix& rows, Index x, const FiniteMetricSpace& space, double lo, double hi,
                  double p) {
  double s = 0.0;
  for (Index y = 0; y < space.size(); ++y) {
    const double dxy = space.d(x, y);
    const bool in = (lo < 0 || dxy > lo + space.tolerance()) && dxy <= hi + space.tolerance();
    if (!in) continue;
    const double v = std::abs(rows(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
    s += p == 1.0 ? v : std::pow(v, p);
  }
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

void measure(WitnessReport& r, const AFamily& a, const FiniteMetricSpace& space) {
  for (Index x = 0; x < a.sets.size(); ++x) {
    if (a.sets[x].empty()) violation(r, "A_" + space.id(x) + " is empty");
    for (const auto& [y, n] : a.sets[x]) {
      if (y >= space.size() || n == 0) {
        violation(r, "A_" + space.id(x) + " has an element outside X x N+");
        continue;
      }
      r.S_measured = std::max(r.S_measured, space.d(x, y));
    }
  }
  if (!r.valid) return;
  if (!a.truncated.empty()) require(a.truncated.size() == space.size(), "truncation flags size mismatch");
  scan_pairs(r, space, a.truncated, [&](Index x, Index y) {
    auto [sym, common] = afamily_counts(a, x, y);
    if (common == 0) return sym == 0 ? 0.0 : kInf;
    return static_cast<double>(sym) / static_cast<double>(common);
  });
}

void measure(WitnessReport& r, const LpWitness& w, const FiniteMetricSpace& space) {
  check_function_rows(r, w.xi, space, w.params.p);
  r.S_measured = support_radius(w.xi, space);
  scan_pairs(r, space, {}, [&](Index x, Index y) { return lp_distance(w.xi, x, w.xi, y, w.params.p); });
}

void measure(WitnessReport& r, const TailWitness& w, const FiniteMetricSpace& space) {
  check_function_rows(r, w.zeta, space, w.params.p);
  r.S_measured = support_radius(w.zeta, space);
  scan_pairs(r, space, {}, [&](Index x, Index y) { return lp_distance(w.zeta, x, w.zeta, y, w.params.p); });
  r.in_ball_min = kInf;
  r.annulus_max = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    r.in_ball_min = std::min(r.in_ball_min, shell_mass(w.zeta, x, space, -1.0, w.params.S, w.params.p));
    r.annulus_max = std::max(
        r.annulus_max, shell_mass(w.zeta, x, space, w.params.S, r.R_target + w.params.S, w.params.p));
  }
  if (!(r.in_ball_min > 1.0 - w.params.delta - kUnitTol))
    violation(r, "in-ball mass " + std::to_string(r.in_ball_min) + " not above 1 - delta");
}

void measure(WitnessReport& r, const PartitionWitness& w, const FiniteMetricSpace& space) {
  const auto m = static_cast<std::size_t>(w.phi.rows());
  if (w.cover.size() != m) {
    violation(r, "cover size does not match the number of functions");
    return;
  }
  std::vector<char> member(space.size());
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(member.begin(), member.end(), 0);
    for (Index y : w.cover[i]) {
      if (y >= space.size()) {
        violation(r, "cover set " + std::to_string(i) + " references an unknown point");
        return;
      }
      member[y] = 1;
    }
    r.S_measured = std::max(r.S_measured, space.diameter_of(w.cover[i]));
    for (Index x = 0; x < space.size(); ++x) {
      const double v = w.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(x));
      if (v < -kUnitTol || v > 1.0 + kUnitTol || !std::isfinite(v))
        violation(r, "phi_" + std::to_string(i) + "(" + space.id(x) + ") outside [0,1]");
      if (v != 0.0 && !member[x])
        violation(r, "phi_" + std::to_string(i) + " not supported in its cover set at " + space.id(x));
    }
  }
  for (Index x = 0; x < space.size(); ++x)
    r.norm_deviation = std::max(r.norm_deviation, std::abs(w.phi.col(static_cast<Eigen::Index>(x)).sum() - 1.0));
  if (r.norm_deviation > kUnitTol) violation(r, "partition does not sum to 1");
  scan_pairs(r, space, {}, [&](Index x, Index y) {
    return (w.phi.col(static_cast<Eigen::Index>(x)) - w.phi.col(static_cast<Eigen::Index>(y))).cwiseAbs().sum();
  });
}

void measure(WitnessReport& r, const VectorWitness& w, const FiniteMetricSpace& space) {
  Matrix gram = w.f * w.f.transpose();
  for (Index x = 0; x < space.size(); ++x)
    r.norm_deviation = std::max(r.norm_deviation, std::abs(std::sqrt(gram(x, x)) - 1.0));
  if (r.norm_deviation > kUnitTol) violation(r, "vectors are not unit length");
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = 0; y < space.size(); ++y)
      if (std::abs(gram(x, y)) > kUnitTol) r.S_measured = std::max(r.S_measured, space.d(x, y));
  if (w.params.S > 0.0 && r.S_measured > w.params.S + space.tolerance())
    violation(r, "non-orthogonal vectors beyond the declared S");
  scan_pairs(r, space, {}, [&](Index x, Index y) {
    return (w.f.row(static_cast<Eigen::Index>(x)) - w.f.row(static_cast<Eigen::Index>(y))).norm();
  });
}

void measure(WitnessReport& r, const KernelWitness& w, const FiniteMetricSpace& space) {
  const double scale = std::max(1.0, linalg::max_abs(w.k));
  if (!linalg::is_symmetric(w.k, kUnitTol * scale)) {
    violation(r, "kernel is not symmetric");
    return;
  }
  for (Index x = 0; x < space.size(); ++x)
    r.norm_deviation = std::max(r.norm_deviation, std::abs(w.k(x, x) - 1.0));
  if (r.norm_deviation > kUnitTol) violation(r, "kernel is not normalized");
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = 0; y < space.size(); ++y)
      if (std::abs(w.k(x, y)) > kUnitTol) r.S_measured = std::max(r.S_measured, space.d(x, y));
  auto eig = linalg::sym_eigen(w.k);
  r.min_eigenvalue = eig.values(0);
  if (r.min_eigenvalue < -kUnitTol * scale) violation(r, "kernel is not of positive type");
  scan_pairs(r, space, {}, [&](Index x, Index y) { return std::abs(1.0 - w.k(x, y)); });
}

}  // namespace

WitnessReport measure_witness(const Witness& w, const FiniteMetricSpace& space, double R_target) {
  const std::size_t n = witness_points(w);
  if (n != space.size())
    fail_precondition("witness has " + std::to_string(n) + " points but the space has " +
                      std::to_string(space.size()));
  const Form f = form_of(w);
  if (f == Form::Lp || f == Form::Tail) {
    const Matrix& rows = f == Form::Lp ? std::get<LpWitness>(w).xi : std::get<TailWitness>(w).zeta;
    if (static_cast<std::size_t>(rows.cols()) != space.size())
      fail_precondition("witness functions must have one column per point");
  }
  if (f == Form::Partition && static_cast<std::size_t>(std::get<PartitionWitness>(w).phi.cols()) != space.size())
    fail_precondition("partition functions must have one column per point");
  if (f == Form::Kernel && std::get<KernelWitness>(w).k.cols() != std::get<KernelWitness>(w).k.rows())
    fail_precondition("kernel must be square");
  require(R_target >= 0.0, "R_target must be nonnegative");
  WitnessReport r;
  r.form = f;
  r.R_target = R_target;
  std::visit([&](const auto& v) { measure(r, v, space); }, w);
  return r;
}

}  // namespace coarselab
