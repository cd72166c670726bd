#include "coarselab/error.hpp"
#include "coarselab/linalg.hpp"
#include "coarselab/lp.hpp"
#include "coarselab/rng.hpp"
#include "coarselab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace coarselab {

namespace {

/// step[c][v] is the endpoint of the colour-c edge leaving v.
std::vector<std::vector<Index>> colour_steps(const RegularGraph& g) {
  std::vector<std::vector<Index>> step(g.color_count(), std::vector<Index>(g.size()));
  for (Index v = 0; v < g.size(); ++v)
    for (Index w = 0; w < g.size(); ++w)
      if (g.colors()[v][w] >= 0) step[static_cast<std::size_t>(g.colors()[v][w])][v] = w;
  return step;
}

std::vector<Matrix> displacement_forms(const std::vector<std::vector<Index>>& step, const Matrix& basis) {
  const auto n = basis.rows();
  std::vector<Matrix> forms;
  for (const auto& perm : step) {
    Matrix b = 2.0 * Matrix::Identity(n, n);
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto w = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(v)]);
      b(v, w) -= 1.0;
      b(w, v) -= 1.0;
    }
    forms.push_back(basis.transpose() * b * basis);
  }
  return forms;
}

double worst_displacement(const std::vector<Matrix>& forms, const Vector& u) {
  double m = 0.0;
  for (const auto& b : forms) m = std::max(m, u.dot(b * u));
  return m;
}

struct Dual {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::vector<Vector> candidates;
  std::size_t iterations = 0;
};

/// Kelley cutting planes for max over the simplex of lambda_min(sum w_s B_s).
Dual cutting_plane(const std::vector<Matrix>& forms) {
  const std::size_t k = forms.size();
  const auto dim = forms[0].rows();
  Dual dual;
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  std::vector<std::vector<double>> cuts;
  for (std::size_t it = 0; it < 200; ++it) {
    Matrix combined = Matrix::Zero(dim, dim);
    for (std::size_t s = 0; s < k; ++s) combined += w[s] * forms[s];
    const auto eig = linalg::sym_eigen(combined);
    dual.lower = std::max(dual.lower, eig.values(0));
    const Vector u = eig.vectors.col(0);
    dual.candidates.push_back(u);
    std::vector<double> g(k);
    for (std::size_t s = 0; s < k; ++s) g[s] = u.dot(forms[s] * u);
    cuts.push_back(g);
    dual.upper = std::min(dual.upper, *std::max_element(g.begin(), g.end()));

    lp::Problem<double> prob;
    std::vector<std::size_t> wv(k);
    for (std::size_t s = 0; s < k; ++s) wv[s] = prob.add_var(0.0);
    const std::size_t t = prob.add_var(-1.0);
    std::vector<std::pair<std::size_t, double>> simplex;
    for (std::size_t s = 0; s < k; ++s) simplex.emplace_back(wv[s], 1.0);
    prob.add_row(simplex, lp::Sense::Equal, 1.0);
    for (const auto& cut : cuts) {
      std::vector<std::pair<std::size_t, double>> terms{{t, 1.0}};
      for (std::size_t s = 0; s < k; ++s) terms.emplace_back(wv[s], -cut[s]);
      prob.add_row(terms, lp::Sense::LessEq, 0.0);
    }
    const auto sol = lp::solve(prob);
    ++dual.iterations;
    if (sol.status != lp::Status::Optimal) fail_invariant("kazhdan cutting-plane LP did not reach an optimum");
    const double model = -sol.objective;
    for (std::size_t s = 0; s < k; ++s) w[s] = sol.x[wv[s]];
    if (model - dual.lower <= 1e-10) break;
  }
  return dual;
}

/// Smoothed max descent on the unit sphere from a given start.
double descend(const std::vector<Matrix>& forms, Vector v) {
  v.normalize();
  double best = worst_displacement(forms, v);
  double step = 0.1;
  for (double beta : {10.0, 100.0, 1000.0, 10000.0}) {
    for (int it = 0; it < 200; ++it) {
      std::vector<double> vals(forms.size());
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < forms.size(); ++s) {
        vals[s] = v.dot(forms[s] * v);
        top = std::max(top, vals[s]);
      }
      Vector grad = Vector::Zero(v.size());
      double z = 0.0;
      for (std::size_t s = 0; s < forms.size(); ++s) {
        const double e = std::exp(beta * (vals[s] - top));
        z += e;
        grad += e * 2.0 * (forms[s] * v);
      }
      grad /= z;
      grad -= grad.dot(v) * v;
      if (grad.norm() < 1e-12) break;
      bool improved = false;
      for (int tries = 0; tries < 30; ++tries) {
        Vector trial = (v - step * grad).normalized();
        const double val = worst_displacement(forms, trial);
        if (val < best) {
          best = val;
          v = trial;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) {
        step = 0.1;
        break;
      }
    }
  }
  return best;
}

}  // namespace

bool colored_vertex_transitive(const RegularGraph& g) {
  require(g.colored(), "colored_vertex_transitive needs a generator colouring");
  const auto step = colour_steps(g);
  const std::size_t n = g.size();
  for (Index target = 0; target < n; ++target) {
    std::vector<Index> phi(n, n);
    std::vector<Index> queue{0};
    phi[0] = target;
    bool ok = true;
    for (std::size_t head = 0; head < queue.size() && ok; ++head) {
      const Index v = queue[head];
      for (const auto& s : step) {
        const Index w = s[v];
        const Index image = s[phi[v]];
        if (phi[w] == n) {
          phi[w] = image;
          queue.push_back(w);
        } else if (phi[w] != image) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) return false;
    std::vector<char> hit(n, 0);
    for (Index v = 0; v < n; ++v) {
      if (phi[v] == n || hit[phi[v]]) return false;
      hit[phi[v]] = 1;
    }
  }
  return true;
}

KazhdanReport kazhdan_gap(const RegularGraph& g, const KazhdanOptions& options) {
  require(g.colored(), "kazhdan_gap needs a generator-coloured graph");
  require(g.size() >= 2, "kazhdan_gap needs at least two vertices");
  if (!colored_vertex_transitive(g))
    fail_precondition("kazhdan_gap: the coloured graph is not vertex-transitive, so it is not a Cayley graph");
  const std::size_t n = g.size();
  const auto step = colour_steps(g);
  const Matrix basis = linalg::mean_zero_basis(n);
  const auto forms = displacement_forms(step, basis);

  KazhdanReport r;
  const Dual dual = cutting_plane(forms);
  r.iterations = dual.iterations;
  double upper = dual.upper;
  for (const auto& c : dual.candidates) upper = std::min(upper, descend(forms, c));
  Rng rng(options.seed);
  for (std::size_t i = 0; i < options.restarts; ++i) {
    Vector v(basis.cols());
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
    upper = std::min(upper, descend(forms, v));
  }
  const double lower = std::max(0.0, dual.lower);
  r.eps = std::sqrt(lower);
  r.eps_upper = std::sqrt(std::max(upper, lower));
  r.exact = r.eps_upper - r.eps <= 1e-6;
  r.spectral_bound = std::sqrt(2.0 * laplacian_gap(g).lambda / static_cast<double>(g.degree()));

  const double coeff = r.eps * r.eps / 2.0;
  const auto m = static_cast<double>(n);
  std::vector<char> subset(n);
  auto check = [&](const std::vector<char>& mask) {
    std::size_t a = 0;
    for (char c : mask) a += c ? 1 : 0;
    if (a == 0 || a == n) return;
    const double need = coeff * (1.0 - static_cast<double>(a) / m) * static_cast<double>(a);
    const double margin = static_cast<double>(vertex_boundary(g.adjacency(), mask)) - need;
    ++r.subsets_checked;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_subset.clear();
      for (Index v = 0; v < n; ++v)
        if (mask[v]) r.worst_subset.push_back(v);
    }
  };
  if (n <= options.exact_subset_limit) {
    r.expansion_exact = true;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      for (Index v = 0; v < n; ++v) subset[v] = static_cast<char>((mask >> v) & 1U);
      check(subset);
    }
  } else {
    r.expansion_exact = false;
    std::vector<Index> perm(n);
    for (std::size_t s = 0; s < options.samples; ++s) {
      for (Index i = 0; i < n; ++i) perm[i] = i;
      rng.shuffle(perm);
      const std::size_t a = 1 + static_cast<std::size_t>(rng.below(n - 1));
      std::fill(subset.begin(), subset.end(), 0);
      for (std::size_t i = 0; i < a; ++i) subset[perm[i]] = 1;
      check(subset);
    }
  }
  r.expansion_holds = r.worst_margin >= -1e-9;
  return r;
}

}  // namespace coarselab
