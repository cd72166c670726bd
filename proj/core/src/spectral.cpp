#include "coarselab/spectral.hpp"

#include "coarselab/error.hpp"
#include "coarselab/linalg.hpp"
#include "coarselab/parallel.hpp"
#include "coarselab/rng.hpp"
#include "coarselab/witness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace coarselab {

RegularGraph::RegularGraph(Adjacency adjacency, std::vector<std::vector<int>> colors)
    : adj_(std::move(adjacency)), colors_(std::move(colors)) {
  validate_adjacency(adj_);
  const std::size_t n = adj_.size();
  degree_ = static_cast<std::size_t>(std::count(adj_[0].begin(), adj_[0].end(), 1));
  for (std::size_t v = 0; v < n; ++v) {
    const auto deg = static_cast<std::size_t>(std::count(adj_[v].begin(), adj_[v].end(), 1));
    if (deg != degree_)
      fail_precondition("graph is not regular: vertex " + std::to_string(v) + " has degree " +
                        std::to_string(deg) + ", expected " + std::to_string(degree_));
  }
  if (!is_connected(adj_)) fail_precondition("regular graph must be connected");
  if (colors_.empty()) return;
  require(colors_.size() == n, "colour table must have one row per vertex");
  int max_color = -1;
  for (std::size_t v = 0; v < n; ++v) {
    require(colors_[v].size() == n, "colour table rows must have one entry per vertex");
    for (std::size_t w = 0; w < n; ++w) {
      const int c = colors_[v][w];
      require((c >= 0) == (adj_[v][w] == 1),
              "colour table disagrees with adjacency at (" + std::to_string(v) + "," + std::to_string(w) + ")");
      max_color = std::max(max_color, c);
    }
  }
  color_count_ = static_cast<std::size_t>(max_color + 1);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<int> seen(color_count_, 0);
    for (std::size_t w = 0; w < n; ++w)
      if (colors_[v][w] >= 0) ++seen[static_cast<std::size_t>(colors_[v][w])];
    for (std::size_t c = 0; c < color_count_; ++c)
      require(seen[c] == 1, "vertex " + std::to_string(v) + " must have exactly one step of colour " +
                                std::to_string(c));
  }
}

std::vector<std::pair<Index, Index>> RegularGraph::edges() const {
  std::vector<std::pair<Index, Index>> e;
  for (Index v = 0; v < size(); ++v)
    for (Index w = v + 1; w < size(); ++w)
      if (adj_[v][w]) e.emplace_back(v, w);
  return e;
}

SpectralReport laplacian_gap(const RegularGraph& g) {
  const std::size_t n = g.size();
  Matrix lap = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index v = 0; v < n; ++v) {
    lap(v, v) = static_cast<double>(g.degree());
    for (Index w = 0; w < n; ++w)
      if (g.adjacency()[v][w]) lap(v, w) = -1.0;
  }
  auto eig = linalg::sym_eigen(lap);
  SpectralReport r;
  r.spectrum = eig.values;
  if (n == 1) return r;
  r.lambda = eig.values(1);
  r.eigenvector = eig.vectors.col(1);
  return r;
}

PoincareResult poincare_check(const RegularGraph& g, const Vector& f, double lambda) {
  require(static_cast<std::size_t>(f.size()) == g.size(), "poincare_check: f must be defined on every vertex");
  require(lambda > 0.0, "poincare_check: lambda must be positive");
  PoincareResult r;
  const double mean = f.mean();
  r.lhs = (f.array() - mean).square().sum();
  double edge_sum = 0.0;
  for (auto [v, w] : g.edges()) edge_sum += (f(v) - f(w)) * (f(v) - f(w));
  r.rhs = edge_sum / lambda;
  r.holds = r.lhs <= r.rhs + 1e-9;
  return r;
}

PoincareResult poincare_check(const RegularGraph& g, const Vector& f) {
  return poincare_check(g, f, laplacian_gap(g).lambda);
}

std::size_t vertex_boundary(const Adjacency& adjacency, const std::vector<char>& subset) {
  std::size_t count = 0;
  for (Index w = 0; w < adjacency.size(); ++w) {
    if (subset[w]) continue;
    for (Index v = 0; v < adjacency.size(); ++v)
      if (subset[v] && adjacency[v][w]) {
        ++count;
        break;
      }
  }
  return count;
}

namespace {

struct Candidate {
  double value = kInf;
  std::uint64_t mask = 0;
};

std::vector<std::uint64_t> neighbour_masks(const Adjacency& adjacency) {
  std::vector<std::uint64_t> m(adjacency.size(), 0);
  for (Index v = 0; v < adjacency.size(); ++v)
    for (Index w = 0; w < adjacency.size(); ++w)
      if (adjacency[v][w]) m[v] |= std::uint64_t{1} << w;
  return m;
}

double ratio(std::uint64_t mask, const std::vector<std::uint64_t>& nb, std::size_t n) {
  std::uint64_t reach = 0;
  for (std::uint64_t m = mask; m; m &= m - 1) reach |= nb[static_cast<std::size_t>(std::countr_zero(m))];
  const auto boundary = static_cast<double>(std::popcount(reach & ~mask));
  const auto a = static_cast<double>(std::popcount(mask));
  return boundary / ((1.0 - a / static_cast<double>(n)) * a);
}

std::vector<Index> mask_to_subset(std::uint64_t mask) {
  std::vector<Index> s;
  for (std::uint64_t m = mask; m; m &= m - 1) s.push_back(static_cast<Index>(std::countr_zero(m)));
  return s;
}

}  // namespace

ExpansionReport expansion_constant(const Adjacency& adjacency, const ExpansionOptions& options) {
  validate_adjacency(adjacency);
  const std::size_t n = adjacency.size();
  require(n >= 2, "expansion_constant needs at least two vertices");
  ExpansionReport r;
  if (options.mode == ExpansionOptions::Mode::Exact) {
    require(n <= 20, "exact expansion enumeration is limited to 20 vertices");
    const auto nb = neighbour_masks(adjacency);
    const std::uint64_t total = (std::uint64_t{1} << n) - 2;  // masks 1 .. 2^n - 2
    std::vector<Candidate> best(chunk_count(total));
    parallel_chunks(total, [&](std::size_t c, std::size_t b, std::size_t e) {
      Candidate local;
      for (std::size_t i = b; i < e; ++i) {
        const std::uint64_t mask = i + 1;
        const double v = ratio(mask, nb, n);
        if (v < local.value) local = {v, mask};
      }
      best[c] = local;
    });
    Candidate winner;
    for (const auto& c : best)
      if (c.value < winner.value) winner = c;
    r.c = winner.value;
    r.subset = mask_to_subset(winner.mask);
    r.exact = true;
    r.evaluated = total;
    return r;
  }
  if (!options.samples) fail_precondition("sampled expansion requires a sample count");
  require(*options.samples > 0, "sampled expansion requires a positive sample count");
  Rng rng(options.seed);
  r.exact = false;
  r.c = kInf;
  std::vector<char> subset(n);
  for (std::size_t s = 0; s < *options.samples; ++s) {
    const std::size_t a = 1 + static_cast<std::size_t>(rng.below(n - 1));
    std::vector<Index> perm(n);
    for (Index i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::fill(subset.begin(), subset.end(), 0);
    for (std::size_t i = 0; i < a; ++i) subset[perm[i]] = 1;
    const double v = static_cast<double>(vertex_boundary(adjacency, subset)) /
                     ((1.0 - static_cast<double>(a) / static_cast<double>(n)) * static_cast<double>(a));
    if (v < r.c) {
      r.c = v;
      r.subset.clear();
      for (Index i = 0; i < n; ++i)
        if (subset[i]) r.subset.push_back(i);
    }
  }
  r.evaluated = *options.samples;
  return r;
}

ConcentrationReport concentration_test(const RegularGraph& g, double lambda, const Matrix& coords,
                                       double c_edge) {
  require(static_cast<std::size_t>(coords.rows()) == g.size(), "concentration_test: one coordinate row per vertex");
  require(lambda > 0.0, "concentration_test: lambda must be positive");
  require(c_edge >= 0.0, "concentration_test: c_edge must be nonnegative");
  ConcentrationReport r;
  r.lambda = lambda;
  r.c_edge = c_edge;
  for (auto [v, w] : g.edges()) {
    const double step = (coords.row(static_cast<Eigen::Index>(v)) - coords.row(static_cast<Eigen::Index>(w))).norm();
    r.max_edge_step = std::max(r.max_edge_step, step);
    if (step > c_edge * (1 + 1e-9) + 1e-12)
      fail_precondition("concentration_test: edge (" + std::to_string(v) + "," + std::to_string(w) +
                        ") moves " + std::to_string(step) + " > c_edge");
  }
  const Eigen::RowVectorXd centre = coords.colwise().mean();
  const double c2 = c_edge * c_edge;
  const double r2_stated = 2.0 * c2 / lambda;
  const double r2_markov = static_cast<double>(g.degree()) * c2 / lambda;
  r.radius_stated = std::sqrt(r2_stated);
  r.radius_markov = std::sqrt(r2_markov);
  for (Eigen::Index v = 0; v < coords.rows(); ++v) {
    const double d2 = (coords.row(v) - centre).squaredNorm();
    if (d2 <= r2_stated * (1 + 1e-9) + 1e-15) ++r.inside_stated;
    if (d2 <= r2_markov * (1 + 1e-9) + 1e-15) ++r.inside_markov;
  }
  r.required = (g.size() + 1) / 2;
  return r;
}

RegularGraph random_regular_graph(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(d >= 1, "random_regular_graph: degree must be positive");
  require(n > d, "random_regular_graph: need n > d");
  require((n * d) % 2 == 0, "random_regular_graph: n * d must be even");
  Rng rng(seed);
  std::vector<std::size_t> stubs(n * d);
  for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = i / d;
  for (std::size_t attempt = 0; attempt < 100000; ++attempt) {
    rng.shuffle(stubs);
    Adjacency adj(n, std::vector<int>(n, 0));
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      const auto a = stubs[i], b = stubs[i + 1];
      if (a == b || adj[a][b]) {
        simple = false;
        break;
      }
      adj[a][b] = adj[b][a] = 1;
    }
    if (simple && is_connected(adj)) return RegularGraph(std::move(adj));
  }
  fail_invariant("random_regular_graph: no simple connected pairing found");
}

}  // namespace coarselab
