#pragma once

#include "coarselab/metric.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace coarselab {

/// Connected D-regular simple graph, optionally with a generator colouring:
/// colors[v][w] is the generator index labelling the step v -> w, or -1.
class RegularGraph {
 public:
  RegularGraph() = default;
  explicit RegularGraph(Adjacency adjacency, std::vector<std::vector<int>> colors = {});

  const Adjacency& adjacency() const noexcept { return adj_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return adj_.size(); }
  bool colored() const noexcept { return !colors_.empty(); }
  const std::vector<std::vector<int>>& colors() const noexcept { return colors_; }
  std::size_t color_count() const noexcept { return color_count_; }
  /// Undirected edge list with v < w.
  std::vector<std::pair<Index, Index>> edges() const;

 private:
  Adjacency adj_;
  std::size_t degree_ = 0;
  std::vector<std::vector<int>> colors_;
  std::size_t color_count_ = 0;
};

struct SpectralReport {
  Vector spectrum;   ///< ascending Laplacian eigenvalues
  double lambda = 0.0;
  Vector eigenvector;
};

/// Spectrum of D I - A.
SpectralReport laplacian_gap(const RegularGraph& g);

struct PoincareResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

PoincareResult poincare_check(const RegularGraph& g, const Vector& f, double lambda);
PoincareResult poincare_check(const RegularGraph& g, const Vector& f);

struct ExpansionOptions {
  enum class Mode { Exact, Sampled } mode = Mode::Exact;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
};

struct ExpansionReport {
  double c = 0.0;
  std::vector<Index> subset;
  bool exact = true;
  std::size_t evaluated = 0;
};

/// Outer vertex boundary size of the subset given as a bitmask.
std::size_t vertex_boundary(const Adjacency& adjacency, const std::vector<char>& subset);

/// min over nonempty proper A of |dA| / ((1 - |A|/|V|) |A|).
ExpansionReport expansion_constant(const Adjacency& adjacency, const ExpansionOptions& options = {});

struct ConcentrationReport {
  double lambda = 0.0;
  double c_edge = 0.0;
  double max_edge_step = 0.0;
  double radius_stated = 0.0;    ///< sqrt(2 c^2 / lambda)
  double radius_markov = 0.0;    ///< sqrt(D c^2 / lambda), the Markov-inequality radius
  std::size_t inside_stated = 0;
  std::size_t inside_markov = 0;
  std::size_t required = 0;      ///< ceil(|V| / 2)
  bool holds_stated() const { return inside_stated >= required; }
  bool holds_markov() const { return inside_markov >= required; }
};

ConcentrationReport concentration_test(const RegularGraph& g, double lambda, const Matrix& coords,
                                       double c_edge);

struct KazhdanOptions {
  std::size_t restarts = 50;
  std::uint64_t seed = 0;
  std::size_t exact_subset_limit = 16;
  std::size_t samples = 20000;  ///< subsets checked beyond the exact limit
};

struct KazhdanReport {
  static constexpr double kInfMargin = 1e300;
  double eps = 0.0;             ///< certified lower bound used for the expansion check
  double eps_upper = 0.0;       ///< best primal value found
  double spectral_bound = 0.0;  ///< sqrt(2 lambda / |S|)
  bool exact = false;           ///< primal and dual agree within 1e-6
  std::size_t iterations = 0;
  bool expansion_exact = true;
  std::size_t subsets_checked = 0;
  bool expansion_holds = true;
  double worst_margin = kInfMargin;  ///< min |dA| - (eps^2/2)(1 - a/m) a
  std::vector<Index> worst_subset;
};

/// Requires a generator-coloured, vertex-transitive graph.
KazhdanReport kazhdan_gap(const RegularGraph& g, const KazhdanOptions& options = {});

/// True when for every pair of vertices a colour-preserving automorphism maps one to the other.
bool colored_vertex_transitive(const RegularGraph& g);

/// Pairing-model random D-regular graph, resampled until simple and connected.
RegularGraph random_regular_graph(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace coarselab
