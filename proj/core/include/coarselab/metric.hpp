#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace coarselab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::size_t;

/// Dense symmetric 0/1 adjacency, row-major.
using Adjacency = std::vector<std::vector<int>>;

/// Relative tolerance used for every distance comparison.
inline constexpr double kRelTol = 1e-9;

/// A finite set of points with an explicit distance matrix. Immutable after
/// construction; the constructor validates the metric axioms.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> points, Matrix dist, std::vector<int> blocks = {});

  /// Points are named "0", "1", ... .
  explicit FiniteMetricSpace(Matrix dist);

  std::size_t size() const noexcept { return points_.size(); }
  double d(Index x, Index y) const { return dist_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)); }
  const Matrix& dist() const noexcept { return dist_; }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::string& id(Index x) const { return points_.at(x); }
  const std::vector<int>& blocks() const noexcept { return blocks_; }
  bool has_blocks() const noexcept { return !blocks_.empty(); }

  double diameter() const noexcept { return max_; }
  /// 1e-9 scaled by the largest distance.
  double tolerance() const noexcept { return tol_; }
  /// True when every distance is an exact integer.
  bool integral() const noexcept { return integral_; }

  std::optional<Index> find(const std::string& id) const;
  std::vector<Index> closed_ball(Index x, double r) const;
  std::size_t ball_size(Index x, double r) const;
  bool within(Index x, Index y, double r) const { return d(x, y) <= r + tol_; }

  FiniteMetricSpace subspace(const std::vector<Index>& indices) const;
  double diameter_of(const std::vector<Index>& subset) const;
  /// d(x, S) for the set marked by `member`; +inf when S is empty.
  double distance_to_set(Index x, const std::vector<char>& member) const;
  /// All distinct distance values (sorted, merged within tolerance).
  std::vector<double> distance_values() const;

 private:
  std::vector<std::string> points_;
  Matrix dist_;
  std::vector<int> blocks_;
  double max_ = 0.0;
  double tol_ = kRelTol;
  bool integral_ = true;
};

/// Shortest-path metric of a connected unweighted graph.
FiniteMetricSpace graph_metric(const Adjacency& adjacency, std::vector<std::string> ids = {});
bool is_connected(const Adjacency& adjacency);
void validate_adjacency(const Adjacency& adjacency);
std::size_t edge_count(const Adjacency& adjacency);

/// Positive infinity selects the max metric.
FiniteMetricSpace lp_product(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double p);

enum class GapPolicy { MaxDiamPlusOne, Nowak };

/// Cross-block distance between blocks i < j under the given policy.
double union_gap(GapPolicy policy, const std::vector<double>& diameters, std::size_t i, std::size_t j);
FiniteMetricSpace separated_union(const std::vector<FiniteMetricSpace>& blocks,
                                  GapPolicy policy = GapPolicy::MaxDiamPlusOne);

struct Net {
  FiniteMetricSpace space;
  std::vector<Index> indices;
};
Net net_extract(const FiniteMetricSpace& space, double delta);

/// Source space mapped into either another finite metric space or a
/// coordinate table (one row per source point) measured in the l^p norm.
class PointMap {
 public:
  static PointMap into_space(FiniteMetricSpace source, FiniteMetricSpace target,
                             std::vector<Index> assignment);
  static PointMap into_coordinates(FiniteMetricSpace source, Matrix coords, double p = 2.0);

  const FiniteMetricSpace& source() const noexcept { return source_; }
  bool euclidean() const noexcept { return euclidean_; }
  const FiniteMetricSpace& target() const noexcept { return target_; }
  const std::vector<Index>& assignment() const noexcept { return assignment_; }
  const Matrix& coordinates() const noexcept { return coords_; }
  double exponent() const noexcept { return p_; }
  double image_distance(Index x, Index y) const;

 private:
  FiniteMetricSpace source_;
  FiniteMetricSpace target_;
  std::vector<Index> assignment_;
  Matrix coords_;
  double p_ = 2.0;
  bool euclidean_ = false;
};

/// g after f; f must land in a finite space whose points g maps.
PointMap compose(const PointMap& f, const PointMap& g);

struct ProfileBin {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  std::size_t pairs = 0;
};

struct CompressionProfile {
  std::vector<ProfileBin> bins;    ///< non-empty bins only, ascending
  std::vector<double> envelope;    ///< largest non-decreasing minorant of rho1
  bool proper = false;
  /// (threshold t, Q_t) rows filled by the sequence embeddings.
  std::vector<std::pair<double, std::size_t>> q_table;

  /// Smallest non-decreasing majorant of rho2, evaluated at t.
  double rho2_upper(double t) const;
  /// Envelope of rho1 evaluated at t (0 below the first bin).
  double rho1_lower(double t) const;
};

CompressionProfile compression_profile(const PointMap& map, double bin_width = 1.0);

/// N_r = max_x |closed ball(x, r)| for each r.
std::vector<std::size_t> bounded_geometry_stats(const FiniteMetricSpace& space,
                                                const std::vector<double>& radii);

}  // namespace coarselab
