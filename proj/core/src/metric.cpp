#include "coarselab/metric.hpp"

#include "coarselab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace coarselab {
namespace {

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return ids;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(Matrix dist)
    : FiniteMetricSpace(default_ids(static_cast<std::size_t>(dist.rows())), Matrix(dist)) {}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> points, Matrix dist,
                                     std::vector<int> blocks)
    : points_(std::move(points)), dist_(std::move(dist)), blocks_(std::move(blocks)) {
  const auto n = static_cast<Eigen::Index>(points_.size());
  require(n > 0, "metric space must have at least one point");
  require(dist_.rows() == n && dist_.cols() == n, "distance matrix must be " +
                                                      std::to_string(n) + "x" + std::to_string(n));
  require(blocks_.empty() || blocks_.size() == points_.size(),
          "block labels must cover every point");
  max_ = dist_.maxCoeff();
  tol_ = kRelTol * (max_ > 0 ? std::max(1.0, max_) : 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dist_(i, i) != 0.0) fail_invariant("d(" + points_[i] + "," + points_[i] + ") != 0");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = dist_(i, j);
      if (!std::isfinite(v)) fail_invariant("non-finite distance at (" + points_[i] + "," + points_[j] + ")");
      if (std::abs(v - dist_(j, i)) > tol_)
        fail_invariant("asymmetric distance at (" + points_[i] + "," + points_[j] + ")");
      if (i != j && !(v > 0.0))
        fail_invariant("non-positive distance between distinct points " + points_[i] + " and " + points_[j]);
      if (integral_ && v != std::floor(v)) integral_ = false;
    }
  }
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) {
      const double dxy = dist_(x, y);
      for (Eigen::Index z = 0; z < n; ++z) {
        if (dist_(x, z) > dxy + dist_(y, z) + tol_)
          fail_invariant("triangle inequality fails for (" + points_[x] + "," + points_[y] + "," +
                         points_[z] + ")");
      }
    }
  }
}

std::optional<Index> FiniteMetricSpace::find(const std::string& id) const {
  auto it = std::find(points_.begin(), points_.end(), id);
  if (it == points_.end()) return std::nullopt;
  return static_cast<Index>(it - points_.begin());
}

std::vector<Index> FiniteMetricSpace::closed_ball(Index x, double r) const {
  std::vector<Index> out;
  for (Index y = 0; y < size(); ++y)
    if (within(x, y, r)) out.push_back(y);
  return out;
}

std::size_t FiniteMetricSpace::ball_size(Index x, double r) const {
  std::size_t c = 0;
  for (Index y = 0; y < size(); ++y) c += within(x, y, r) ? 1 : 0;
  return c;
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<Index>& indices) const {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Matrix sub(m, m);
  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(indices.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    require(indices[i] < size(), "subspace index out of range");
    ids.push_back(points_[indices[i]]);
    if (!blocks_.empty()) labels.push_back(blocks_[indices[i]]);
    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = d(indices[i], indices[j]);
  }
  return FiniteMetricSpace(std::move(ids), std::move(sub), std::move(labels));
}

double FiniteMetricSpace::diameter_of(const std::vector<Index>& subset) const {
  double best = 0.0;
  for (Index a : subset)
    for (Index b : subset) best = std::max(best, d(a, b));
  return best;
}

double FiniteMetricSpace::distance_to_set(Index x, const std::vector<char>& member) const {
  double best = std::numeric_limits<double>::infinity();
  for (Index y = 0; y < size(); ++y)
    if (member[y]) best = std::min(best, d(x, y));
  return best;
}

std::vector<double> FiniteMetricSpace::distance_values() const {
  std::vector<double> vals(dist_.data(), dist_.data() + dist_.size());
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals)
    if (out.empty() || v > out.back() + tol_) out.push_back(v);
  return out;
}

void validate_adjacency(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  require(n > 0, "graph must have at least one vertex");
  for (std::size_t i = 0; i < n; ++i) {
    require(adjacency[i].size() == n, "adjacency row " + std::to_string(i) + " has wrong length");
    require(adjacency[i][i] == 0, "adjacency diagonal must be zero at vertex " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      require(adjacency[i][j] == 0 || adjacency[i][j] == 1, "adjacency entries must be 0 or 1");
      require(adjacency[i][j] == adjacency[j][i],
              "adjacency not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

std::size_t edge_count(const Adjacency& adjacency) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < adjacency.size(); ++i)
    for (std::size_t j = i + 1; j < adjacency.size(); ++j) e += adjacency[i][j] ? 1 : 0;
  return e;
}

namespace {

std::vector<int> bfs(const Adjacency& adjacency, std::size_t source) {
  const std::size_t n = adjacency.size();
  std::vector<int> dist(n, -1);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (std::size_t w = 0; w < n; ++w) {
      if (adjacency[v][w] && dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

}  // namespace

bool is_connected(const Adjacency& adjacency) {
  if (adjacency.empty()) return false;
  auto d = bfs(adjacency, 0);
  return std::all_of(d.begin(), d.end(), [](int v) { return v >= 0; });
}

FiniteMetricSpace graph_metric(const Adjacency& adjacency, std::vector<std::string> ids) {
  validate_adjacency(adjacency);
  const std::size_t n = adjacency.size();
  if (ids.empty()) ids = default_ids(n);
  require(ids.size() == n, "graph_metric: id list length mismatch");
  Matrix dist(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    auto row = bfs(adjacency, s);
    for (std::size_t t = 0; t < n; ++t) {
      if (row[t] < 0)
        fail_precondition("graph is disconnected: no path between " + ids[s] + " and " + ids[t]);
      dist(s, t) = row[t];
    }
  }
  return FiniteMetricSpace(std::move(ids), std::move(dist));
}

FiniteMetricSpace lp_product(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double p) {
  require(p >= 1.0, "lp_product: exponent must be >= 1 or infinity");
  const std::size_t nx = x.size(), ny = y.size();
  const std::size_t n = nx * ny;
  Matrix dist(n, n);
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t a = 0; a < nx; ++a)
    for (std::size_t b = 0; b < ny; ++b) ids.push_back("(" + x.id(a) + "," + y.id(b) + ")");
  const bool inf = std::isinf(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = x.d(i / ny, j / ny);
      const double dy = y.d(i % ny, j % ny);
      double v;
      if (inf)
        v = std::max(dx, dy);
      else if (p == 1.0)
        v = dx + dy;
      else if (p == 2.0)
        v = std::sqrt(dx * dx + dy * dy);
      else
        v = std::pow(std::pow(dx, p) + std::pow(dy, p), 1.0 / p);
      dist(i, j) = v;
    }
  }
  return FiniteMetricSpace(std::move(ids), std::move(dist));
}

double union_gap(GapPolicy policy, const std::vector<double>& diameters, std::size_t i,
                 std::size_t j) {
  if (i > j) std::swap(i, j);
  if (i == j) return 0.0;
  if (policy == GapPolicy::MaxDiamPlusOne) return std::max(diameters[i], diameters[j]) + 1.0;
  // Blocks are numbered from 1: gap(n, n+1) = n + 1, summed along the chain.
  double total = 0.0;
  for (std::size_t k = i; k < j; ++k) total += static_cast<double>(k + 2);
  return total;
}

FiniteMetricSpace separated_union(const std::vector<FiniteMetricSpace>& blocks, GapPolicy policy) {
  require(!blocks.empty(), "separated_union: no blocks");
  std::vector<double> diam;
  std::vector<std::size_t> offset;
  std::size_t n = 0;
  for (const auto& b : blocks) {
    diam.push_back(b.diameter());
    offset.push_back(n);
    n += b.size();
  }
  Matrix dist = Matrix::Zero(n, n);
  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(n);
  labels.reserve(n);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    for (std::size_t a = 0; a < blocks[bi].size(); ++a) {
      ids.push_back(blocks.size() == 1 ? blocks[bi].id(a)
                                       : std::to_string(bi) + ":" + blocks[bi].id(a));
      labels.push_back(static_cast<int>(bi));
    }
    for (std::size_t bj = 0; bj < blocks.size(); ++bj) {
      const double gap = union_gap(policy, diam, bi, bj);
      for (std::size_t a = 0; a < blocks[bi].size(); ++a)
        for (std::size_t b = 0; b < blocks[bj].size(); ++b)
          dist(offset[bi] + a, offset[bj] + b) = bi == bj ? blocks[bi].d(a, b) : gap;
    }
  }
  try {
    return FiniteMetricSpace(std::move(ids), std::move(dist), std::move(labels));
  } catch (const InvariantError& e) {
    fail_precondition(std::string("separated_union: gap policy too small for block diameters (") +
                      e.what() + ")");
  }
}

Net net_extract(const FiniteMetricSpace& space, double delta) {
  require(delta > 0.0, "net_extract: delta must be positive");
  std::vector<Index> chosen;
  for (Index x = 0; x < space.size(); ++x) {
    bool separated = true;
    for (Index c : chosen) {
      if (space.d(x, c) < delta - space.tolerance()) {
        separated = false;
        break;
      }
    }
    if (separated) chosen.push_back(x);
  }
  return Net{space.subspace(chosen), chosen};
}

PointMap PointMap::into_space(FiniteMetricSpace source, FiniteMetricSpace target,
                              std::vector<Index> assignment) {
  require(assignment.size() == source.size(), "point map must assign every source point");
  for (Index a : assignment) require(a < target.size(), "point map assigns outside the target");
  PointMap m;
  m.source_ = std::move(source);
  m.target_ = std::move(target);
  m.assignment_ = std::move(assignment);
  return m;
}

PointMap PointMap::into_coordinates(FiniteMetricSpace source, Matrix coords, double p) {
  require(p >= 1.0, "coordinate maps need an exponent p >= 1");
  require(static_cast<std::size_t>(coords.rows()) == source.size(),
          "coordinate table must have one row per source point");
  PointMap m;
  m.source_ = std::move(source);
  m.coords_ = std::move(coords);
  m.p_ = p;
  m.euclidean_ = true;
  return m;
}

double PointMap::image_distance(Index x, Index y) const {
  if (euclidean_) {
    const auto diff = coords_.row(static_cast<Eigen::Index>(x)) - coords_.row(static_cast<Eigen::Index>(y));
    if (p_ == 2.0) return diff.norm();
    if (p_ == 1.0) return diff.cwiseAbs().sum();
    if (std::isinf(p_)) return diff.cwiseAbs().maxCoeff();
    return std::pow(diff.cwiseAbs().array().pow(p_).sum(), 1.0 / p_);
  }
  return target_.d(assignment_[x], assignment_[y]);
}

PointMap compose(const PointMap& f, const PointMap& g) {
  require(!f.euclidean(), "compose: inner map must land in a finite metric space");
  require(g.source().size() == f.target().size(), "compose: maps do not chain");
  if (g.euclidean()) {
    Matrix coords(f.source().size(), g.coordinates().cols());
    for (Index x = 0; x < f.source().size(); ++x)
      coords.row(static_cast<Eigen::Index>(x)) = g.coordinates().row(static_cast<Eigen::Index>(f.assignment()[x]));
    return PointMap::into_coordinates(f.source(), std::move(coords), g.exponent());
  }
  std::vector<Index> a(f.source().size());
  for (Index x = 0; x < a.size(); ++x) a[x] = g.assignment()[f.assignment()[x]];
  return PointMap::into_space(f.source(), g.target(), std::move(a));
}

double CompressionProfile::rho2_upper(double t) const {
  double best = 0.0;
  for (const auto& b : bins) {
    if (b.r_lo > t) break;
    best = std::max(best, b.rho2);
  }
  return best;
}

double CompressionProfile::rho1_lower(double t) const {
  double best = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].r_lo > t) break;
    best = envelope[i];
  }
  return best;
}

CompressionProfile compression_profile(const PointMap& map, double bin_width) {
  require(bin_width > 0.0, "compression_profile: bin width must be positive");
  const auto& src = map.source();
  struct Acc {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
  };
  std::vector<Acc> acc;
  const double tol = src.tolerance();
  for (Index x = 0; x < src.size(); ++x) {
    for (Index y = x + 1; y < src.size(); ++y) {
      const double dxy = src.d(x, y);
      const auto bin = static_cast<std::size_t>(std::floor((dxy + tol) / bin_width));
      if (bin >= acc.size()) acc.resize(bin + 1);
      const double img = map.image_distance(x, y);
      acc[bin].lo = std::min(acc[bin].lo, img);
      acc[bin].hi = std::max(acc[bin].hi, img);
      ++acc[bin].pairs;
    }
  }
  CompressionProfile prof;
  for (std::size_t b = 0; b < acc.size(); ++b) {
    if (acc[b].pairs == 0) continue;
    prof.bins.push_back({b * bin_width, (b + 1) * bin_width, acc[b].lo, acc[b].hi, acc[b].pairs});
  }
  prof.envelope.resize(prof.bins.size());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = prof.bins.size(); i-- > 0;) {
    running = std::min(running, prof.bins[i].rho1);
    prof.envelope[i] = running;
  }
  const std::size_t m = prof.envelope.size();
  if (m >= 2) {
    const std::size_t steps = std::min<std::size_t>(3, m - 1);
    prof.proper = true;
    for (std::size_t i = m - steps; i < m; ++i)
      if (!(prof.envelope[i] > prof.envelope[i - 1] + kRelTol)) prof.proper = false;
  }
  return prof;
}

std::vector<std::size_t> bounded_geometry_stats(const FiniteMetricSpace& space,
                                                const std::vector<double>& radii) {
  std::vector<std::size_t> out;
  out.reserve(radii.size());
  for (double r : radii) {
    require(r >= 0.0, "bounded_geometry_stats: radii must be nonnegative");
    std::size_t best = 0;
    for (Index x = 0; x < space.size(); ++x) best = std::max(best, space.ball_size(x, r));
    out.push_back(best);
  }
  return out;
}

}  // namespace coarselab
