#include "coarselab/error.hpp"
#include "coarselab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace coarselab {

std::size_t yu_count(const std::vector<double>& support_radii, double t, double tol) {
  std::size_t q = 0;
  for (double s : support_radii) q += 2.0 * s < t - tol ? 1 : 0;
  return q;
}

namespace {

void check_schedule(const FiniteMetricSpace& space, const std::vector<LpWitness>& seq, double p,
                    std::vector<WitnessReport>& reports) {
  require(!seq.empty(), "embedding needs a nonempty witness sequence");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto k = static_cast<int>(i + 1);
    if (seq[i].params.p != p)
      fail_precondition("schedule violation: witness " + std::to_string(k) + " has exponent " +
                        std::to_string(seq[i].params.p));
    auto rep = measure_witness(seq[i], space, static_cast<double>(k));
    if (!rep.valid)
      fail_precondition("schedule violation: witness " + std::to_string(k) + " is invalid (" +
                        rep.violations.front() + ")");
    if (!(rep.eps_measured < std::ldexp(1.0, -k)))
      fail_precondition("schedule violation: witness " + std::to_string(k) + " has variation " +
                        std::to_string(rep.eps_measured) + " at scale " + std::to_string(k));
    reports.push_back(std::move(rep));
  }
}

Matrix concatenate(const std::vector<LpWitness>& seq, std::size_t n) {
  Matrix coords(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n * seq.size()));
  for (std::size_t k = 0; k < seq.size(); ++k)
    for (Index x = 0; x < n; ++x)
      coords.block(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k * n), 1, static_cast<Eigen::Index>(n)) =
          seq[k].xi.row(static_cast<Eigen::Index>(x)) - seq[k].xi.row(0);
  return coords;
}

template <class Lower, class Upper>
void check_bounds(SequenceEmbedding& out, const PointMap& map, Lower lower, Upper upper) {
  const auto& space = map.source();
  for (Index x = 0; x < space.size(); ++x) {
    for (Index y = x + 1; y < space.size(); ++y) {
      const double img = map.image_distance(x, y);
      const double lo = lower(space.d(x, y));
      const double hi = upper(space.d(x, y));
      out.min_lower_slack = std::min(out.min_lower_slack, img - lo);
      out.min_upper_slack = std::min(out.min_upper_slack, hi - img);
      if (img < lo - 1e-9) ++out.lower_violations;
      if (img > hi + 1e-9) ++out.upper_violations;
    }
  }
}

void fill_q_table(SequenceEmbedding& out, const std::vector<double>& thresholds, double factor) {
  std::vector<double> t = thresholds;
  std::sort(t.begin(), t.end());
  std::size_t count = 0;
  for (double s : t) out.profile.q_table.emplace_back(factor * s, ++count);
}

}  // namespace

SequenceEmbedding yu_embedding(const FiniteMetricSpace& space, const std::vector<LpWitness>& seq) {
  std::vector<WitnessReport> reports;
  check_schedule(space, seq, 2.0, reports);
  SequenceEmbedding out;
  out.p = 2.0;
  for (const auto& r : reports) out.thresholds.push_back(r.S_measured);
  out.embedding.coords = concatenate(seq, space.size());
  auto map = PointMap::into_coordinates(space, out.embedding.coords, 2.0);
  out.profile = compression_profile(map);
  fill_q_table(out, out.thresholds, 2.0);
  const double tol = space.tolerance();
  check_bounds(
      out, map, [&](double d) { return std::sqrt(2.0 * static_cast<double>(yu_count(out.thresholds, d, tol))); },
      [](double d) { return 2.0 * d + 1.0; });
  return out;
}

SequenceEmbedding lp_sequence_embedding(const FiniteMetricSpace& space, const std::vector<LpWitness>& seq,
                                        double delta) {
  require(delta > 0.0, "lp_sequence_embedding: delta must be positive");
  require(!seq.empty(), "lp_sequence_embedding: empty sequence");
  const double p = seq.front().params.p;
  require(p >= 1.0 && std::isfinite(p), "lp_sequence_embedding: exponent must be finite and >= 1");
  std::vector<WitnessReport> reports;
  check_schedule(space, seq, p, reports);
  SequenceEmbedding out;
  out.p = p;
  for (const auto& w : seq) {
    // Largest distance of a pair that is not yet delta-separated.
    double s = 0.0;
    for (Index x = 0; x < space.size(); ++x)
      for (Index y = x; y < space.size(); ++y)
        if (lp_distance(w.xi, x, w.xi, y, p) < delta) s = std::max(s, space.d(x, y));
    out.thresholds.push_back(s);
  }
  out.embedding.coords = concatenate(seq, space.size());
  auto map = PointMap::into_coordinates(space, out.embedding.coords, p);
  out.profile = compression_profile(map);
  fill_q_table(out, out.thresholds, 1.0);
  const double tol = space.tolerance();
  check_bounds(
      out, map,
      [&](double d) {
        std::size_t q = 0;
        for (double s : out.thresholds) q += s < d - tol ? 1 : 0;
        return delta * std::pow(static_cast<double>(q), 1.0 / p);
      },
      [&](double d) { return 2.0 * std::pow(d + 1.0, 1.0 / p); });
  return out;
}

}  // namespace coarselab
