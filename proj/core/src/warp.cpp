#include "coarselab/error.hpp"
#include "coarselab/graphs.hpp"
#include "coarselab/groups.hpp"
#include "coarselab/parallel.hpp"

#include <cmath>
#include <limits>

namespace coarselab {

GroupAction::GroupAction(FiniteGroup group, FiniteMetricSpace space, std::vector<std::vector<Index>> permutations)
    : group_(std::move(group)), space_(std::move(space)), perms_(std::move(permutations)) {
  const std::size_t n = space_.size();
  require(perms_.size() == group_.size(), "action needs one permutation per group element");
  for (Index g = 0; g < perms_.size(); ++g) {
    require(perms_[g].size() == n, "permutation of " + group_.element(g) + " has the wrong length");
    std::vector<char> hit(n, 0);
    for (Index x : perms_[g]) {
      require(x < n, "permutation of " + group_.element(g) + " leaves the space");
      if (hit[x]) fail_invariant("action of " + group_.element(g) + " is not a bijection");
      hit[x] = 1;
    }
  }
  for (Index x = 0; x < n; ++x)
    if (perms_[group_.identity()][x] != x) fail_invariant("identity moves point " + space_.id(x));
  for (Index g = 0; g < group_.size(); ++g)
    for (Index h = 0; h < group_.size(); ++h)
      for (Index x = 0; x < n; ++x)
        if (perms_[group_.mul(g, h)][x] != perms_[g][perms_[h][x]])
          fail_invariant("action is not a homomorphism at (" + group_.element(g) + "," + group_.element(h) +
                         ") on point " + space_.id(x));
}

GroupAction antipodal_action(std::size_t cycle_length) {
  require(cycle_length >= 4 && cycle_length % 2 == 0, "antipodal_action needs an even cycle of length >= 4");
  auto space = graph_metric(cycle_graph(cycle_length));
  std::vector<std::vector<Index>> perms(2, std::vector<Index>(cycle_length));
  for (Index x = 0; x < cycle_length; ++x) {
    perms[0][x] = x;
    perms[1][x] = (x + cycle_length / 2) % cycle_length;
  }
  return GroupAction(cyclic_group(2), std::move(space), std::move(perms));
}

GroupAction rotation_action(std::size_t cycle_length) {
  require(cycle_length >= 3, "rotation_action needs a cycle of length >= 3");
  auto space = graph_metric(cycle_graph(cycle_length));
  std::vector<std::vector<Index>> perms(cycle_length, std::vector<Index>(cycle_length));
  for (Index g = 0; g < cycle_length; ++g)
    for (Index x = 0; x < cycle_length; ++x) perms[g][x] = (x + g) % cycle_length;
  return GroupAction(cyclic_group(cycle_length), std::move(space), std::move(perms));
}

GroupAction trivial_action(const FiniteMetricSpace& space) {
  std::vector<std::vector<Index>> perms(1, std::vector<Index>(space.size()));
  for (Index x = 0; x < space.size(); ++x) perms[0][x] = x;
  return GroupAction(cyclic_group(1), space, std::move(perms));
}

FiniteMetricSpace warp_metric(const GroupAction& action) {
  const auto& space = action.space();
  const auto& g = action.group();
  for (Index a = 0; a < g.size(); ++a)
    if (a != g.identity() && g.length(a) < 1)
      fail_precondition("warp_metric: non-identity element " + g.element(a) + " has zero length");
  const std::size_t n = space.size();
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> dist(n);
    std::vector<char> done(n);
    for (Index src = begin; src < end; ++src) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      std::fill(done.begin(), done.end(), 0);
      dist[src] = 0.0;
      for (std::size_t round = 0; round < n; ++round) {
        Index u = n;
        for (Index v = 0; v < n; ++v)
          if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
        done[u] = 1;
        for (Index v = 0; v < n; ++v)
          if (!done[v]) dist[v] = std::min(dist[v], dist[u] + space.d(u, v));
        for (Index a = 0; a < g.size(); ++a) {
          const Index v = action.act(a, u);
          if (!done[v]) dist[v] = std::min(dist[v], dist[u] + g.length(a));
        }
      }
      for (Index v = 0; v < n; ++v) out(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(v)) = dist[v];
    }
  });
  Matrix sym = out.cwiseMin(out.transpose());
  return FiniteMetricSpace(space.points(), std::move(sym));
}

WarpedWitness warped_witness(const GroupAction& action, const std::vector<double>& folner,
                             const LpWitness& base, double R) {
  const auto& space = action.space();
  const auto& g = action.group();
  const std::size_t n = space.size();
  require(folner.size() == g.size(), "warped_witness: Folner function needs one value per group element");
  require(static_cast<std::size_t>(base.xi.rows()) == n && static_cast<std::size_t>(base.xi.cols()) == n,
          "warped_witness: base witness does not match the space");
  double mass = 0.0, longest = 0.0;
  for (Index a = 0; a < g.size(); ++a) {
    require(folner[a] >= 0.0, "warped_witness: Folner function must be nonnegative");
    mass += folner[a];
    if (folner[a] > 0.0) longest = std::max(longest, static_cast<double>(g.length(a)));
  }
  require(std::abs(mass - 1.0) <= 1e-9, "warped_witness: Folner function must sum to 1");
  double s_base = 0.0;
  for (Index x = 0; x < n; ++x) {
    double row = 0.0;
    for (Index y = 0; y < n; ++y) {
      const double v = base.xi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      require(v >= 0.0, "warped_witness: base witness must be nonnegative");
      row += v;
      if (v > 0.0) s_base = std::max(s_base, space.d(x, y));
    }
    require(std::abs(row - 1.0) <= 1e-9, "warped_witness: base witness row " + space.id(x) + " is not a unit vector");
  }
  WarpedWitness out;
  out.space = warp_metric(action);
  out.witness.xi = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index x = 0; x < n; ++x)
    for (Index a = 0; a < g.size(); ++a)
      if (folner[a] > 0.0)
        out.witness.xi.row(static_cast<Eigen::Index>(x)) +=
            folner[a] * base.xi.row(static_cast<Eigen::Index>(action.act(a, x)));
  out.S_bound = s_base + longest;
  out.witness.params.R = R;
  out.witness.params.p = 1.0;
  out.witness.params.S = out.S_bound;
  out.report = measure_witness(out.witness, out.space, R);
  out.witness.params.eps = out.report.eps_measured;
  return out;
}

}  // namespace coarselab
