#include "coarselab/error.hpp"
#include "coarselab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace coarselab {

namespace {

void check_tree(const FiniteMetricSpace& tree) {
  require(tree.integral(), "tree_witness: the space is not a graph metric (non-integer distances)");
  const std::size_t n = tree.size();
  Adjacency adj(n, std::vector<int>(n, 0));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) adj[x][y] = tree.d(x, y) == 1.0 ? 1 : 0;
  if (!is_connected(adj)) fail_precondition("tree_witness: the unit-distance graph is disconnected");
  if (edge_count(adj) != n - 1) fail_precondition("tree_witness: cycle detected, the space is not a tree");
  auto g = graph_metric(adj, tree.points());
  if ((g.dist() - tree.dist()).cwiseAbs().maxCoeff() != 0.0)
    fail_precondition("tree_witness: distances do not match the path metric of the tree");
}

}  // namespace

TreeWitness tree_witness(const FiniteMetricSpace& tree, Index ray_end, double R, double eps,
                         TreeBoundary boundary) {
  require(ray_end < tree.size(), "tree_witness: ray endpoint out of range");
  require(R >= 0.0, "tree_witness: R must be nonnegative");
  require(eps > 0.0 && eps <= 1.0, "tree_witness: eps must lie in (0, 1]");
  check_tree(tree);
  const std::size_t n = tree.size();
  TreeWitness out;
  out.K = static_cast<std::size_t>(std::floor(3.0 * R / eps + 1e-12)) + 1;
  auto& fam = out.family;
  fam.params = {R, eps, static_cast<double>(out.K - 1), 1.0, 0.0};
  fam.sets.resize(n);
  if (boundary == TreeBoundary::Truncate) fam.truncated.assign(n, 0);
  for (Index v = 0; v < n; ++v) {
    std::vector<Tag> a;
    Index cur = v;
    a.emplace_back(cur, 1);
    while (a.size() < out.K && cur != ray_end) {
      const double target = tree.d(cur, ray_end) - 1.0;
      for (Index w = 0; w < n; ++w) {
        if (tree.d(cur, w) == 1.0 && tree.d(w, ray_end) == target) {
          cur = w;
          break;
        }
      }
      a.emplace_back(cur, 1);
    }
    if (a.size() < out.K) {
      if (boundary == TreeBoundary::Truncate) {
        fam.truncated[v] = 1;
      } else {
        // Virtual ray vertices beyond the endpoint, recorded as extra copies of it.
        for (std::uint32_t j = 2; a.size() < out.K; ++j) a.emplace_back(ray_end, j);
      }
    }
    std::sort(a.begin(), a.end());
    fam.sets[v] = std::move(a);
  }
  return out;
}

std::size_t cover_multiplicity(const FiniteMetricSpace& space,
                               const std::vector<std::vector<Index>>& cover) {
  std::vector<std::size_t> count(space.size(), 0);
  for (const auto& u : cover)
    for (Index x : u) ++count.at(x);
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

namespace {

std::vector<std::vector<char>> membership(const FiniteMetricSpace& space,
                                          const std::vector<std::vector<Index>>& cover) {
  std::vector<std::vector<char>> m(cover.size(), std::vector<char>(space.size(), 0));
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (Index x : cover[i]) {
      require(x < space.size(), "cover references an unknown point");
      m[i][x] = 1;
    }
  return m;
}

}  // namespace

double lebesgue_number(const FiniteMetricSpace& space, const std::vector<std::vector<Index>>& cover) {
  const auto member = membership(space, cover);
  const auto values = space.distance_values();
  double L = kInf;
  for (Index x = 0; x < space.size(); ++x) {
    double best = -1.0;
    for (const auto& m : member) {
      if (!m[x]) continue;
      const double gap = space.distance_to_set(x, [&] {
        std::vector<char> c(m.size());
        for (std::size_t y = 0; y < m.size(); ++y) c[y] = !m[y];
        return c;
      }());
      // Largest distance value r with closed ball B(x, r) inside the set.
      double r = 0.0;
      for (double v : values)
        if (v < gap - space.tolerance()) r = v;
      best = std::max(best, r);
    }
    if (best < 0.0) fail_precondition("cover misses point " + space.id(x));
    L = std::min(L, best);
  }
  return L;
}

LipschitzPartition lipschitz_partition(const FiniteMetricSpace& space,
                                       const std::vector<std::vector<Index>>& cover, double R,
                                       double eps) {
  require(!cover.empty(), "lipschitz_partition: empty cover");
  for (const auto& u : cover) require(!u.empty(), "lipschitz_partition: empty cover set");
  const std::size_t n = space.size();
  const std::size_t m = cover.size();
  LipschitzPartition out;
  out.multiplicity = cover_multiplicity(space, cover);
  out.lebesgue = lebesgue_number(space, cover);
  if (!(out.lebesgue > 0.0))
    fail_precondition("lipschitz_partition: Lebesgue number is 0 (some ball lies in no single set)");
  const double k = static_cast<double>(out.multiplicity);
  out.lipschitz_bound = (2 * k + 2) * (2 * k + 3) / out.lebesgue;
  out.variation_bound = out.lipschitz_bound * R;
  out.meets_target = out.variation_bound < eps;

  const auto member = membership(space, cover);
  Matrix dist_out(m, n);
  std::vector<char> whole(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<char> comp(n);
    bool all = true;
    for (Index y = 0; y < n; ++y) {
      comp[y] = !member[i][y];
      all = all && member[i][y];
    }
    whole[i] = all;
    for (Index x = 0; x < n; ++x) dist_out(i, x) = all ? 0.0 : space.distance_to_set(x, comp);
  }
  const bool any_whole = std::find(whole.begin(), whole.end(), 1) != whole.end();
  auto& w = out.witness;
  w.cover = cover;
  for (auto& u : w.cover) std::sort(u.begin(), u.end());
  w.phi = Matrix::Zero(m, n);
  const auto wholes = static_cast<double>(std::count(whole.begin(), whole.end(), 1));
  for (Index x = 0; x < n; ++x) {
    if (any_whole) {
      // d(x, empty set) is infinite: the whole-space sets share the unit mass.
      for (std::size_t i = 0; i < m; ++i) w.phi(i, x) = whole[i] ? 1.0 / wholes : 0.0;
      continue;
    }
    const double total = dist_out.col(static_cast<Eigen::Index>(x)).sum();
    for (std::size_t i = 0; i < m; ++i) w.phi(i, x) = dist_out(i, x) / total;
  }
  w.params = {R, out.variation_bound, 0.0, 1.0, 0.0};
  double S = 0.0;
  for (const auto& u : w.cover) S = std::max(S, space.diameter_of(u));
  w.params.S = S;
  for (Index x = 0; x < n; ++x) {
    for (Index y = x + 1; y < n; ++y) {
      const double diff = (w.phi.col(static_cast<Eigen::Index>(x)) - w.phi.col(static_cast<Eigen::Index>(y))).cwiseAbs().sum();
      out.lipschitz_measured = std::max(out.lipschitz_measured, diff / space.d(x, y));
    }
  }
  out.bound_holds = out.lipschitz_measured <= out.lipschitz_bound * (1 + 1e-12) + 1e-12;
  return out;
}

std::vector<Index> expansion(const FiniteMetricSpace& space, const std::vector<Index>& set, double r) {
  std::vector<Index> out;
  for (Index y = 0; y < space.size(); ++y)
    for (Index x : set)
      if (space.within(x, y, r)) {
        out.push_back(y);
        break;
      }
  return out;
}

PartitionWitness trivial_partition(const FiniteMetricSpace& space) {
  PartitionWitness w;
  std::vector<Index> all(space.size());
  for (Index x = 0; x < space.size(); ++x) all[x] = x;
  w.cover = {all};
  w.phi = Matrix::Ones(1, static_cast<Eigen::Index>(space.size()));
  w.params = {0.0, 0.0, space.diameter(), 1.0, 0.0};
  return w;
}

GlueResult glue_witness(const FiniteMetricSpace& space, const PartitionWitness& outer,
                        const std::vector<PartitionWitness>& locals, double R) {
  const std::size_t n = space.size();
  const std::size_t m = outer.cover.size();
  if (locals.size() != m)
    fail_precondition("glue_witness: expected " + std::to_string(m) + " local witnesses, got " +
                      std::to_string(locals.size()));
  GlueResult out;
  out.eps_outer = measure_witness(outer, space, R).eps_measured;
  auto& w = out.witness;
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t i = 0; i < m; ++i) {
    const auto region = expansion(space, outer.cover[i], R);
    const auto& loc = locals[i];
    if (static_cast<std::size_t>(loc.phi.cols()) != region.size())
      fail_precondition("glue_witness: local witness " + std::to_string(i) + " must live on the " +
                        std::to_string(region.size()) + "-point R-expansion of its cover set");
    auto sub = space.subspace(region);
    out.eps_local = std::max(out.eps_local, measure_witness(loc, sub, R).eps_measured);
    std::vector<char> in_u(n, 0);
    for (Index x : outer.cover[i]) in_u[x] = 1;
    for (std::size_t j = 0; j < loc.cover.size(); ++j) {
      std::vector<Index> set;
      for (Index a : loc.cover[j])
        if (in_u[region.at(a)]) set.push_back(region[a]);
      if (set.empty()) continue;
      Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t a = 0; a < region.size(); ++a)
        theta(static_cast<Eigen::Index>(region[a])) =
            outer.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(region[a])) *
            loc.phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a));
      std::sort(set.begin(), set.end());
      w.cover.push_back(std::move(set));
      rows.push_back(std::move(theta));
    }
  }
  w.phi = Matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) w.phi.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  auto rep = measure_witness(w, space, R);
  if (!rep.valid) fail_invariant("glue_witness produced an invalid partition: " + rep.violations.front());
  out.eps_out = rep.eps_measured;
  w.params = {R, out.eps_out, rep.S_measured, 1.0, 0.0};
  out.bound_holds = out.eps_out <= out.eps_outer + out.eps_local + 1e-9;
  return out;
}

DerivedResult product_witness(const FiniteMetricSpace& x, const PartitionWitness& wx,
                              const FiniteMetricSpace& y, const PartitionWitness& wy, double p,
                              double R) {
  DerivedResult out;
  out.space = lp_product(x, y, p);
  const std::size_t nx = x.size(), ny = y.size();
  const double ex = measure_witness(wx, x, R).eps_measured;
  const double ey = measure_witness(wy, y, R).eps_measured;
  auto& w = out.witness;
  const auto mx = static_cast<std::size_t>(wx.phi.rows()), my = static_cast<std::size_t>(wy.phi.rows());
  w.phi = Matrix::Zero(static_cast<Eigen::Index>(mx * my), static_cast<Eigen::Index>(nx * ny));
  for (std::size_t i = 0; i < mx; ++i) {
    for (std::size_t j = 0; j < my; ++j) {
      std::vector<Index> set;
      for (Index a : wx.cover[i])
        for (Index b : wy.cover[j]) set.push_back(a * ny + b);
      std::sort(set.begin(), set.end());
      w.cover.push_back(std::move(set));
      for (Index a = 0; a < nx; ++a)
        for (Index b = 0; b < ny; ++b)
          w.phi(static_cast<Eigen::Index>(i * my + j), static_cast<Eigen::Index>(a * ny + b)) =
              wx.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) *
              wy.phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b));
    }
  }
  auto rep = measure_witness(w, out.space, R);
  out.eps_out = rep.eps_measured;
  out.bound = ex + ey;
  out.bound_holds = out.eps_out <= out.bound + 1e-9;
  w.params = {R, out.eps_out, rep.S_measured, 1.0, 0.0};
  return out;
}

DerivedResult union_witness(const FiniteMetricSpace& space, const std::vector<std::vector<Index>>& blocks,
                            const std::vector<PartitionWitness>& block_witnesses, double L, double R) {
  require(L > 0.0, "union_witness: expansion L must be positive");
  require(blocks.size() == block_witnesses.size(), "union_witness: one witness per block required");
  require(!blocks.empty(), "union_witness: no blocks");
  std::vector<std::vector<Index>> expanded;
  for (const auto& b : blocks) {
    require(!b.empty(), "union_witness: empty block");
    expanded.push_back(expansion(space, b, L));
  }
  for (Index x = 0; x < space.size(); ++x) {
    bool covered = false;
    for (const auto& b : blocks) covered = covered || std::find(b.begin(), b.end(), x) != b.end();
    require(covered, "union_witness: blocks do not cover point " + space.id(x));
  }
  auto outer = lipschitz_partition(space, expanded, R, kInf);
  std::vector<PartitionWitness> locals;
  double eps_local = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& block = blocks[i];
    const auto& bw = block_witnesses[i];
    require(static_cast<std::size_t>(bw.phi.cols()) == block.size(),
            "union_witness: block witness size mismatch");
    const auto region = expansion(space, expanded[i], R);
    // Nearest-point retraction of the region onto the block (lowest index on ties).
    std::vector<std::size_t> nearest(region.size());
    for (std::size_t a = 0; a < region.size(); ++a) {
      std::size_t best = 0;
      for (std::size_t b = 1; b < block.size(); ++b)
        if (space.d(region[a], block[b]) < space.d(region[a], block[best]) - space.tolerance()) best = b;
      nearest[a] = best;
    }
    PartitionWitness loc;
    loc.phi = Matrix::Zero(bw.phi.rows(), static_cast<Eigen::Index>(region.size()));
    for (Eigen::Index j = 0; j < bw.phi.rows(); ++j) {
      std::vector<char> in(block.size(), 0);
      for (Index b : bw.cover[static_cast<std::size_t>(j)]) in.at(b) = 1;
      std::vector<Index> set;
      for (std::size_t a = 0; a < region.size(); ++a) {
        loc.phi(j, static_cast<Eigen::Index>(a)) = bw.phi(j, static_cast<Eigen::Index>(nearest[a]));
        if (in[nearest[a]]) set.push_back(a);
      }
      loc.cover.push_back(std::move(set));
    }
    eps_local = std::max(eps_local, measure_witness(loc, space.subspace(region), R).eps_measured);
    locals.push_back(std::move(loc));
  }
  auto glued = glue_witness(space, outer.witness, locals, R);
  DerivedResult out;
  out.space = space;
  out.witness = glued.witness;
  out.eps_out = glued.eps_out;
  out.bound = outer.variation_bound + eps_local;
  out.bound_holds = out.eps_out <= out.bound + 1e-9;
  out.notes.push_back("multiplicity " + std::to_string(outer.multiplicity) + ", Lebesgue number " +
                      std::to_string(outer.lebesgue) + ", outer variation " + std::to_string(glued.eps_outer) +
                      ", local variation " + std::to_string(eps_local));
  return out;
}

DerivedResult subspace_witness(const FiniteMetricSpace& x, const PartitionWitness& w,
                               const FiniteMetricSpace& y, const std::vector<Index>& inclusion,
                               double R) {
  require(inclusion.size() == y.size(), "subspace_witness: inclusion must map every point of Y");
  for (Index a = 0; a < y.size(); ++a) {
    require(inclusion[a] < x.size(), "subspace_witness: inclusion leaves X");
    for (Index b = 0; b < y.size(); ++b)
      if (std::abs(y.d(a, b) - x.d(inclusion[a], inclusion[b])) > std::max(x.tolerance(), y.tolerance()))
        fail_precondition("subspace_witness: inclusion is not distance-preserving at (" + y.id(a) + "," +
                          y.id(b) + ")");
  }
  std::map<Index, Index> back;
  for (Index a = 0; a < y.size(); ++a) back[inclusion[a]] = a;
  DerivedResult out;
  out.space = y;
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < w.cover.size(); ++i) {
    std::vector<Index> set;
    for (Index p : w.cover[i]) {
      auto it = back.find(p);
      if (it != back.end()) set.push_back(it->second);
    }
    if (set.empty()) continue;
    std::sort(set.begin(), set.end());
    out.witness.cover.push_back(std::move(set));
    keep.push_back(static_cast<Eigen::Index>(i));
  }
  out.witness.phi = Matrix(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(y.size()));
  for (std::size_t r = 0; r < keep.size(); ++r)
    for (Index a = 0; a < y.size(); ++a)
      out.witness.phi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) =
          w.phi(keep[r], static_cast<Eigen::Index>(inclusion[a]));
  out.witness.params = w.params;
  out.eps_out = measure_witness(out.witness, y, R).eps_measured;
  out.bound = measure_witness(w, x, R).eps_measured;
  out.bound_holds = out.eps_out <= out.bound + 1e-12;
  return out;
}

}  // namespace coarselab
