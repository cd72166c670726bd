#pragma once

#include <coarselab/graphs.hpp>
#include <coarselab/metric.hpp>
#include <coarselab/spectral.hpp>
#include <coarselab/witness.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace fixture {

using namespace coarselab;

/// xi_x = normalized l^p indicator of the closed ball B(x, r).
inline LpWitness ball_witness(const FiniteMetricSpace& space, double r, double p) {
  const auto n = static_cast<Eigen::Index>(space.size());
  LpWitness w;
  w.xi = Matrix::Zero(n, n);
  for (Index x = 0; x < space.size(); ++x) {
    const auto ball = space.closed_ball(x, r);
    const double v = std::pow(static_cast<double>(ball.size()), -1.0 / p);
    for (Index y : ball) w.xi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = v;
  }
  w.params.R = 1.0;
  w.params.S = r;
  w.params.p = p;
  return w;
}

/// Window witness on the n-cycle: xi_x spreads over x, x+1, ..., x+L-1.
inline LpWitness window_witness(std::size_t n, std::size_t L, double p) {
  const auto m = static_cast<Eigen::Index>(n);
  LpWitness w;
  w.xi = Matrix::Zero(m, m);
  const double v = std::pow(static_cast<double>(L), -1.0 / p);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < L; ++j)
      w.xi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>((x + j) % n)) = v;
  w.params.p = p;
  w.params.S = static_cast<double>(L - 1);
  return w;
}

struct NamedSpace {
  std::string name;
  FiniteMetricSpace space;
};

/// 25 graph metrics with at most 12 points: cycles, paths, trees, cubes,
/// complete graphs and seeded random regular graphs.
inline std::vector<NamedSpace> conversion_corpus() {
  std::vector<NamedSpace> out;
  for (std::size_t n : {3, 4, 5, 6, 8, 10, 12}) out.push_back({"cycle" + std::to_string(n), graph_metric(cycle_graph(n))});
  for (std::size_t n : {2, 3, 5, 7, 9, 12}) out.push_back({"path" + std::to_string(n), graph_metric(path_graph(n))});
  out.push_back({"tree2x2", graph_metric(tree_graph(2, 2))});
  out.push_back({"tree3x1", graph_metric(tree_graph(3, 1))});
  out.push_back({"tree3x2", graph_metric(tree_graph(3, 2))});
  out.push_back({"tree2x1", graph_metric(tree_graph(2, 1))});
  out.push_back({"cube2", graph_metric(hypercube_graph(2))});
  out.push_back({"cube3", graph_metric(hypercube_graph(3))});
  out.push_back({"complete4", graph_metric(complete_graph(4))});
  out.push_back({"complete6", graph_metric(complete_graph(6))});
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto g = random_regular_graph(10, 3, seed);
    out.push_back({"rr10s" + std::to_string(seed), graph_metric(g.adjacency())});
  }
  out.push_back({"rr12s4", graph_metric(random_regular_graph(12, 3, 4).adjacency())});
  return out;
}

}  // namespace fixture
