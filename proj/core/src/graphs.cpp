#include "coarselab/graphs.hpp"

#include "coarselab/error.hpp"

namespace coarselab {

namespace {

Adjacency empty(std::size_t n) { return Adjacency(n, std::vector<int>(n, 0)); }

void link(Adjacency& a, std::size_t u, std::size_t v) { a[u][v] = a[v][u] = 1; }

}  // namespace

Adjacency cycle_graph(std::size_t n) {
  require(n >= 3, "cycle_graph needs at least 3 vertices");
  auto a = empty(n);
  for (std::size_t i = 0; i < n; ++i) link(a, i, (i + 1) % n);
  return a;
}

Adjacency path_graph(std::size_t n) {
  require(n >= 1, "path_graph needs at least one vertex");
  auto a = empty(n);
  for (std::size_t i = 0; i + 1 < n; ++i) link(a, i, i + 1);
  return a;
}

Adjacency tree_graph(std::size_t branch, std::size_t depth) {
  require(branch >= 1, "tree_graph: branch must be positive");
  std::size_t n = 1, level = 1;
  for (std::size_t d = 0; d < depth; ++d) {
    level *= branch;
    n += level;
    require(n <= 4096, "tree_graph: too many vertices");
  }
  auto a = empty(n);
  for (std::size_t v = 1; v < n; ++v) link(a, v, (v - 1) / branch);
  return a;
}

Adjacency hypercube_graph(std::size_t n) {
  require(n <= 12, "hypercube_graph: dimension at most 12");
  const std::size_t size = std::size_t{1} << n;
  auto a = empty(size);
  for (std::size_t v = 0; v < size; ++v)
    for (std::size_t b = 0; b < n; ++b) a[v][v ^ (std::size_t{1} << b)] = 1;
  return a;
}

Adjacency complete_graph(std::size_t n) {
  require(n >= 1, "complete_graph needs at least one vertex");
  auto a = empty(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) link(a, i, j);
  return a;
}

}  // namespace coarselab
