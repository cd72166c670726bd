#pragma once

#include "coarselab/metric.hpp"

namespace coarselab {

Adjacency cycle_graph(std::size_t n);
Adjacency path_graph(std::size_t n);
/// Rooted tree where every internal vertex has `branch` children; depth 0 is a single vertex.
Adjacency tree_graph(std::size_t branch, std::size_t depth);
/// The n-cube on 2^n vertices, adjacent when the labels differ in one bit.
Adjacency hypercube_graph(std::size_t n);
Adjacency complete_graph(std::size_t n);

}  // namespace coarselab
