#include "generators.hpp"

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>

namespace coarselab::cli {

namespace {

std::size_t base_order(const std::string& base) {
  if (base.size() >= 2 && base[0] == 'z') {
    try {
      return std::stoul(base.substr(1));
    } catch (const std::exception&) {
    }
  }
  fail_precondition("unknown base group '" + base + "', expected z<k>");
}

}  // namespace

FiniteGroup base_group(const std::string& name) { return cyclic_group(base_order(name)); }

FiniteGroup make_group(const std::string& kind, std::size_t n) {
  if (kind == "zn") return cyclic_group(n);
  if (kind == "z2pow") return z2_power(n);
  if (kind == "dihedral") return dihedral_group(n);
  if (!kind.empty() && kind[0] == 'z') return direct_power(cyclic_group(base_order(kind)), n);
  fail_precondition("unknown group kind '" + kind + "'");
}

std::string group_label(const std::string& kind, std::size_t n) {
  if (kind == "zn") return "Z" + std::to_string(n);
  if (kind == "z2pow") return "Z2^" + std::to_string(n);
  if (kind == "dihedral") return "D" + std::to_string(n);
  return "Z" + kind.substr(1) + "^" + std::to_string(n);
}

FiniteMetricSpace make_space(const GeneratorSpec& spec) {
  const auto& k = spec.kind;
  if (k == "cycle") return graph_metric(cycle_graph(spec.n));
  if (k == "path") return graph_metric(path_graph(spec.n));
  if (k == "tree") return graph_metric(tree_graph(spec.branch, spec.depth));
  if (k == "hypercube") return graph_metric(hypercube_graph(spec.n));
  if (k == "complete") return graph_metric(complete_graph(spec.n));
  if (k == "random-regular") return graph_metric(random_regular_graph(spec.n, spec.degree, spec.seed).adjacency());
  if (k == "z2pow" || k == "zn" || k == "dihedral") return cayley_metric(make_group(k, spec.n));
  if (k == "box") return box_space(dyadic_chain(spec.n)).space;
  if (k == "nowak") return hypercube_space(cyclic_group(base_order(spec.base)), spec.n);
  fail_precondition("unknown space kind '" + k + "'");
}

RegularGraph make_graph(const GeneratorSpec& spec) {
  const auto& k = spec.kind;
  if (k == "cycle") return RegularGraph(cycle_graph(spec.n));
  if (k == "hypercube") return RegularGraph(hypercube_graph(spec.n));
  if (k == "complete") return RegularGraph(complete_graph(spec.n));
  if (k == "random-regular") return random_regular_graph(spec.n, spec.degree, spec.seed);
  if (k == "z2pow" || k == "zn" || k == "dihedral") return cayley_graph(make_group(k, spec.n));
  fail_precondition("unknown regular graph kind '" + k + "'");
}

}  // namespace coarselab::cli
