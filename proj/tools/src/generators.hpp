#pragma once

#include <coarselab/groups.hpp>
#include <coarselab/metric.hpp>
#include <coarselab/spectral.hpp>

#include <cstdint>
#include <string>

namespace coarselab::cli {

struct GeneratorSpec {
  std::string kind;
  std::size_t n = 8;
  std::size_t branch = 2;
  std::size_t depth = 3;
  std::size_t degree = 3;
  std::string base = "z2";
  std::uint64_t seed = 0;
};

/// Z/k for a name "z<k>".
FiniteGroup base_group(const std::string& name);
/// zn, z2pow or dihedral with parameter n; "z<k>" names Z/k.
FiniteGroup make_group(const std::string& kind, std::size_t n);
FiniteMetricSpace make_space(const GeneratorSpec& spec);
RegularGraph make_graph(const GeneratorSpec& spec);
/// Printable name such as "Z2^3" or "D4".
std::string group_label(const std::string& kind, std::size_t n);

}  // namespace coarselab::cli
