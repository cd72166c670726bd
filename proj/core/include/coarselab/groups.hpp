#pragma once

#include "coarselab/kernels.hpp"
#include "coarselab/metric.hpp"
#include "coarselab/spectral.hpp"
#include "coarselab/witness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coarselab {

/// A finite group given by its multiplication table, with a symmetric
/// generating set and an integer length function.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  /// table[a][b] is the index of a*b. When `lengths` is omitted the word
  /// length over `generators` is used, which requires them to generate.
  FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<Index>> table,
              std::vector<Index> generators, std::optional<std::vector<int>> lengths = std::nullopt);

  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<std::string>& elements() const noexcept { return elements_; }
  const std::string& element(Index g) const { return elements_.at(g); }
  std::optional<Index> find(const std::string& name) const;
  const std::vector<std::vector<Index>>& table() const noexcept { return table_; }

  Index mul(Index a, Index b) const { return table_[a][b]; }
  Index inv(Index a) const { return inverse_[a]; }
  Index identity() const noexcept { return identity_; }
  const std::vector<Index>& generators() const noexcept { return generators_; }
  int length(Index g) const { return lengths_[g]; }
  const std::vector<int>& lengths() const noexcept { return lengths_; }
  bool user_lengths() const noexcept { return user_lengths_; }

  /// True when the generating set reaches every element.
  bool generates() const;
  /// Elements g with |g| <= r.
  std::vector<Index> ball(double r) const;
  /// d(g, h) = |g^-1 h| under the stored length function.
  double distance(Index g, Index h) const { return lengths_[mul(inv(g), h)]; }

 private:
  std::vector<std::string> elements_;
  std::vector<std::vector<Index>> table_;
  std::vector<Index> generators_;
  std::vector<Index> inverse_;
  std::vector<int> lengths_;
  Index identity_ = 0;
  bool user_lengths_ = false;
};

/// Word lengths over the generators by breadth-first search; nullopt entries
/// are unreachable elements.
std::vector<std::optional<int>> word_lengths(const FiniteGroup& g);

FiniteGroup cyclic_group(std::size_t n);
/// (Z/2)^k with the k coordinate flips; elements are bit strings.
FiniteGroup z2_power(std::size_t k);
/// Dihedral group of order 2n generated by a rotation, its inverse and a reflection.
FiniteGroup dihedral_group(std::size_t n);
/// Direct product with generators (s, e) and (e, t); ids "(g,h)".
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
FiniteGroup direct_power(const FiniteGroup& base, std::size_t n);

/// Word metric d(g, h) = |g^-1 h| from a breadth-first search.
FiniteMetricSpace cayley_metric(const FiniteGroup& g);
/// Metric d(g, h) = |g^-1 h| for the stored (possibly user-supplied) lengths.
FiniteMetricSpace length_metric(const FiniteGroup& g);
/// Cayley graph with colours: the step g -> g s carries the index of s.
RegularGraph cayley_graph(const FiniteGroup& g);

bool is_subgroup(const FiniteGroup& g, const std::vector<Index>& k);
bool is_normal(const FiniteGroup& g, const std::vector<Index>& k);
/// Subgroup generated by the listed elements.
std::vector<Index> generated_subgroup(const FiniteGroup& g, const std::vector<Index>& gens);

struct Quotient {
  FiniteGroup group;              ///< G / K with lengths min over lifts
  FiniteMetricSpace space;        ///< d(aK, bK) = min over lifts
  std::vector<Index> projection;  ///< element of G -> coset index
  std::vector<Index> representative;
  std::vector<Index> kernel;
};

/// Quotient by a normal subgroup. Verifies the quotient map is 1-Lipschitz.
Quotient quotient(const FiniteGroup& g, const std::vector<Index>& k);
FiniteMetricSpace quotient_metric(const FiniteGroup& g, const std::vector<Index>& k);

class QuotientChain {
 public:
  QuotientChain(FiniteGroup group, std::vector<std::vector<Index>> subgroups);

  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<std::vector<Index>>& subgroups() const noexcept { return subgroups_; }
  const std::vector<Index>& intersection() const noexcept { return intersection_; }
  std::size_t size() const noexcept { return subgroups_.size(); }

 private:
  FiniteGroup group_;
  std::vector<std::vector<Index>> subgroups_;
  std::vector<Index> intersection_;
};

/// Z/2^m with the chain <2>, <4>, ..., <2^m> = {0}.
QuotientChain dyadic_chain(std::size_t m);

struct BoxSpace {
  FiniteGroup ambient;
  FiniteMetricSpace space;
  std::vector<Quotient> blocks;
  std::vector<std::size_t> offsets;  ///< first point of each block
};

BoxSpace box_space(const QuotientChain& chain);

/// True when the quotient map is an isometry on the closed ball B(e, S).
bool isometric_on_ball(const FiniteGroup& g, const Quotient& q, double S);

struct BoxKernel {
  KernelWitness witness;
  std::size_t first_isometric = 0;  ///< first block whose quotient map is isometric on B(e, S)
  double support_radius = 0.0;
};

/// Piecewise kernel on the box space built from a finitely supported
/// positive-type function phi on the ambient group.
BoxKernel box_kernel(const BoxSpace& box, const std::vector<double>& phi);

/// psi_n(f) = (1/|F_n|) sum_{f'} k(f', f' f) on block n.
std::vector<double> box_function(const BoxSpace& box, const Matrix& kernel, std::size_t block);

/// Blocks G^1, ..., G^n_max with l^1 product metrics and gaps n + 1 between
/// consecutive blocks, added along the chain.
FiniteMetricSpace hypercube_space(const FiniteGroup& base, std::size_t n_max);

class GroupAction {
 public:
  GroupAction(FiniteGroup group, FiniteMetricSpace space, std::vector<std::vector<Index>> permutations);

  const FiniteGroup& group() const noexcept { return group_; }
  const FiniteMetricSpace& space() const noexcept { return space_; }
  Index act(Index g, Index x) const { return perms_[g][x]; }
  const std::vector<std::vector<Index>>& permutations() const noexcept { return perms_; }

 private:
  FiniteGroup group_;
  FiniteMetricSpace space_;
  std::vector<std::vector<Index>> perms_;
};

/// Z/2 acting on an even cycle by the antipodal map.
GroupAction antipodal_action(std::size_t cycle_length);
/// Z/n acting on the n-cycle by rotation.
GroupAction rotation_action(std::size_t cycle_length);
GroupAction trivial_action(const FiniteMetricSpace& space);

/// Largest metric below d with d(x, g x) <= |g|, by Dijkstra over metric
/// moves and group moves.
FiniteMetricSpace warp_metric(const GroupAction& action);

struct WarpedWitness {
  FiniteMetricSpace space;
  LpWitness witness;
  double S_bound = 0.0;
  WitnessReport report;
};

/// nu_x = sum_g f(g) mu_{g x}, measured on the warped space at scale R.
WarpedWitness warped_witness(const GroupAction& action, const std::vector<double>& folner,
                             const LpWitness& base, double R);

}  // namespace coarselab
