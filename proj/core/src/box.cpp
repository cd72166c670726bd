#include "coarselab/error.hpp"
#include "coarselab/groups.hpp"

#include <cmath>

namespace coarselab {

BoxSpace box_space(const QuotientChain& chain) {
  BoxSpace box;
  box.ambient = chain.group();
  std::vector<FiniteMetricSpace> spaces;
  std::size_t offset = 0;
  for (const auto& k : chain.subgroups()) {
    box.blocks.push_back(quotient(chain.group(), k));
    spaces.push_back(box.blocks.back().space);
    box.offsets.push_back(offset);
    offset += spaces.back().size();
  }
  box.space = separated_union(spaces, GapPolicy::MaxDiamPlusOne);
  return box;
}

bool isometric_on_ball(const FiniteGroup& g, const Quotient& q, double S) {
  const auto ball = g.ball(S);
  for (Index a : ball)
    for (Index b : ball)
      if (std::abs(q.space.d(q.projection[a], q.projection[b]) - g.distance(a, b)) > 1e-9) return false;
  return true;
}

BoxKernel box_kernel(const BoxSpace& box, const std::vector<double>& phi) {
  const FiniteGroup& g = box.ambient;
  require(!box.blocks.empty(), "box_kernel: empty box space");
  require(phi.size() == g.size(), "box_kernel: phi must have one value per ambient group element");
  require(std::abs(phi[g.identity()] - 1.0) <= 1e-12, "box_kernel: phi must equal 1 at the identity");
  double S = 0.0;
  for (Index a = 0; a < g.size(); ++a) {
    require(std::abs(phi[a] - phi[g.inv(a)]) <= 1e-12,
            "box_kernel: phi is not symmetric at " + g.element(a));
    if (phi[a] != 0.0) S = std::max(S, static_cast<double>(g.length(a)));
  }
  BoxKernel out;
  out.support_radius = S;
  std::size_t first = box.blocks.size();
  for (std::size_t n = 0; n < box.blocks.size(); ++n)
    if (isometric_on_ball(g, box.blocks[n], S)) {
      first = n;
      break;
    }
  if (first == box.blocks.size())
    fail_precondition("box_kernel: no block is isometric on the ball of radius " + std::to_string(S));
  out.first_isometric = first;

  const auto total = static_cast<Eigen::Index>(box.space.size());
  Matrix k = Matrix::Zero(total, total);
  const auto ball = g.ball(S);
  for (std::size_t n = 0; n < box.blocks.size(); ++n) {
    const Quotient& q = box.blocks[n];
    const std::size_t m = q.group.size();
    const auto off = static_cast<Eigen::Index>(box.offsets[n]);
    if (n < first) {
      k.block(off, off, static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)).setOnes();
      continue;
    }
    std::vector<double> psi(m, 0.0);
    std::vector<char> lifted(m, 0);
    for (Index a : ball) {
      const Index c = q.projection[a];
      if (lifted[c]) fail_invariant("box_kernel: two short lifts of " + q.group.element(c));
      lifted[c] = 1;
      psi[c] = phi[a];
    }
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b)
        k(off + static_cast<Eigen::Index>(a), off + static_cast<Eigen::Index>(b)) =
            psi[q.group.mul(q.group.inv(a), b)];
  }
  const Kernel kernel(k);
  out.witness.k = k;
  out.witness.params.S = kernel.propagation(box.space, 1e-12);
  return out;
}

std::vector<double> box_function(const BoxSpace& box, const Matrix& kernel, std::size_t block) {
  require(block < box.blocks.size(), "box_function: block index out of range");
  require(static_cast<std::size_t>(kernel.rows()) == box.space.size() && kernel.rows() == kernel.cols(),
          "box_function: kernel size does not match the box space");
  const Quotient& q = box.blocks[block];
  const std::size_t m = q.group.size();
  const std::size_t off = box.offsets[block];
  std::vector<double> psi(m, 0.0);
  for (Index f = 0; f < m; ++f) {
    double sum = 0.0;
    for (Index h = 0; h < m; ++h)
      sum += kernel(static_cast<Eigen::Index>(off + h), static_cast<Eigen::Index>(off + q.group.mul(h, f)));
    psi[f] = sum / static_cast<double>(m);
  }
  return psi;
}

}  // namespace coarselab
