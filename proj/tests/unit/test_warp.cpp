#include <doctest.h>

#include <coarselab/error.hpp>
#include <coarselab/graphs.hpp>
#include <coarselab/groups.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace coarselab;

namespace {

GroupAction reflected_path(std::size_t n) {
  std::vector<std::vector<Index>> perms(2, std::vector<Index>(n));
  for (Index x = 0; x < n; ++x) {
    perms[0][x] = x;
    perms[1][x] = n - 1 - x;
  }
  return GroupAction(cyclic_group(2), graph_metric(path_graph(n)), perms);
}

}  // namespace

TEST_CASE("antipodal warp of the 8-cycle") {
  const auto w = warp_metric(antipodal_action(8));
  CHECK(w.d(0, 4) == 1.0);
  CHECK(w.d(0, 3) == 2.0);
  CHECK(w.d(0, 2) == 2.0);
  CHECK(w.d(0, 1) == 1.0);
}

TEST_CASE("warp metrics match the chain-closure oracle") {
  for (const auto& action : {antipodal_action(8), antipodal_action(12), rotation_action(6), reflected_path(7),
                             reflected_path(12), trivial_action(graph_metric(tree_graph(2, 2)))}) {
    const auto w = warp_metric(action);
    const Matrix ref = oracle::chain_closure(action);
    const auto& space = action.space();
    CHECK((w.dist() - ref).cwiseAbs().maxCoeff() < 1e-12);
    for (Index x = 0; x < space.size(); ++x) {
      for (Index y = 0; y < space.size(); ++y) CHECK(w.d(x, y) <= space.d(x, y));
      for (Index g = 0; g < action.group().size(); ++g)
        CHECK(w.d(x, action.act(g, x)) <= action.group().length(g));
    }
  }
  const auto space = graph_metric(cycle_graph(5));
  CHECK(warp_metric(trivial_action(space)).dist() == space.dist());
  CHECK(warp_metric(reflected_path(6)).d(0, 5) == 1.0);
}

TEST_CASE("group actions are validated") {
  const auto space = graph_metric(cycle_graph(4));
  CHECK_THROWS_AS(GroupAction(cyclic_group(2), space, {{0, 1, 2, 3}, {0, 0, 2, 3}}), InvariantError);
  CHECK_THROWS_AS(GroupAction(cyclic_group(2), space, {{1, 0, 2, 3}, {1, 0, 2, 3}}), InvariantError);
  CHECK_THROWS_AS(GroupAction(cyclic_group(3), space, {{0, 1, 2, 3}, {1, 0, 2, 3}, {1, 0, 2, 3}}), InvariantError);
  CHECK_THROWS_AS(GroupAction(cyclic_group(2), space, {{0, 1, 2, 3}}), PreconditionError);
  CHECK_THROWS_AS(GroupAction(cyclic_group(2), space, {{0, 1, 2, 3}, {1, 0, 2, 9}}), PreconditionError);
  CHECK_THROWS_AS(antipodal_action(5), PreconditionError);
}

TEST_CASE("warped witnesses") {
  const auto action = antipodal_action(8);
  const auto base = fixture::ball_witness(action.space(), 1.0, 1.0);
  const auto uniform = warped_witness(action, {0.5, 0.5}, base, 1.0);
  CHECK(uniform.report.valid);
  CHECK(uniform.S_bound == 2.0);
  CHECK(uniform.report.S_measured <= uniform.S_bound);
  CHECK(uniform.space.dist() == warp_metric(action).dist());
  for (Index x = 0; x < 8; ++x) CHECK(uniform.witness.xi.row(static_cast<Eigen::Index>(x)).sum() == doctest::Approx(1.0));
  // The averaged measure is invariant under the antipodal map.
  CHECK(uniform.witness.xi.row(0).isApprox(uniform.witness.xi.row(4)));

  const auto delta = warped_witness(action, {1.0, 0.0}, base, 1.0);
  CHECK(delta.witness.xi.isApprox(base.xi));
  const auto trivial = warped_witness(trivial_action(action.space()), {1.0}, base, 1.0);
  CHECK(trivial.witness.xi.isApprox(base.xi));

  CHECK_THROWS_AS(warped_witness(action, {0.7, 0.7}, base, 1.0), PreconditionError);
  CHECK_THROWS_AS(warped_witness(action, {1.0}, base, 1.0), PreconditionError);
  auto bad = base;
  bad.xi *= 2.0;
  CHECK_THROWS_AS(warped_witness(action, {0.5, 0.5}, bad, 1.0), PreconditionError);
}
