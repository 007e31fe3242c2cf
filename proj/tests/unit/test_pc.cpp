#include <cmath>
#include <random>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/errors.hpp"
#include "causalfair/graph_algorithms.hpp"
#include "causalfair/pc.hpp"
#include "causalfair/stats.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace causalfair;
using testsupport::u01;

namespace {

// Centered uniform noise with a chosen standard deviation.
double uniform_noise(std::mt19937_64& rng, double sd) {
  const double half_width = sd * std::sqrt(3.0);
  return (2.0 * u01(rng) - 1.0) * half_width;
}

}  // namespace

TEST_CASE("pc skeleton separates hand-built structures") {
  MixedGraph collider({"X", "Z", "Y"});
  collider.add_directed(0, 1);
  collider.add_directed(2, 1);
  SkeletonResult sk = pc_skeleton(collider.names(), oracle_ci_test(collider));
  CHECK(sk.graph.has_edge(0, 1));
  CHECK(sk.graph.has_edge(1, 2));
  CHECK_FALSE(sk.graph.has_edge(0, 2));
  REQUIRE(sk.sepsets.has(0, 2));
  CHECK(sk.sepsets.get(0, 2).empty());

  MixedGraph chain({"X", "M", "Y"});
  chain.add_directed(0, 1);
  chain.add_directed(1, 2);
  SkeletonResult ck = pc_skeleton(chain.names(), oracle_ci_test(chain));
  CHECK_FALSE(ck.graph.has_edge(0, 2));
  REQUIRE(ck.sepsets.has(0, 2));
  CHECK(ck.sepsets.get(0, 2) == std::vector<NodeId>{1});
  CHECK(ck.max_depth_reached == 1);
}

TEST_CASE("pc orientation on hand-built skeletons") {
  // Centre absent from the separating set: collider.
  MixedGraph skel({"X", "Z", "Y"});
  skel.add_undirected(0, 1);
  skel.add_undirected(1, 2);
  SepsetMap empty_sep;
  empty_sep.set(0, 2, {});
  MixedGraph out = pc_orient(skel, empty_sep);
  CHECK(out.is_directed(0, 1));
  CHECK(out.is_directed(2, 1));

  // Centre in the separating set: nothing to orient.
  SepsetMap mid_sep;
  mid_sep.set(0, 2, {1});
  MixedGraph none = pc_orient(skel, mid_sep);
  CHECK(none.is_undirected(0, 1));
  CHECK(none.is_undirected(1, 2));

  // Collider plus a pendant edge: the first rule pushes Z -> D.
  MixedGraph skel4({"X", "Z", "Y", "D"});
  skel4.add_undirected(0, 1);
  skel4.add_undirected(1, 2);
  skel4.add_undirected(1, 3);
  SepsetMap sep4;
  sep4.set(0, 2, {});
  sep4.set(0, 3, {1});
  sep4.set(2, 3, {1});
  MixedGraph ruled = pc_orient(skel4, sep4);
  CHECK(ruled.is_directed(0, 1));
  CHECK(ruled.is_directed(2, 1));
  CHECK(ruled.is_directed(1, 3));

  // Missing sepset entries are a contract violation.
  SepsetMap missing;
  CHECK_THROWS_AS(pc_orient(skel, missing), InvalidArgumentError);
}

TEST_CASE("pc with an exact test recovers the completed pattern") {
  std::mt19937_64 rng(260815);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(u01(rng) * 5.0);  // 4..8
    MixedGraph truth = testsupport::random_dag(rng, n, 0.3);
    PcResult res = run_pc(truth.names(), oracle_ci_test(truth));
    CHECK(res.cpdag == complete_to_cpdag(truth));
    CHECK(res.cpdag.is_pattern());
    CHECK(res.warnings.empty());

    // Every non-adjacent pair carries a separating set.
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (!res.cpdag.has_edge(u, v)) CHECK(res.sepsets.has(u, v));

    // Loose complexity envelope: ordered pairs times subsets.
    const long long cap = static_cast<long long>(n) * (n - 1) *
                          (1LL << (n - 2));
    CHECK(res.tests_performed <= cap);
  }
}

TEST_CASE("pc orientation is idempotent") {
  std::mt19937_64 rng(260816);
  for (int trial = 0; trial < 20; ++trial) {
    MixedGraph truth = testsupport::random_dag(rng, 6, 0.35);
    SkeletonResult sk = pc_skeleton(truth.names(), oracle_ci_test(truth));
    MixedGraph once = pc_orient(sk.graph, sk.sepsets);
    MixedGraph twice = pc_orient(once, sk.sepsets);
    CHECK(once == twice);
  }
}

TEST_CASE("depth-0 edge removal is monotone in alpha") {
  std::mt19937_64 rng(40992);
  const int n = 400, nv = 5;
  std::vector<std::vector<double>> cols(
      static_cast<std::size_t>(nv), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    cols[0][static_cast<std::size_t>(i)] = testsupport::normal01(rng);
    cols[1][static_cast<std::size_t>(i)] =
        0.4 * cols[0][static_cast<std::size_t>(i)] + testsupport::normal01(rng);
    cols[2][static_cast<std::size_t>(i)] =
        0.2 * cols[1][static_cast<std::size_t>(i)] + testsupport::normal01(rng);
    cols[3][static_cast<std::size_t>(i)] = testsupport::normal01(rng);
    cols[4][static_cast<std::size_t>(i)] =
        0.1 * cols[3][static_cast<std::size_t>(i)] + testsupport::normal01(rng);
  }
  std::vector<Column> dcols;
  for (int j = 0; j < nv; ++j)
    dcols.push_back(Column::continuous("v" + std::to_string(j),
                                       cols[static_cast<std::size_t>(j)]));
  Dataset d(dcols);

  // Independence is declared when p >= alpha, so a smaller alpha prunes
  // at least as many edges in the marginal pass.
  SkeletonResult sparse =
      pc_skeleton(d, TestConfig::fisher_z(0.001), {}, /*max_depth=*/0);
  SkeletonResult dense =
      pc_skeleton(d, TestConfig::fisher_z(0.05), {}, /*max_depth=*/0);
  for (const Edge& e : sparse.graph.edges()) CHECK(dense.graph.has_edge(e.u, e.v));
  CHECK(sparse.graph.edge_count() <= dense.graph.edge_count());
}

TEST_CASE("pc honours background knowledge") {
  MixedGraph truth({"A", "B", "C"});
  truth.add_directed(0, 1);
  truth.add_directed(1, 2);

  // Forbidding both directions severs the pair before any test.
  BackgroundKnowledge forbid;
  forbid.forbid(0, 1);
  forbid.forbid(1, 0);
  PcResult cut = run_pc(truth.names(), oracle_ci_test(truth), forbid);
  CHECK_FALSE(cut.cpdag.has_edge(0, 1));
  REQUIRE(cut.sepsets.has(0, 1));
  CHECK(cut.sepsets.get(0, 1).empty());

  // Tiers orient otherwise-ambiguous chain edges.
  BackgroundKnowledge tiers;
  tiers.set_tier(0, 0);
  tiers.set_tier(1, 1);
  tiers.set_tier(2, 2);
  PcResult t = run_pc(truth.names(), oracle_ci_test(truth), tiers);
  CHECK(t.cpdag.is_directed(0, 1));
  CHECK(t.cpdag.is_directed(1, 2));
  CHECK(t.warnings.empty());

  // A required orientation does the same for a single edge.
  BackgroundKnowledge req;
  req.require(1, 0);
  PcResult r = run_pc(truth.names(), oracle_ci_test(truth), req);
  CHECK(r.cpdag.is_directed(1, 0));

  // Tier knowledge clashing with a collider arrow freezes the edge
  // undirected and warns instead of silently rewriting.
  MixedGraph vtruth({"X", "Z", "Y"});
  vtruth.add_directed(0, 1);
  vtruth.add_directed(2, 1);
  BackgroundKnowledge clash;
  clash.set_tier(1, 0);  // demands Z before X
  clash.set_tier(0, 1);
  PcResult c = run_pc(vtruth.names(), oracle_ci_test(vtruth), clash);
  CHECK_FALSE(c.warnings.empty());
  CHECK(c.cpdag.is_undirected(0, 1));
  CHECK(c.cpdag.is_directed(2, 1));
}

TEST_CASE("pc on a six-variable linear benchmark") {
  // Ground truth: two source-driven forks feeding two colliders. The
  // pattern directs the collider arrows and their closures; the three
  // top edges stay undirected.
  MixedGraph truth({"X1", "X2", "X3", "X4", "X5", "X6"});
  truth.add_directed(0, 1);
  truth.add_directed(0, 2);
  truth.add_directed(1, 3);
  truth.add_directed(1, 4);
  truth.add_directed(2, 4);
  truth.add_directed(3, 5);
  truth.add_directed(4, 5);

  std::mt19937_64 rng(8101);
  const int n = 10000;
  std::vector<std::vector<double>> x(6, std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const std::size_t r = static_cast<std::size_t>(i);
    x[0][r] = uniform_noise(rng, 1.0);
    x[1][r] = 1.0 * x[0][r] + uniform_noise(rng, 1.0);
    x[2][r] = 0.9 * x[0][r] + uniform_noise(rng, 1.0);
    x[3][r] = 1.1 * x[1][r] + uniform_noise(rng, 1.0);
    x[4][r] = 1.3 * x[1][r] + 1.2 * x[2][r] + uniform_noise(rng, 1.3);
    x[5][r] = 0.8 * x[3][r] + 1.0 * x[4][r] + uniform_noise(rng, 1.0);
  }
  std::vector<Column> cols;
  for (int j = 0; j < 6; ++j)
    cols.push_back(Column::continuous(truth.name(j), x[static_cast<std::size_t>(j)]));
  Dataset d(cols);

  PcResult res = run_pc(d, TestConfig::fisher_z(0.01));
  const MixedGraph expected = complete_to_cpdag(truth);
  CHECK(res.cpdag == expected);

  // The two collider fan-ins are directed, the fork edges are not.
  CHECK(res.cpdag.is_directed(1, 4));
  CHECK(res.cpdag.is_directed(2, 4));
  CHECK(res.cpdag.is_directed(3, 5));
  CHECK(res.cpdag.is_directed(4, 5));
  CHECK(res.cpdag.is_undirected(0, 1));
  CHECK(res.cpdag.is_undirected(0, 2));
  CHECK(res.cpdag.is_undirected(1, 3));
}

TEST_CASE("pc edge cases and error context") {
  Dataset single({Column::continuous("only", {1.0, 2.0, 3.0, 2.0, 1.0})});
  PcResult res = run_pc(single, TestConfig::fisher_z());
  CHECK(res.cpdag.edge_count() == 0);
  CHECK(res.tests_performed == 0);
  CHECK(res.max_depth_reached == -1);

  // A family mismatch inside the search surfaces with the test context.
  Dataset cat({Column::categorical("a", {0, 1, 0, 1}),
               Column::categorical("b", {1, 1, 0, 0})});
  try {
    run_pc(cat, TestConfig::fisher_z());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "mixed_family");
    CHECK(std::string(e.what()).find("testing") != std::string::npos);
  }
}
