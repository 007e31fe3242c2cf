#include <random>
#include <vector>

#include "causalfair/errors.hpp"
#include "causalfair/fci.hpp"
#include "causalfair/graph_algorithms.hpp"
#include "causalfair/pc.hpp"
#include "causalfair/stats.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace causalfair;

namespace {

// Every PAG edge must be one of ->, <->, o-, o-o, o->; in particular a
// Tail end implies an Arrow at the opposite end.
void check_edge_forms(const MixedGraph& pag) {
  for (const Edge& e : pag.edges()) {
    if (e.mark_u == EdgeMark::Tail) CHECK(e.mark_v == EdgeMark::Arrow);
    if (e.mark_v == EdgeMark::Tail) CHECK(e.mark_u == EdgeMark::Arrow);
  }
}

}  // namespace

TEST_CASE("fci orients a collider with circle far ends") {
  MixedGraph skel({"X", "Z", "Y"});
  skel.add_undirected(0, 1);
  skel.add_undirected(1, 2);
  SepsetMap sep;
  sep.set(0, 2, {});
  PagResult res = fci_orient(skel, sep);
  CHECK(res.pag.end_mark(0, 1) == EdgeMark::Arrow);   // arrow into Z
  CHECK(res.pag.end_mark(2, 1) == EdgeMark::Arrow);
  CHECK(res.pag.end_mark(1, 0) == EdgeMark::Circle);  // far ends stay circles
  CHECK(res.pag.end_mark(1, 2) == EdgeMark::Circle);
  CHECK(res.warnings.empty());

  // Centre inside the separating set: everything stays o-o.
  SepsetMap mid;
  mid.set(0, 2, {1});
  PagResult plain = fci_orient(skel, mid);
  CHECK(plain.pag.end_mark(0, 1) == EdgeMark::Circle);
  CHECK(plain.pag.end_mark(1, 0) == EdgeMark::Circle);

  SepsetMap missing;
  CHECK_THROWS_AS(fci_orient(skel, missing), InvalidArgumentError);
}

TEST_CASE("fci first rule pushes arrows along unshielded routes") {
  // W *-> C <-* X collider, then C o-o Y with X, Y non-adjacent turns
  // into C -> Y.
  MixedGraph skel({"X", "C", "W", "Y"});
  skel.add_undirected(0, 1);
  skel.add_undirected(2, 1);
  skel.add_undirected(1, 3);
  SepsetMap sep;
  sep.set(0, 2, {});
  sep.set(0, 3, {1});
  sep.set(2, 3, {1});
  PagResult res = fci_orient(skel, sep);
  CHECK(res.pag.end_mark(0, 1) == EdgeMark::Arrow);
  CHECK(res.pag.end_mark(2, 1) == EdgeMark::Arrow);
  CHECK(res.pag.is_directed(1, 3));  // tail at C, arrow at Y
  check_edge_forms(res.pag);
}

TEST_CASE("two connected variables stay fully ambiguous") {
  MixedGraph skel({"X", "Y"});
  skel.add_undirected(0, 1);
  PagResult res = fci_orient(skel, SepsetMap{});
  CHECK(res.pag.end_mark(0, 1) == EdgeMark::Circle);
  CHECK(res.pag.end_mark(1, 0) == EdgeMark::Circle);

  // Same picture via the full run on a single-edge truth.
  MixedGraph truth({"X", "Y"});
  truth.add_directed(0, 1);
  PagResult run = run_fci(truth.names(), oracle_ci_test(truth));
  CHECK(run.pag.end_mark(0, 1) == EdgeMark::Circle);
  CHECK(run.pag.end_mark(1, 0) == EdgeMark::Circle);
}

TEST_CASE("discriminating path search finds the textbook configuration") {
  // D *-> X <-* C (collider), X -> Y, C o-o Y, D not adjacent to Y.
  MixedGraph pag({"D", "X", "C", "Y"});
  pag.add_edge(0, 1, EdgeMark::Circle, EdgeMark::Arrow);
  pag.add_edge(1, 2, EdgeMark::Arrow, EdgeMark::Circle);  // arrow at X end
  pag.add_edge(1, 3, EdgeMark::Tail, EdgeMark::Arrow);    // X -> Y
  pag.add_edge(2, 3, EdgeMark::Circle, EdgeMark::Circle);

  auto path = find_discriminating_path(pag, 0, 3, 2);
  REQUIRE(path.has_value());
  CHECK(*path == std::vector<NodeId>{0, 1, 2, 3});

  // c must be adjacent to y.
  CHECK_FALSE(find_discriminating_path(pag, 0, 2, 3).has_value());

  // Three nodes can never span three edges.
  MixedGraph tri({"A", "B", "C"});
  tri.add_edge(0, 1, EdgeMark::Circle, EdgeMark::Circle);
  tri.add_edge(1, 2, EdgeMark::Circle, EdgeMark::Circle);
  CHECK_FALSE(find_discriminating_path(tri, 0, 2, 1).has_value());
}

TEST_CASE("fourth rule resolves discriminating paths both ways") {
  // Skeleton D-X, X-C, X-Y, C-Y; (D,X,C) is a collider triple and the
  // first two rules make X -> Y and an arrow into Y from C. The
  // discriminating path <D,X,C,Y> then consults sepset(D,Y).
  MixedGraph skel({"D", "X", "C", "Y"});
  skel.add_undirected(0, 1);
  skel.add_undirected(1, 2);
  skel.add_undirected(1, 3);
  skel.add_undirected(2, 3);

  // Branch one: C in sepset(D,Y) orients C -> Y.
  SepsetMap sep1;
  sep1.set(0, 2, {});
  sep1.set(0, 3, {1, 2});
  PagResult res1 = fci_orient(skel, sep1);
  CHECK(res1.pag.is_directed(1, 3));                   // X -> Y via rule 1
  CHECK(res1.pag.is_directed(2, 3));                   // C -> Y via rule 4
  CHECK_FALSE(res1.pag.is_bidirected(1, 2));
  check_edge_forms(res1.pag);

  // Branch two: C outside sepset(D,Y) makes X <-> C <-> Y.
  SepsetMap sep2;
  sep2.set(0, 2, {});
  sep2.set(0, 3, {1});
  PagResult res2 = fci_orient(skel, sep2);
  CHECK(res2.pag.is_bidirected(1, 2));
  CHECK(res2.pag.is_bidirected(2, 3));
  CHECK(res2.pag.is_directed(1, 3));
  check_edge_forms(res2.pag);
}

TEST_CASE("y-structure detection") {
  // C1 *-> X <-* C2 collider plus X -> Y: exactly one quadruple.
  MixedGraph truth({"C1", "C2", "X", "Y"});
  truth.add_directed(0, 2);
  truth.add_directed(1, 2);
  truth.add_directed(2, 3);
  PagResult res = run_fci(truth.names(), oracle_ci_test(truth));
  REQUIRE(res.y_structures.size() == 1);
  CHECK(res.y_structures[0] == YStructure{0, 1, 2, 3});

  // Shielding C1 ~ C2 disqualifies the quadruple.
  MixedGraph shielded({"C1", "C2", "X", "Y"});
  shielded.add_edge(0, 2, EdgeMark::Tail, EdgeMark::Arrow);
  shielded.add_edge(1, 2, EdgeMark::Tail, EdgeMark::Arrow);
  shielded.add_edge(2, 3, EdgeMark::Tail, EdgeMark::Arrow);
  shielded.add_edge(0, 1, EdgeMark::Tail, EdgeMark::Tail);
  CHECK(detect_y_structures(shielded).empty());

  // A bidirected X ~ Y edge (possible confounding) also disqualifies.
  MixedGraph bidir({"C1", "C2", "X", "Y"});
  bidir.add_edge(0, 2, EdgeMark::Tail, EdgeMark::Arrow);
  bidir.add_edge(1, 2, EdgeMark::Tail, EdgeMark::Arrow);
  bidir.add_edge(2, 3, EdgeMark::Arrow, EdgeMark::Arrow);
  CHECK(detect_y_structures(bidir).empty());

  CHECK(detect_y_structures(MixedGraph({"A", "B"})).empty());
}

TEST_CASE("latent confounder leaves a fully ambiguous edge") {
  // Truth X <- L -> Y with L unobserved: the two observed variables are
  // dependent with no separating set, so the edge stays o-o.
  MixedGraph truth({"L", "X", "Y"});
  truth.add_directed(0, 1);
  truth.add_directed(0, 2);
  CiTestFn hidden = [&truth](int x, int y, const std::vector<int>& z) {
    // Observed indices 0,1 map to truth nodes X=1, Y=2; L never enters z.
    std::vector<int> zz;
    for (int v : z) zz.push_back(v + 1);
    const bool ind = d_separated(truth, x + 1, y + 1, zz);
    return CiTestResult{0.0, ind ? 1.0 : 0.0, ind, {}};
  };
  PagResult res = run_fci({"X", "Y"}, hidden);
  REQUIRE(res.pag.has_edge(0, 1));
  CHECK(res.pag.end_mark(0, 1) == EdgeMark::Circle);
  CHECK(res.pag.end_mark(1, 0) == EdgeMark::Circle);
}

TEST_CASE("fci agrees with the completed pattern under causal sufficiency") {
  std::mt19937_64 rng(58620);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(testsupport::u01(rng) * 4.0);  // 4..7
    MixedGraph truth = testsupport::random_dag(rng, n, 0.35);
    PagResult res = run_fci(truth.names(), oracle_ci_test(truth));
    const MixedGraph cpdag = complete_to_cpdag(truth);

    // Same skeleton.
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        CHECK(res.pag.has_edge(u, v) == cpdag.has_edge(u, v));

    // An arrowhead into v never contradicts a pattern arrow out of v.
    for (const Edge& e : res.pag.edges()) {
      if (e.mark_v == EdgeMark::Arrow) CHECK_FALSE(cpdag.is_directed(e.v, e.u));
      if (e.mark_u == EdgeMark::Arrow) CHECK_FALSE(cpdag.is_directed(e.u, e.v));
    }
    check_edge_forms(res.pag);
    CHECK(res.warnings.empty());

    // Determinism and fixed point: orienting the same skeleton again
    // reproduces the result.
    SkeletonResult sk = pc_skeleton(truth.names(), oracle_ci_test(truth));
    PagResult again = fci_orient(sk.graph, sk.sepsets);
    CHECK(again.pag == res.pag);
    CHECK(again.y_structures == res.y_structures);
  }
}
