#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"
#include "causalfair/stats.hpp"

namespace causalfair {

// C1 *-> X <-* C2 with X -> Y, C1 and C2 non-adjacent to each other and
// to Y: certifies that the X ~ Y edge is free of latent confounding.
struct YStructure {
  NodeId c1 = -1;
  NodeId c2 = -1;
  NodeId x = -1;
  NodeId y = -1;
  friend bool operator==(const YStructure&, const YStructure&) = default;
};

struct PagResult {
  // Endpoint marks range over Tail, Arrow and Circle; every edge is one
  // of the forms ->, <->, o-, o-o, o->.
  MixedGraph pag;
  SepsetMap sepsets;
  std::vector<YStructure> y_structures;
  // Skipped mark rewrites (an Arrow or Tail end is never weakened).
  std::vector<std::string> warnings;
  long long tests_performed = 0;
  int max_depth_reached = -1;
};

// Orientation over circle-marked edges. Every endpoint starts as Circle;
// unshielded triples whose centre is outside the separating set gain
// arrowheads at the centre (far ends untouched); then four rules run to
// a fixed point:
//   1. a *-> b o-* c, a and c non-adjacent          => b -> c
//   2. (a -> c *-> b) or (a *-> c -> b), a *-o b    => a *-> b
//   3. a *-> b <-* c, a *-o d o-* c, a and c
//      non-adjacent, d *-o b                        => d *-> b
//   4. a discriminating path from d to y for c with a circle at the c
//      end of c ~ y: c -> y when c lies in the separating set of (d, y),
//      otherwise the triple before y becomes x <-> c <-> y.
// Marks only strengthen (Circle to Tail or Arrow); contradictory
// demands are skipped with a warning. `sepsets` must cover every
// non-adjacent pair. Re-running on the output reproduces it.
PagResult fci_orient(const MixedGraph& skeleton, const SepsetMap& sepsets);

// Shortest path <d, ..., x, c, y> (breadth-first, neighbours in index
// order) such that the path has at least three edges, c is adjacent to
// y, y is not adjacent to d, and every node strictly between d and c is
// a collider on the path and a parent of y. Returns nothing when no such
// path exists (including when c ~ y is absent).
std::optional<std::vector<NodeId>> find_discriminating_path(
    const MixedGraph& pag, NodeId d, NodeId y, NodeId c);

// All Y-structure quadruples of the graph, canonical (c1 < c2), sorted.
std::vector<YStructure> detect_y_structures(const MixedGraph& pag);

// Adjacency search (identical to the one used by the pattern search),
// then circle-mark orientation, then Y-structure annotation. Background
// knowledge only shapes the skeleton; orientation marks carry latent-
// variable semantics that tier hints do not translate to.
PagResult run_fci(std::vector<std::string> names, const CiTestFn& test,
                  const BackgroundKnowledge& bk = {});
PagResult run_fci(const Dataset& d, const TestConfig& cfg,
                  const BackgroundKnowledge& bk = {});

}  // namespace causalfair
