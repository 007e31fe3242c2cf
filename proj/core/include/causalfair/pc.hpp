#pragma once

#include <string>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"
#include "causalfair/stats.hpp"

namespace causalfair {

struct SkeletonResult {
  MixedGraph graph;
  SepsetMap sepsets;
  long long tests_performed = 0;
  // Largest conditioning-set size any executed test used; -1 if none ran.
  int max_depth_reached = -1;
};

struct PcResult {
  MixedGraph cpdag;
  SepsetMap sepsets;
  long long tests_performed = 0;
  int max_depth_reached = -1;
  // Orientation conflicts are reported here, never thrown.
  std::vector<std::string> warnings;
};

// Adjacency search. Starts from the complete undirected graph and, for
// growing depth, tests each ordered adjacent pair (X, Y) against every
// subset Z of adj(X)\{Y} of that size, removing the edge and recording Z
// on the first independence. The graph updates immediately, so later
// tests in the same sweep see earlier removals. Subsets are enumerated
// in lexicographic node order, which pins down the (order-dependent)
// output. Forbidden-adjacency pairs are removed up front with empty
// sepsets; required pairs are never tested. `max_depth` caps the subset
// size (-1 = unbounded). Test errors propagate annotated with the pair,
// depth and conditioning set.
SkeletonResult pc_skeleton(std::vector<std::string> names,
                           const CiTestFn& test,
                           const BackgroundKnowledge& bk = {},
                           int max_depth = -1);
SkeletonResult pc_skeleton(const Dataset& d, const TestConfig& cfg,
                           const BackgroundKnowledge& bk = {},
                           int max_depth = -1);

// Orientation pass: unshielded triples whose centre is absent from the
// endpoints' separating set become colliders; background knowledge then
// orients cross-tier and required edges; finally the three orientation
// rules run to a fixed point. Contradictory demands leave the edge
// undirected, freeze it and add a warning. `sepsets` must cover every
// non-adjacent pair. Feeding the output back in reproduces it.
MixedGraph pc_orient(const MixedGraph& skeleton, const SepsetMap& sepsets,
                     const BackgroundKnowledge& bk = {},
                     std::vector<std::string>* warnings = nullptr);

// Skeleton followed by orientation. The test-function entry point keeps
// the search usable with any independence source, e.g. an exact
// d-separation test for recovery studies.
PcResult run_pc(std::vector<std::string> names, const CiTestFn& test,
                const BackgroundKnowledge& bk = {});
PcResult run_pc(const Dataset& d, const TestConfig& cfg,
                const BackgroundKnowledge& bk = {});

}  // namespace causalfair
