#pragma once

#include <utility>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"

namespace causalfair {

// Causal ordering produced by the residual-independence recursion. The
// order lists variable indices from most exogenous to most downstream;
// t_scores keeps, per step, the (candidate, T) pairs that were compared,
// so the argmin choice can be audited after the fact.
struct CausalOrder {
  std::vector<int> order;
  std::vector<std::vector<std::pair<int, double>>> t_scores;
};

// Weighted adjacency estimate. b[j][i] is the coefficient of variable i
// in the structural equation of variable j; entries with magnitude below
// the threshold are zeroed unless a prior constraint pins them.
struct WeightedDag {
  std::vector<std::vector<double>> b;
  double threshold = 0.0;
};

struct LingamResult {
  CausalOrder order;
  WeightedDag weights;
  MixedGraph graph;  // fully directed, edges where b is nonzero
};

// Residual-independence score of variable j against the set u (which
// must contain j): the summed mutual information between column j and
// the residual of every other member regressed on j. Small values mark
// plausible exogenous variables.
double t_statistic(const Dataset& d, int j, const std::vector<int>& u);

// Order all variables by repeatedly extracting the T-minimizing
// candidate and replacing the remaining working columns with their
// residuals against it. Prior knowledge excludes a candidate from the
// argmin while a variable it may not precede is still unordered.
CausalOrder causal_order(const Dataset& d,
                         const BackgroundKnowledge& prior = {});

// Regress each variable on all its order-predecessors using the original
// columns and zero the coefficients below the threshold. Entries the
// prior requires stay as estimated; entries it forbids are zeroed.
WeightedDag estimate_adjacency(const Dataset& d, const CausalOrder& order,
                               double threshold,
                               const BackgroundKnowledge& prior = {});

// Full pipeline: ordering, adjacency estimation, pruning, and conversion
// of the nonzero pattern to a directed graph.
LingamResult run_direct_lingam(const Dataset& d,
                               const BackgroundKnowledge& prior = {},
                               double threshold = 0.05);

}  // namespace causalfair
