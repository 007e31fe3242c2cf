#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"

namespace causalfair {

// One Bernoulli vertex: the indicator of a single (variable, value)
// pair. Distinct values of the same variable are distinct vertices.
struct BernoulliNode {
  std::string variable;
  int var_index = -1;
  int value = 0;

  friend bool operator==(const BernoulliNode&, const BernoulliNode&) = default;
};

// Directed edge between Bernoulli vertices with the probability-raising
// weight W(a, y) = P(y | a) - P(y | not a), always in (0, 1].
struct SbcnEdge {
  int from = -1;
  int to = -1;
  double weight = 0.0;

  friend bool operator==(const SbcnEdge&, const SbcnEdge&) = default;
};

// Output of the temporal-priority + probability-raising filter: the
// Bernoulli vertex set, the admissible weighted edges, and notes about
// vertices whose complement never occurs (their conditionals are
// undefined, so their outgoing edges are skipped).
struct SbcnCandidates {
  std::vector<BernoulliNode> nodes;
  std::vector<SbcnEdge> edges;
  std::vector<std::string> flags;
};

// Learned network plus the BIC value after every accepted hill-climb
// move (trajectory.front() is the empty-graph score).
struct SbcnGraph {
  std::vector<BernoulliNode> nodes;
  std::vector<SbcnEdge> edges;
  std::vector<double> trajectory;
};

struct WalkConfig {
  long long n_walks = 1;
  int max_restarts = 100;
  unsigned long long rng_seed = 0;
  int delta_plus = -1;
  int delta_minus = -1;
};

// Walk outcome bookkeeping. The integer counts partition n_walks
// exactly; the fractions are counts over n_walks. ds_minus is the
// discrimination score proper.
struct WalkScore {
  double ds_minus = 0.0;
  double ds_plus = 0.0;
  double unresolved = 0.0;
  long long walks_minus = 0;
  long long walks_plus = 0;
  long long walks_unresolved = 0;
  bool unreachable = false;
  std::vector<std::string> flags;
};

struct CollapseResult {
  MixedGraph graph;
  std::vector<std::string> flags;
};

// Index of the vertex for (variable, value), or -1 when absent.
int find_node(const std::vector<BernoulliNode>& nodes,
              const std::string& variable, int value);

// Build the Bernoulli vertex set from every (variable, value) pair that
// occurs in the data and admit the edge a -> y exactly when a's tier is
// no later than y's and P(y | a) > P(y | not a). Vertices of the same
// variable are never connected. `tiers` holds one temporal rank per
// dataset variable.
SbcnCandidates suppes_filter(const Dataset& d, const std::vector<int>& tiers);

// BIC of a network over the Bernoulli vertices: multinomial
// log-likelihood of every vertex given its parents, minus
// (ln n / 2) per edge.
double sbcn_bic(const Dataset& d, const std::vector<BernoulliNode>& nodes,
                const std::vector<SbcnEdge>& edges);

// Hill climb over subsets of the candidate edges, starting empty:
// propose a uniformly random add-or-remove toggle, accept on strict BIC
// improvement, keep the graph acyclic throughout. After 200 consecutive
// rejections every candidate toggle is swept once; if none improves the
// state is a certified local maximum and the search stops. Deterministic
// for a fixed seed.
SbcnGraph sbcn_hill_climb(const Dataset& d, const SbcnCandidates& candidates,
                          int max_iters, unsigned long long rng_seed);

// Outgoing transition distribution of one vertex: weights normalized to
// probabilities. Empty for vertices with no outgoing edges.
std::vector<std::pair<int, double>> transition_probabilities(
    const SbcnGraph& g, int node);

// Simulate cfg.n_walks weighted random walks from v and report the
// fraction absorbed at delta_minus, at delta_plus, and neither. A walk
// restarts from v on hitting a vertex with no outgoing edges; exceeding
// cfg.max_restarts makes it unresolved. When neither decision vertex is
// reachable from v no walks run: the score is zero and a flag says why.
WalkScore random_walk_score(const SbcnGraph& g, int v, const WalkConfig& cfg);

// Collapse value-level vertices to one node per dataset variable. A
// variable edge appears when any value-level edge connects the pair;
// opposing value-level directions resolve to the side with the larger
// total weight (ties go to the lower-indexed variable) and are flagged.
CollapseResult sbcn_as_causal_graph(const SbcnGraph& g,
                                    const std::vector<std::string>& variables);

}  // namespace causalfair
