#include "causalfair/ges.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "causalfair/errors.hpp"
#include "causalfair/graph_algorithms.hpp"
#include "causalfair/stats.hpp"

namespace causalfair {

const char* to_string(GesPhase p) {
  return p == GesPhase::Forward ? "forward" : "backward";
}

namespace {

// Canonical fingerprint of a pattern's edge set, used to collapse
// transitions that land in the same completed pattern.
std::string pattern_key(const MixedGraph& g) {
  std::string key;
  for (const Edge& e : g.edges()) {
    key += std::to_string(e.u) + ':' + std::to_string(e.v) + ':' +
           std::to_string(static_cast<int>(e.mark_u)) +
           std::to_string(static_cast<int>(e.mark_v)) + ';';
  }
  return key;
}

void check_state(const GesState& state, const Dataset& d) {
  if (state.cpdag.n() != d.num_vars())
    throw InvalidArgumentError("state has " + std::to_string(state.cpdag.n()) +
                               " nodes but the dataset has " +
                               std::to_string(d.num_vars()) + " variables");
}

}  // namespace

std::vector<GesCandidate> forward_transitions(const GesState& state,
                                              const Dataset& d,
                                              const BackgroundKnowledge& bk) {
  check_state(state, d);
  const MixedGraph& g = state.cpdag;
  const MixedGraph ext = extend_pdag(g);

  std::vector<GesCandidate> out;
  std::set<std::string> seen;
  for (NodeId x = 0; x < g.n(); ++x) {
    for (NodeId y = 0; y < g.n(); ++y) {
      if (x == y || g.has_edge(x, y)) continue;
      if (bk.forbids_orientation(x, y)) continue;
      // Adding x -> y keeps the extension acyclic exactly when y has no
      // directed path back to x.
      const std::vector<NodeId> below = descendants(ext, y);
      if (std::binary_search(below.begin(), below.end(), x)) continue;

      MixedGraph dag = ext;
      dag.add_directed(x, y);
      MixedGraph cand = complete_to_cpdag(dag);
      if (!seen.insert(pattern_key(cand)).second) continue;

      std::vector<NodeId> parents = ext.parents(y);
      const double before = local_bic(d, y, parents);
      parents.push_back(x);
      const double after = local_bic(d, y, parents);
      out.push_back({std::move(cand), after - before, x, y});
    }
  }
  return out;
}

std::vector<GesCandidate> backward_transitions(const GesState& state,
                                               const Dataset& d) {
  check_state(state, d);
  const MixedGraph ext = extend_pdag(state.cpdag);

  std::vector<GesCandidate> out;
  std::set<std::string> seen;
  for (NodeId x = 0; x < ext.n(); ++x) {
    for (NodeId y = 0; y < ext.n(); ++y) {
      if (!ext.is_directed(x, y)) continue;

      MixedGraph dag = ext;
      dag.remove_edge(x, y);
      MixedGraph cand = complete_to_cpdag(dag);
      if (!seen.insert(pattern_key(cand)).second) continue;

      std::vector<NodeId> parents = ext.parents(y);
      const double before = local_bic(d, y, parents);
      parents.erase(std::find(parents.begin(), parents.end(), x));
      const double after = local_bic(d, y, parents);
      out.push_back({std::move(cand), after - before, x, y});
    }
  }
  return out;
}

namespace {

// Index of the best strictly-improving candidate, or -1. Written so the
// outcome is the same whatever order candidates were scored in: highest
// delta wins, exact ties fall to the smallest (from, to) pair.
int pick_best(const std::vector<GesCandidate>& cands) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
    if (cands[i].delta <= 0.0) continue;
    if (best < 0 || cands[i].delta > cands[best].delta ||
        (cands[i].delta == cands[best].delta &&
         std::make_pair(cands[i].from, cands[i].to) <
             std::make_pair(cands[best].from, cands[best].to)))
      best = i;
  }
  return best;
}

}  // namespace

GesState run_ges(const Dataset& d, const BackgroundKnowledge& bk) {
  if (!d.all_continuous() && !d.all_categorical())
    throw MixedFamilyError(
        "greedy equivalence search needs an all-continuous or "
        "all-categorical dataset");
  bk.validate(d.num_vars());

  GesState state;
  state.cpdag = MixedGraph(d.names());
  state.score = 0.0;
  for (int v = 0; v < d.num_vars(); ++v) state.score += local_bic(d, v, {});

  state.phase = GesPhase::Forward;
  for (;;) {
    const auto cands = forward_transitions(state, d, bk);
    const int best = pick_best(cands);
    if (best < 0) break;
    state.cpdag = cands[best].cpdag;
    state.score += cands[best].delta;
    state.steps.push_back(
        {cands[best].from, cands[best].to, cands[best].delta, state.phase});
  }

  state.phase = GesPhase::Backward;
  for (;;) {
    const auto cands = backward_transitions(state, d);
    const int best = pick_best(cands);
    if (best < 0) break;
    state.cpdag = cands[best].cpdag;
    state.score += cands[best].delta;
    state.steps.push_back(
        {cands[best].from, cands[best].to, cands[best].delta, state.phase});
  }
  return state;
}

}  // namespace causalfair
