#pragma once

#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"

namespace causalfair {

enum class GesPhase { Forward, Backward };

const char* to_string(GesPhase p);

// One accepted transition: the ordered pair whose single-edge change
// produced the new state and the score improvement it brought.
struct GesStep {
  NodeId from = -1;
  NodeId to = -1;
  double delta = 0.0;
  GesPhase phase = GesPhase::Forward;
};

// Search state: a completed pattern, its total BIC score (the score of
// any consistent DAG extension; all of them agree), the phase the search
// is in, and the log of accepted steps.
struct GesState {
  MixedGraph cpdag;
  double score = 0.0;
  GesPhase phase = GesPhase::Forward;
  std::vector<GesStep> steps;
};

// One scored neighbour of a state: the completed pattern reached by a
// single edge change in a DAG extension, the score difference, and the
// ordered pair that produced it.
struct GesCandidate {
  MixedGraph cpdag;
  double delta = 0.0;
  NodeId from = -1;
  NodeId to = -1;
};

// All single-edge additions available from `state`: for every ordered
// non-adjacent pair (x, y), add x -> y to a DAG extension of the current
// pattern, keep it when acyclic, and complete the result. The score
// difference is the change in the local BIC term at y, which equals the
// total score difference because no other term moves. Transitions that
// land in the same completed pattern are reported once (first producer
// in (x, y) order wins). Pairs whose orientation the background
// knowledge forbids are skipped.
std::vector<GesCandidate> forward_transitions(const GesState& state,
                                              const Dataset& d,
                                              const BackgroundKnowledge& bk = {});

// All single-edge deletions: drop each directed edge of a DAG extension
// in turn and complete the remainder. Mirrors forward_transitions.
std::vector<GesCandidate> backward_transitions(const GesState& state,
                                               const Dataset& d);

// Greedy equivalence search: start from the disconnected pattern, take
// the best strictly-improving addition until none remains, then the best
// strictly-improving deletion until none remains. Ties resolve to the
// earliest candidate in (from, to) order. The dataset must be entirely
// continuous or entirely categorical.
GesState run_ges(const Dataset& d, const BackgroundKnowledge& bk = {});

}  // namespace causalfair
