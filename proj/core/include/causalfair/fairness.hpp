#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"

namespace causalfair {

enum class Measure { TV, TE, AteIpw, DE, ID, ED };

const char* to_string(Measure m);

// Structural roles of the other variables relative to a protected
// attribute A and an outcome Y in one DAG. The three sets are disjoint.
// Mediators sit on directed A -> ... -> Y paths; confounders reach both
// A and Y by directed paths that avoid the other endpoint; colliders are
// common effects (two or more parents, downstream of both A and Y) that
// play neither other role, listed so nobody adjusts on them.
struct RoleAssignment {
  std::vector<NodeId> confounders;
  std::vector<NodeId> mediators;
  std::vector<NodeId> colliders;
  std::map<NodeId, std::string> mediator_kind;  // "redlining" / "explaining"
};

// One measure evaluated against one DAG. When the effect is not
// identifiable (a recanting witness), `identifiable` is false, the value
// is meaningless and the flags say why. `dag` is the provenance id
// filled in by measure_range.
struct MeasureValue {
  Measure measure = Measure::TV;
  double value = 0.0;
  std::string dag;
  bool identifiable = true;
  std::vector<std::string> flags;
};

struct MeasureRange {
  double min_value = 0.0;
  double max_value = 0.0;
  std::string min_dag;
  std::string max_dag;
};

struct MeasureConfig {
  int a1 = 1;      // privileged group code
  int a0 = 0;      // protected group code
  int y_plus = 1;  // desirable outcome code
  std::size_t extension_cap = 4096;
};

// Measures per enumerated DAG plus per-measure ranges over the
// identifiable values. Verdicts read the sign of the range: "against"
// when every value is positive, "in favor" when every value is
// negative, "fair" at exactly zero, "ambiguous" when the range spans
// zero, "unidentified" when no DAG yields a value.
struct FairnessReport {
  std::vector<MeasureValue> values;
  std::map<Measure, MeasureRange> ranges;
  std::map<Measure, std::string> verdicts;
  std::vector<std::string> flags;
  std::size_t n_dags = 0;
};

// Classify every non-endpoint variable of a DAG relative to (a, y).
// `schema` (empty, or one entry per node) marks mediators whose
// mediator_kind is "explaining"; every other mediator counts as
// redlining.
RoleAssignment classify_roles(const MixedGraph& dag, NodeId a, NodeId y,
                              const std::vector<VariableMeta>& schema = {});

// P(Y = y_plus | A = a1) - P(Y = y_plus | A = a0), plug-in.
double total_variation(const Dataset& d, int a_var, int y_var, int a1,
                       int a0, int y_plus);

// Backdoor-adjusted effect: the outcome contrast within each joint
// confounder stratum, averaged over the stratum distribution. Strata
// missing either group are skipped and the remaining mass renormalized,
// with a flag. With no confounders this equals total variation exactly.
MeasureValue total_effect(const Dataset& d, const MixedGraph& dag, int a_var,
                          int y_var, int a1, int a0, int y_plus);

// Inverse-propensity-weighted contrast over the rows with A in
// {a0, a1}. The propensity of a1 is a logistic fit on the standardized
// covariate columns (categorical covariates enter as their codes),
// clipped to [0.01, 0.99]. With no informative covariates the propensity
// is the exact group rate, which makes the estimate equal total
// variation. Values outside [-1, 1] are clamped and flagged.
MeasureValue ate_ipw(const Dataset& d, int a_var, int y_var,
                     const std::vector<int>& covariates, int a1, int a0,
                     int y_plus);

// Effect along the direct edge A -> Y only: downstream variables see the
// baseline a0 while the direct edge sees a1. Exactly zero when the DAG
// has no direct edge. `mediators` documents the blocked channels; the
// computation runs off the graph structure.
MeasureValue natural_direct_effect(const Dataset& d, const MixedGraph& dag,
                                   int a_var, int y_var,
                                   const std::vector<int>& mediators, int a1,
                                   int a0, int y_plus);

// Effect along a chosen set of directed A -> Y paths: each edge out of A
// is set to a1 when it starts an active path and a0 otherwise, the
// intervened distribution is evaluated by plugging empirical conditional
// tables into the graph factorization, and the all-a0 baseline is
// subtracted. When an edge out of A starts both an active and an
// inactive path no edge assignment represents the split (a recanting
// witness): the result is flagged non-identifiable.
MeasureValue path_specific_effect(
    const Dataset& d, const MixedGraph& dag, int a_var, int y_var,
    const std::vector<std::vector<NodeId>>& active_paths, int a1, int a0,
    int y_plus);

// Split the indirect effect by the mediator partition: the explained
// part flows through paths touching at least one explaining mediator,
// the indirect (redlining) part through the remaining indirect paths.
// The direct edge belongs to neither.
std::pair<MeasureValue, MeasureValue> indirect_and_explained(
    const Dataset& d, const MixedGraph& dag, int a_var, int y_var,
    const RoleAssignment& roles, int a1, int a0, int y_plus);

// Evaluate every measure against every consistent extension of a
// pattern (circle marks are read as undirected; bidirected edges mean
// latent confounding and abort with EmptyClass) and aggregate ranges.
// Inverse-propensity covariates are each DAG's confounders.
FairnessReport measure_range(const MixedGraph& class_graph, const Dataset& d,
                             int a_var, int y_var,
                             const std::vector<VariableMeta>& schema,
                             const MeasureConfig& cfg = {});

}  // namespace causalfair
