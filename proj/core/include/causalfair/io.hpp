#pragma once

#include <string>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"
#include "causalfair/sbcn.hpp"

namespace causalfair {

// One variable as declared in a schema file.
struct SchemaVariable {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::optional<int> tier;
  std::string role = "covariate";      // "sensitive", "outcome", "covariate"
  std::string mediator_kind = "none";  // "none", "redlining", "explaining"
};

// Parsed schema: the column declarations plus the labels the fairness
// measures need. `privileged` and `protected_group` are levels of the
// sensitive variable; `positive_outcome` is a level of the outcome.
struct Schema {
  std::vector<SchemaVariable> variables;
  std::string positive_outcome;
  std::string privileged;
  std::string protected_group;

  int sensitive_index() const;
  int outcome_index() const;
};

// Parse a schema from JSON text. Expected shape:
//   {"variables": [{"name": ..., "kind": "continuous"|"categorical",
//                   "tier": int?, "role": ..., "mediator_kind": ...}, ...],
//    "positive_outcome": ..., "privileged": ..., "protected": ...}
// Enforces non-empty unique names, known vocabulary for kind, role and
// mediator_kind, exactly one sensitive and one outcome variable,
// distinct group labels, and tiers that cover either every variable or
// none. Violations throw SchemaMismatch.
Schema parse_schema(const std::string& json_text);
Schema load_schema(const std::string& path);

// A dataset together with the level labels behind its categorical
// codes. Codes index into `levels[var]` in first-appearance order;
// continuous columns keep an empty label list.
struct TypedTable {
  Dataset data;
  std::vector<std::vector<std::string>> levels;

  // Code of `label` in column `var`, or -1 when the label never occurs.
  int code_of(int var, const std::string& label) const;
};

// Read a CSV file against a schema. The header must list exactly the
// schema's names in order; every cell must parse under the declared
// kind. Categorical levels are assigned codes in order of first
// appearance. Tier, role and mediator_kind are attached to the dataset
// as variable metadata. Errors: SchemaMismatch for header or kind
// disagreements, MissingValue(row, col) for empty or unparseable cells
// (1-based data row, 1-based column), EmptyDataset for a file with no
// data rows.
TypedTable load_dataset(const std::string& csv_path, const Schema& schema);
TypedTable load_dataset(const std::string& csv_path,
                        const std::string& schema_path);

// Equal-frequency binning of every continuous column into at most
// `bins` categories (labels "b0", "b1", ...). Duplicate cut points
// collapse, so columns with heavy ties may end up with fewer bins.
// Categorical columns pass through untouched, as does all metadata.
// A constant continuous column throws ZeroVariance.
TypedTable discretize(const TypedTable& table, int bins);

// Canonical JSON form of a graph: {"nodes": [names...], "edges":
// [{"u": name, "v": name, "mark_u": ..., "mark_v": ...}, ...]} with
// marks "tail", "arrow" or "circle". Output is pretty-printed with
// sorted keys, so equal graphs serialize to identical bytes.
std::string graph_to_json(const MixedGraph& g);

// Inverse of graph_to_json. Also accepts an enclosing object that
// carries the graph under a "graph" key, so pipeline artifacts can be
// fed back directly. Malformed input throws SchemaMismatch.
MixedGraph graph_from_json(const std::string& text);

// Canonical JSON form of a learned Bernoulli network: nodes with
// variable/value, weighted edges, and the accepted-move score
// trajectory. Same determinism guarantee as graph_to_json.
std::string sbcn_to_json(const SbcnGraph& g);
SbcnGraph sbcn_from_json(const std::string& text);

// Graphviz rendering. Nodes are emitted in index order; edges in
// canonical order. Endpoint marks map to arrow shapes: Arrow to
// "normal", Tail to "none", Circle to "odot". The JSON twin is the
// parse-back format; DOT is for rendering.
std::string graph_to_dot(const MixedGraph& g);

// Bernoulli-network rendering: one node per (variable, value) pair,
// edge labels carry the probability-raising weight to three decimals.
std::string sbcn_to_dot(const SbcnGraph& g);

// Write `content` to a sibling temp file and rename it over `path`, so
// readers never observe a half-written file. I/O failures throw
// InvalidArgument.
void write_file_atomic(const std::string& path, const std::string& content);

void export_dot(const MixedGraph& g, const std::string& path);
void export_dot(const SbcnGraph& g, const std::string& path);

}  // namespace causalfair
