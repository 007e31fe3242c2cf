#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causalfair/graph.hpp"

namespace causalfair {

// Unshielded triple (x, c, y): x and y both adjacent to c, x and y not
// adjacent to each other. Canonical form has x < y.
struct Triple {
  NodeId x = -1;
  NodeId c = -1;
  NodeId y = -1;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

std::vector<Triple> unshielded_triples(const MixedGraph& g);

// Unshielded triples whose edges are both fully directed into the centre:
// x -> c <- y with x, y non-adjacent.
std::vector<Triple> v_structures(const MixedGraph& g);

// Nodes with a directed path to v (excluding v), sorted.
std::vector<NodeId> ancestors(const MixedGraph& g, NodeId v);
// Nodes reachable from v by a directed path (excluding v), sorted.
std::vector<NodeId> descendants(const MixedGraph& g, NodeId v);

// Topological order of a DAG; ties resolved lowest index first.
std::vector<NodeId> topological_order(const MixedGraph& dag);

// True when every path between x and y is blocked by z in the DAG.
// Requires x != y and z to exclude both endpoints.
bool d_separated(const MixedGraph& dag, NodeId x, NodeId y,
                 const std::vector<NodeId>& z);

// Orients every undirected edge of a pattern graph into a DAG that keeps
// all directed edges and creates no cycle and no new v-structure
// (Dor-Tarsi sink elimination). Ties between admissible sinks resolve so
// that an otherwise unconstrained undirected edge orients away from the
// lower-indexed node. Throws NotExtendableError when no extension exists.
MixedGraph extend_pdag(const MixedGraph& pdag);

// The completed pattern of a DAG's Markov equivalence class: v-structure
// arrows kept, everything else undirected, then closed under the three
// orientation rules.
MixedGraph complete_to_cpdag(const MixedGraph& dag);

// All DAGs sharing the pattern's skeleton that keep its directed edges,
// orient its undirected ones, and introduce no cycle and no new
// v-structure. Deterministic order. Throws LimitExceededError when the
// class is larger than `limit`.
std::vector<MixedGraph> enumerate_consistent_extensions(
    const MixedGraph& pdag, std::size_t limit = 4096);

// Orient u - v as u -> v under the conflict policy used by the constraint
// searches: an opposite demand on an already-directed edge reverts it to
// undirected, freezes it against further orientation and records a
// warning. Returns true when the edge ends up directed u -> v.
bool demand_orientation(MixedGraph& g, NodeId from, NodeId to,
                        std::set<std::pair<NodeId, NodeId>>& frozen,
                        std::vector<std::string>& warnings);

// Close a pattern graph under the three orientation rules:
//   1. a -> b - c with a, c non-adjacent        =>  b -> c
//   2. a -> b -> c with a - c                   =>  a -> c
//   3. a - b, a - c, a - d, c -> b, d -> b,
//      c and d non-adjacent                     =>  a -> b
// Frozen edges are never touched; conflicts freeze per demand_orientation.
void apply_orientation_rules(MixedGraph& g,
                             std::set<std::pair<NodeId, NodeId>>& frozen,
                             std::vector<std::string>& warnings);

}  // namespace causalfair
