#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causalfair/errors.hpp"

namespace causalfair {

using NodeId = int;

// Endpoint mark on one end of an edge. A directed edge u -> v carries
// Tail at u and Arrow at v; an undirected edge carries Tail at both ends;
// Circle is the "undecided" endpoint used by partial ancestral graphs.
enum class EdgeMark : std::uint8_t { Tail = 0, Arrow = 1, Circle = 2 };

const char* to_string(EdgeMark m);

// One edge in canonical form (u < v) with the mark at each end.
struct Edge {
  NodeId u = -1;
  NodeId v = -1;
  EdgeMark mark_u = EdgeMark::Tail;
  EdgeMark mark_v = EdgeMark::Tail;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Mixed graph over a fixed, ordered node set. The node order is the
// canonical order used for every deterministic tie-break in the library.
class MixedGraph {
 public:
  MixedGraph() = default;
  explicit MixedGraph(std::vector<std::string> names);

  static MixedGraph complete_undirected(std::vector<std::string> names);

  int n() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(NodeId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  NodeId index_of(const std::string& name) const;

  bool has_edge(NodeId u, NodeId v) const;
  // Mark at the v end of the edge between u and v. Requires the edge.
  EdgeMark end_mark(NodeId u, NodeId v) const;
  void set_end_mark(NodeId u, NodeId v, EdgeMark m);

  void add_edge(NodeId u, NodeId v, EdgeMark mark_u, EdgeMark mark_v);
  void add_directed(NodeId from, NodeId to);
  void add_undirected(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);

  bool is_directed(NodeId from, NodeId to) const;   // from -> to
  bool is_undirected(NodeId u, NodeId v) const;     // Tail - Tail
  bool is_bidirected(NodeId u, NodeId v) const;     // Arrow - Arrow

  // Sorted by node index.
  std::vector<NodeId> adjacent(NodeId v) const;
  std::vector<NodeId> parents(NodeId v) const;
  std::vector<NodeId> children(NodeId v) const;
  std::vector<NodeId> undirected_neighbors(NodeId v) const;

  int degree(NodeId v) const;
  std::size_t edge_count() const;
  // Canonical edge list, sorted by (u, v) with u < v.
  std::vector<Edge> edges() const;

  // True when every edge is Tail-Tail or Tail-Arrow (no circles, no
  // bidirected edges), i.e. the graph is a pattern of directed and
  // undirected edges.
  bool is_pattern() const;
  // True when every edge is directed and the graph has no directed cycle.
  bool is_dag() const;
  // True when the directed part (Tail->Arrow edges) has no cycle.
  bool directed_part_acyclic() const;
  bool has_circles() const;

  friend bool operator==(const MixedGraph& a, const MixedGraph& b);

 private:
  void check_node(NodeId v) const;
  std::size_t slot(NodeId u, NodeId v) const {
    return static_cast<std::size_t>(u) * names_.size() +
           static_cast<std::size_t>(v);
  }

  std::vector<std::string> names_;
  // at_[slot(u, v)] holds the mark at the v end of edge u~v, -1 if absent.
  std::vector<std::int8_t> at_;
};

// Separating sets recorded for removed adjacencies, keyed by unordered pair.
class SepsetMap {
 public:
  void set(NodeId x, NodeId y, std::vector<NodeId> z);
  bool has(NodeId x, NodeId y) const;
  // Requires an entry; conditioning set is sorted.
  const std::vector<NodeId>& get(NodeId x, NodeId y) const;
  bool contains(NodeId x, NodeId y, NodeId member) const;
  std::size_t size() const noexcept { return map_.size(); }

 private:
  static std::pair<NodeId, NodeId> key(NodeId x, NodeId y);
  std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>> map_;
};

// Prior structural constraints: temporal tiers plus explicit per-edge
// requirements and prohibitions. All pairs are ordered (cause, effect).
class BackgroundKnowledge {
 public:
  void set_tier(NodeId v, int tier);
  std::optional<int> tier(NodeId v) const;

  void forbid(NodeId from, NodeId to);
  void require(NodeId from, NodeId to);

  bool is_forbidden(NodeId from, NodeId to) const;
  bool is_required(NodeId from, NodeId to) const;

  // Orientation from -> to contradicts a tier (strictly later cause) or an
  // explicit prohibition.
  bool forbids_orientation(NodeId from, NodeId to) const;
  // Both directions prohibited: the adjacency itself cannot exist.
  bool forbids_adjacency(NodeId u, NodeId v) const;
  bool requires_adjacency(NodeId u, NodeId v) const;

  bool empty() const;

  // Rejects required edges that contradict tiers or prohibitions and
  // required sets that form a directed cycle.
  void validate(int n_nodes) const;

  const std::set<std::pair<NodeId, NodeId>>& forbidden() const {
    return forbidden_;
  }
  const std::set<std::pair<NodeId, NodeId>>& required() const {
    return required_;
  }

 private:
  std::map<NodeId, int> tiers_;
  std::set<std::pair<NodeId, NodeId>> forbidden_;
  std::set<std::pair<NodeId, NodeId>> required_;
};

}  // namespace causalfair
