#include "causalfair/graph.hpp"

#include <algorithm>
#include <queue>

namespace causalfair {

const char* to_string(EdgeMark m) {
  switch (m) {
    case EdgeMark::Tail: return "tail";
    case EdgeMark::Arrow: return "arrow";
    case EdgeMark::Circle: return "circle";
  }
  return "?";
}

MixedGraph::MixedGraph(std::vector<std::string> names)
    : names_(std::move(names)), at_(names_.size() * names_.size(), -1) {
  std::set<std::string> seen;
  for (const auto& nm : names_) {
    if (!seen.insert(nm).second) {
      throw InvalidArgumentError("duplicate node name: " + nm);
    }
  }
}

MixedGraph MixedGraph::complete_undirected(std::vector<std::string> names) {
  MixedGraph g(std::move(names));
  for (NodeId u = 0; u < g.n(); ++u) {
    for (NodeId v = u + 1; v < g.n(); ++v) g.add_undirected(u, v);
  }
  return g;
}

NodeId MixedGraph::index_of(const std::string& name) const {
  for (NodeId v = 0; v < n(); ++v) {
    if (names_[v] == name) return v;
  }
  throw InvalidArgumentError("unknown node name: " + name);
}

void MixedGraph::check_node(NodeId v) const {
  if (v < 0 || v >= n()) {
    throw InvalidArgumentError("node index out of range: " +
                               std::to_string(v));
  }
}

bool MixedGraph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  return u != v && at_[slot(u, v)] >= 0;
}

EdgeMark MixedGraph::end_mark(NodeId u, NodeId v) const {
  if (!has_edge(u, v)) {
    throw InvalidArgumentError("no edge between " + name(u) + " and " +
                               name(v));
  }
  return static_cast<EdgeMark>(at_[slot(u, v)]);
}

void MixedGraph::set_end_mark(NodeId u, NodeId v, EdgeMark m) {
  if (!has_edge(u, v)) {
    throw InvalidArgumentError("no edge between " + name(u) + " and " +
                               name(v));
  }
  at_[slot(u, v)] = static_cast<std::int8_t>(m);
}

void MixedGraph::add_edge(NodeId u, NodeId v, EdgeMark mark_u,
                          EdgeMark mark_v) {
  check_node(u);
  check_node(v);
  if (u == v) throw InvalidArgumentError("self loop on " + name(u));
  at_[slot(u, v)] = static_cast<std::int8_t>(mark_v);
  at_[slot(v, u)] = static_cast<std::int8_t>(mark_u);
}

void MixedGraph::add_directed(NodeId from, NodeId to) {
  add_edge(from, to, EdgeMark::Tail, EdgeMark::Arrow);
}

void MixedGraph::add_undirected(NodeId u, NodeId v) {
  add_edge(u, v, EdgeMark::Tail, EdgeMark::Tail);
}

void MixedGraph::remove_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  at_[slot(u, v)] = -1;
  at_[slot(v, u)] = -1;
}

bool MixedGraph::is_directed(NodeId from, NodeId to) const {
  return has_edge(from, to) && end_mark(to, from) == EdgeMark::Tail &&
         end_mark(from, to) == EdgeMark::Arrow;
}

bool MixedGraph::is_undirected(NodeId u, NodeId v) const {
  return has_edge(u, v) && end_mark(u, v) == EdgeMark::Tail &&
         end_mark(v, u) == EdgeMark::Tail;
}

bool MixedGraph::is_bidirected(NodeId u, NodeId v) const {
  return has_edge(u, v) && end_mark(u, v) == EdgeMark::Arrow &&
         end_mark(v, u) == EdgeMark::Arrow;
}

std::vector<NodeId> MixedGraph::adjacent(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  for (NodeId u = 0; u < n(); ++u) {
    if (u != v && at_[slot(v, u)] >= 0) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> MixedGraph::parents(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  for (NodeId u = 0; u < n(); ++u) {
    if (u != v && at_[slot(v, u)] >= 0 && is_directed(u, v)) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> MixedGraph::children(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  for (NodeId u = 0; u < n(); ++u) {
    if (u != v && at_[slot(v, u)] >= 0 && is_directed(v, u)) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> MixedGraph::undirected_neighbors(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  for (NodeId u = 0; u < n(); ++u) {
    if (u != v && at_[slot(v, u)] >= 0 && is_undirected(v, u))
      out.push_back(u);
  }
  return out;
}

int MixedGraph::degree(NodeId v) const {
  return static_cast<int>(adjacent(v).size());
}

std::size_t MixedGraph::edge_count() const {
  std::size_t c = 0;
  for (NodeId u = 0; u < n(); ++u) {
    for (NodeId v = u + 1; v < n(); ++v) {
      if (at_[slot(u, v)] >= 0) ++c;
    }
  }
  return c;
}

std::vector<Edge> MixedGraph::edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < n(); ++u) {
    for (NodeId v = u + 1; v < n(); ++v) {
      if (at_[slot(u, v)] >= 0) {
        out.push_back(Edge{u, v, end_mark(v, u), end_mark(u, v)});
      }
    }
  }
  return out;
}

bool MixedGraph::is_pattern() const {
  for (const Edge& e : edges()) {
    bool directed = (e.mark_u == EdgeMark::Tail && e.mark_v == EdgeMark::Arrow) ||
                    (e.mark_u == EdgeMark::Arrow && e.mark_v == EdgeMark::Tail);
    bool undirected =
        e.mark_u == EdgeMark::Tail && e.mark_v == EdgeMark::Tail;
    if (!directed && !undirected) return false;
  }
  return true;
}

bool MixedGraph::directed_part_acyclic() const {
  // Kahn's algorithm over the Tail->Arrow subgraph.
  std::vector<int> indeg(n(), 0);
  for (NodeId v = 0; v < n(); ++v) {
    indeg[v] = static_cast<int>(parents(v).size());
  }
  std::queue<NodeId> q;
  for (NodeId v = 0; v < n(); ++v) {
    if (indeg[v] == 0) q.push(v);
  }
  int seen = 0;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    ++seen;
    for (NodeId c : children(v)) {
      if (--indeg[c] == 0) q.push(c);
    }
  }
  return seen == n();
}

bool MixedGraph::is_dag() const {
  for (const Edge& e : edges()) {
    bool directed = (e.mark_u == EdgeMark::Tail && e.mark_v == EdgeMark::Arrow) ||
                    (e.mark_u == EdgeMark::Arrow && e.mark_v == EdgeMark::Tail);
    if (!directed) return false;
  }
  return directed_part_acyclic();
}

bool MixedGraph::has_circles() const {
  for (const Edge& e : edges()) {
    if (e.mark_u == EdgeMark::Circle || e.mark_v == EdgeMark::Circle)
      return true;
  }
  return false;
}

bool operator==(const MixedGraph& a, const MixedGraph& b) {
  return a.names_ == b.names_ && a.at_ == b.at_;
}

std::pair<NodeId, NodeId> SepsetMap::key(NodeId x, NodeId y) {
  return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
}

void SepsetMap::set(NodeId x, NodeId y, std::vector<NodeId> z) {
  std::sort(z.begin(), z.end());
  map_[key(x, y)] = std::move(z);
}

bool SepsetMap::has(NodeId x, NodeId y) const {
  return map_.count(key(x, y)) > 0;
}

const std::vector<NodeId>& SepsetMap::get(NodeId x, NodeId y) const {
  auto it = map_.find(key(x, y));
  if (it == map_.end()) {
    throw InvalidArgumentError("no separating set recorded for pair (" +
                               std::to_string(x) + ", " + std::to_string(y) +
                               ")");
  }
  return it->second;
}

bool SepsetMap::contains(NodeId x, NodeId y, NodeId member) const {
  const auto& z = get(x, y);
  return std::binary_search(z.begin(), z.end(), member);
}

void BackgroundKnowledge::set_tier(NodeId v, int tier) {
  if (tier < 0) throw InvalidArgumentError("tier must be non-negative");
  tiers_[v] = tier;
}

std::optional<int> BackgroundKnowledge::tier(NodeId v) const {
  auto it = tiers_.find(v);
  if (it == tiers_.end()) return std::nullopt;
  return it->second;
}

void BackgroundKnowledge::forbid(NodeId from, NodeId to) {
  forbidden_.emplace(from, to);
}

void BackgroundKnowledge::require(NodeId from, NodeId to) {
  required_.emplace(from, to);
}

bool BackgroundKnowledge::is_forbidden(NodeId from, NodeId to) const {
  return forbidden_.count({from, to}) > 0;
}

bool BackgroundKnowledge::is_required(NodeId from, NodeId to) const {
  return required_.count({from, to}) > 0;
}

bool BackgroundKnowledge::forbids_orientation(NodeId from, NodeId to) const {
  if (is_forbidden(from, to)) return true;
  auto tf = tier(from);
  auto tt = tier(to);
  // A cause in a strictly later tier than its effect is ruled out; equal
  // tiers leave both directions open.
  return tf && tt && *tf > *tt;
}

bool BackgroundKnowledge::forbids_adjacency(NodeId u, NodeId v) const {
  return is_forbidden(u, v) && is_forbidden(v, u);
}

bool BackgroundKnowledge::requires_adjacency(NodeId u, NodeId v) const {
  return is_required(u, v) || is_required(v, u);
}

bool BackgroundKnowledge::empty() const {
  return tiers_.empty() && forbidden_.empty() && required_.empty();
}

void BackgroundKnowledge::validate(int n_nodes) const {
  for (const auto& [from, to] : required_) {
    if (from < 0 || from >= n_nodes || to < 0 || to >= n_nodes) {
      throw InvalidArgumentError("required edge references unknown node");
    }
    if (from == to) throw InvalidArgumentError("required self loop");
    if (is_forbidden(from, to)) {
      throw InvalidArgumentError("edge both required and forbidden: " +
                                 std::to_string(from) + " -> " +
                                 std::to_string(to));
    }
    auto tf = tier(from);
    auto tt = tier(to);
    if (tf && tt && *tf > *tt) {
      throw InvalidArgumentError(
          "required edge runs from a later tier into an earlier one");
    }
  }
  for (const auto& [from, to] : forbidden_) {
    if (from < 0 || from >= n_nodes || to < 0 || to >= n_nodes) {
      throw InvalidArgumentError("forbidden edge references unknown node");
    }
  }
  // The required relation must admit a topological order, otherwise no
  // graph can satisfy it.
  std::vector<int> indeg(n_nodes, 0);
  for (const auto& [from, to] : required_) {
    (void)from;
    ++indeg[to];
  }
  std::vector<NodeId> stack;
  for (NodeId v = 0; v < n_nodes; ++v) {
    if (indeg[v] == 0) stack.push_back(v);
  }
  int seen = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    ++seen;
    for (const auto& [from, to] : required_) {
      if (from == v && --indeg[to] == 0) stack.push_back(to);
    }
  }
  if (seen != n_nodes) {
    throw InvalidArgumentError("required edges form a directed cycle");
  }
}

}  // namespace causalfair
