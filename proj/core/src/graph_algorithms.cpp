#include "causalfair/graph_algorithms.hpp"

#include <algorithm>
#include <array>
#include <queue>

namespace causalfair {

std::vector<Triple> unshielded_triples(const MixedGraph& g) {
  std::vector<Triple> out;
  for (NodeId c = 0; c < g.n(); ++c) {
    auto adj = g.adjacent(c);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      for (std::size_t j = i + 1; j < adj.size(); ++j) {
        NodeId x = adj[i];
        NodeId y = adj[j];
        if (!g.has_edge(x, y)) out.push_back(Triple{x, c, y});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triple> v_structures(const MixedGraph& g) {
  std::vector<Triple> out;
  for (const Triple& t : unshielded_triples(g)) {
    if (g.is_directed(t.x, t.c) && g.is_directed(t.y, t.c)) out.push_back(t);
  }
  return out;
}

std::vector<NodeId> ancestors(const MixedGraph& g, NodeId v) {
  std::vector<bool> seen(g.n(), false);
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    for (NodeId p : g.parents(cur)) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId u = 0; u < g.n(); ++u) {
    if (seen[u] && u != v) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> descendants(const MixedGraph& g, NodeId v) {
  std::vector<bool> seen(g.n(), false);
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    for (NodeId c : g.children(cur)) {
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId u = 0; u < g.n(); ++u) {
    if (seen[u] && u != v) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> topological_order(const MixedGraph& dag) {
  if (!dag.is_dag()) {
    throw InvalidArgumentError("topological_order requires a DAG");
  }
  std::vector<int> indeg(dag.n(), 0);
  for (NodeId v = 0; v < dag.n(); ++v) {
    indeg[v] = static_cast<int>(dag.parents(v).size());
  }
  // Min-heap on node index keeps the order deterministic.
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> q;
  for (NodeId v = 0; v < dag.n(); ++v) {
    if (indeg[v] == 0) q.push(v);
  }
  std::vector<NodeId> order;
  while (!q.empty()) {
    NodeId v = q.top();
    q.pop();
    order.push_back(v);
    for (NodeId c : dag.children(v)) {
      if (--indeg[c] == 0) q.push(c);
    }
  }
  return order;
}

bool d_separated(const MixedGraph& dag, NodeId x, NodeId y,
                 const std::vector<NodeId>& z) {
  if (!dag.is_dag()) throw InvalidArgumentError("d_separated requires a DAG");
  if (x == y) throw InvalidArgumentError("d_separated endpoints must differ");
  std::vector<bool> in_z(dag.n(), false);
  for (NodeId v : z) {
    if (v == x || v == y) {
      throw InvalidArgumentError(
          "conditioning set must exclude both endpoints");
    }
    in_z[v] = true;
  }

  // Nodes in z together with their ancestors; a collider opens exactly
  // when it lies in this set.
  std::vector<bool> anc_z(dag.n(), false);
  {
    std::vector<NodeId> stack;
    for (NodeId v : z) {
      anc_z[v] = true;
      stack.push_back(v);
    }
    while (!stack.empty()) {
      NodeId cur = stack.back();
      stack.pop_back();
      for (NodeId p : dag.parents(cur)) {
        if (!anc_z[p]) {
          anc_z[p] = true;
          stack.push_back(p);
        }
      }
    }
  }

  // Trail reachability. State (v, how) where how records whether the trail
  // entered v along an arrow into v (from a parent) or against one (from a
  // child). A node entered along an arrow acts as a collider exactly when
  // the trail leaves toward a parent.
  constexpr int kFromParent = 0;  // entered v via p -> v
  constexpr int kFromChild = 1;   // entered v via v -> c traversed backwards
  std::vector<std::array<bool, 2>> visited(dag.n(), {false, false});
  std::queue<std::pair<NodeId, int>> q;

  auto push = [&](NodeId v, int how) {
    if (!visited[v][how]) {
      visited[v][how] = true;
      q.emplace(v, how);
    }
  };

  for (NodeId p : dag.parents(x)) push(p, kFromChild);
  for (NodeId c : dag.children(x)) push(c, kFromParent);

  while (!q.empty()) {
    auto [v, how] = q.front();
    q.pop();
    if (v == y) return false;
    if (how == kFromParent) {
      // p -> v -> w is open unless v is conditioned; p -> v <- w opens
      // only when the collider v is conditioned or has a conditioned
      // descendant.
      if (!in_z[v]) {
        for (NodeId w : dag.children(v)) push(w, kFromParent);
      }
      if (anc_z[v]) {
        for (NodeId w : dag.parents(v)) push(w, kFromChild);
      }
    } else {
      // c <- v -> w and c <- v <- w are both blocked by conditioning v.
      if (!in_z[v]) {
        for (NodeId w : dag.children(v)) push(w, kFromParent);
        for (NodeId w : dag.parents(v)) push(w, kFromChild);
      }
    }
  }
  return true;
}

namespace {

void check_pattern(const MixedGraph& g, const char* who) {
  if (!g.is_pattern()) {
    throw InvalidArgumentError(
        std::string(who) +
        " requires a graph of directed and undirected edges only");
  }
}

}  // namespace

MixedGraph extend_pdag(const MixedGraph& pdag) {
  check_pattern(pdag, "extend_pdag");
  if (!pdag.directed_part_acyclic()) {
    throw NotExtendableError("directed part already contains a cycle");
  }

  MixedGraph out = pdag;
  MixedGraph work = pdag;
  std::vector<bool> alive(pdag.n(), true);
  int remaining = pdag.n();

  auto is_sink_candidate = [&](NodeId v) {
    std::vector<NodeId> adj;
    for (NodeId u : work.adjacent(v)) {
      if (alive[u]) adj.push_back(u);
    }
    for (NodeId u : adj) {
      if (work.is_directed(v, u)) return false;
    }
    for (NodeId u : adj) {
      if (!work.is_undirected(v, u)) continue;
      for (NodeId w : adj) {
        if (w != u && !work.has_edge(u, w)) return false;
      }
    }
    return true;
  };

  while (remaining > 0) {
    NodeId sink = -1;
    // Scanning from the top of the order makes a free-standing undirected
    // edge orient away from its lower-indexed endpoint.
    for (NodeId v = pdag.n() - 1; v >= 0; --v) {
      if (alive[v] && is_sink_candidate(v)) {
        sink = v;
        break;
      }
    }
    if (sink < 0) {
      throw NotExtendableError("pattern admits no consistent extension");
    }
    for (NodeId u : work.adjacent(sink)) {
      if (alive[u] && work.is_undirected(sink, u)) {
        out.add_directed(u, sink);
      }
    }
    for (NodeId u : work.adjacent(sink)) work.remove_edge(sink, u);
    alive[sink] = false;
    --remaining;
  }
  return out;
}

bool demand_orientation(MixedGraph& g, NodeId from, NodeId to,
                        std::set<std::pair<NodeId, NodeId>>& frozen,
                        std::vector<std::string>& warnings) {
  auto key = from < to ? std::make_pair(from, to) : std::make_pair(to, from);
  if (frozen.count(key)) return false;
  if (g.is_directed(from, to)) return true;
  if (g.is_directed(to, from)) {
    // Two rules (or two separating sets) disagree; keep the edge
    // undirected rather than picking a side.
    g.add_undirected(from, to);
    frozen.insert(key);
    warnings.push_back("conflicting orientations for edge " + g.name(key.first) +
                       " - " + g.name(key.second) + "; left undirected");
    return false;
  }
  g.add_directed(from, to);
  return true;
}

void apply_orientation_rules(MixedGraph& g,
                             std::set<std::pair<NodeId, NodeId>>& frozen,
                             std::vector<std::string>& warnings) {
  check_pattern(g, "apply_orientation_rules");
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId b = 0; b < g.n(); ++b) {
      for (NodeId c : g.undirected_neighbors(b)) {
        auto key = b < c ? std::make_pair(b, c) : std::make_pair(c, b);
        if (frozen.count(key)) continue;
        // Rule 1: a -> b - c, a and c non-adjacent.
        bool oriented = false;
        for (NodeId a : g.parents(b)) {
          if (a != c && !g.has_edge(a, c)) {
            changed |= demand_orientation(g, b, c, frozen, warnings);
            oriented = true;
            break;
          }
        }
        if (oriented) continue;
        // Rule 2: b -> x -> c with b - c still undirected.
        for (NodeId x : g.children(b)) {
          if (x != c && g.is_directed(x, c)) {
            changed |= demand_orientation(g, b, c, frozen, warnings);
            oriented = true;
            break;
          }
        }
        if (oriented) continue;
        // Rule 3: b - c, b - d1, b - d2, d1 -> c, d2 -> c with d1 and d2
        // non-adjacent.
        auto undirected = g.undirected_neighbors(b);
        for (std::size_t i = 0; i < undirected.size() && !oriented; ++i) {
          for (std::size_t j = i + 1; j < undirected.size(); ++j) {
            NodeId d1 = undirected[i];
            NodeId d2 = undirected[j];
            if (d1 == c || d2 == c) continue;
            if (g.has_edge(d1, d2)) continue;
            if (g.is_directed(d1, c) && g.is_directed(d2, c)) {
              changed |= demand_orientation(g, b, c, frozen, warnings);
              oriented = true;
              break;
            }
          }
        }
      }
    }
  }
}

MixedGraph complete_to_cpdag(const MixedGraph& dag) {
  if (!dag.is_dag()) {
    throw InvalidArgumentError("complete_to_cpdag requires a DAG");
  }
  MixedGraph out(dag.names());
  for (const Edge& e : dag.edges()) out.add_undirected(e.u, e.v);
  for (const Triple& t : v_structures(dag)) {
    out.add_directed(t.x, t.c);
    out.add_directed(t.y, t.c);
  }
  std::set<std::pair<NodeId, NodeId>> frozen;
  std::vector<std::string> warnings;
  apply_orientation_rules(out, frozen, warnings);
  return out;
}

namespace {

// True when the directed part of g has a v-structure that the reference
// list (sorted) does not contain.
bool introduces_v_structure(const MixedGraph& g,
                            const std::vector<Triple>& base) {
  for (const Triple& t : v_structures(g)) {
    if (!std::binary_search(base.begin(), base.end(), t)) return true;
  }
  return false;
}

struct ExtensionEnumerator {
  const std::vector<Triple>& base;
  std::size_t limit;
  std::vector<MixedGraph> found;

  void walk(MixedGraph g) {
    if (!g.directed_part_acyclic()) return;
    if (introduces_v_structure(g, base)) return;

    // Forced orientations narrow the branch without losing any member:
    // each rule's conclusion holds in every acyclic, v-structure-free
    // completion of the current partial orientation.
    std::set<std::pair<NodeId, NodeId>> frozen;
    std::vector<std::string> warnings;
    apply_orientation_rules(g, frozen, warnings);
    if (!warnings.empty()) return;  // contradictory demands: dead branch
    if (!g.directed_part_acyclic()) return;
    if (introduces_v_structure(g, base)) return;

    std::pair<NodeId, NodeId> pick{-1, -1};
    for (const Edge& e : g.edges()) {
      if (e.mark_u == EdgeMark::Tail && e.mark_v == EdgeMark::Tail) {
        pick = {e.u, e.v};
        break;
      }
    }
    if (pick.first < 0) {
      if (found.size() >= limit) {
        throw LimitExceededError(
            "consistent extension class exceeds cap of " +
                std::to_string(limit),
            found.size() + 1);
      }
      found.push_back(std::move(g));
      return;
    }
    MixedGraph forward = g;
    forward.add_directed(pick.first, pick.second);
    walk(std::move(forward));
    g.add_directed(pick.second, pick.first);
    walk(std::move(g));
  }
};

}  // namespace

std::vector<MixedGraph> enumerate_consistent_extensions(const MixedGraph& pdag,
                                                        std::size_t limit) {
  check_pattern(pdag, "enumerate_consistent_extensions");
  std::vector<Triple> base = v_structures(pdag);
  ExtensionEnumerator e{base, limit, {}};
  e.walk(pdag);
  return std::move(e.found);
}

}  // namespace causalfair
