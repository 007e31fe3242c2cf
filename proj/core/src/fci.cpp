#include "causalfair/fci.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "causalfair/graph_algorithms.hpp"
#include "causalfair/pc.hpp"

namespace causalfair {

namespace {

// Write `m` at the v end of u ~ v, but only over a Circle: established
// Tail/Arrow marks never weaken or flip. Returns true when the mark
// changed.
bool strengthen(MixedGraph& g, NodeId u, NodeId v, EdgeMark m,
                std::vector<std::string>& warnings) {
  const EdgeMark cur = g.end_mark(u, v);
  if (cur == m) return false;
  if (cur != EdgeMark::Circle) {
    warnings.push_back(std::string("kept ") + to_string(cur) +
                       " mark at the " + g.name(v) + " end of " + g.name(u) +
                       " ~ " + g.name(v) + " (refused " + to_string(m) + ")");
    return false;
  }
  g.set_end_mark(u, v, m);
  return true;
}

// Rule 1: a *-> b o-* c with a, c non-adjacent orients b -> c.
bool rule1(MixedGraph& g, std::vector<std::string>& warnings) {
  bool changed = false;
  for (NodeId b = 0; b < g.n(); ++b) {
    for (NodeId a : g.adjacent(b)) {
      if (g.end_mark(a, b) != EdgeMark::Arrow) continue;
      for (NodeId c : g.adjacent(b)) {
        if (c == a || g.has_edge(a, c)) continue;
        if (g.end_mark(c, b) != EdgeMark::Circle) continue;
        changed |= strengthen(g, c, b, EdgeMark::Tail, warnings);
        changed |= strengthen(g, b, c, EdgeMark::Arrow, warnings);
      }
    }
  }
  return changed;
}

// Rule 2: a -> c *-> b or a *-> c -> b, with a *-o b, puts an arrowhead
// at the b end of a ~ b.
bool rule2(MixedGraph& g, std::vector<std::string>& warnings) {
  bool changed = false;
  for (NodeId a = 0; a < g.n(); ++a) {
    for (NodeId b : g.adjacent(a)) {
      if (g.end_mark(a, b) != EdgeMark::Circle) continue;
      for (NodeId c : g.adjacent(a)) {
        if (c == b || !g.has_edge(c, b)) continue;
        const bool first = g.is_directed(a, c) &&
                           g.end_mark(c, b) == EdgeMark::Arrow;
        const bool second = g.end_mark(a, c) == EdgeMark::Arrow &&
                            g.is_directed(c, b);
        if (first || second) {
          changed |= strengthen(g, a, b, EdgeMark::Arrow, warnings);
          break;
        }
      }
    }
  }
  return changed;
}

// Rule 3: a *-> b <-* c, a *-o d o-* c with a, c non-adjacent, and
// d *-o b, puts an arrowhead at the b end of d ~ b.
bool rule3(MixedGraph& g, std::vector<std::string>& warnings) {
  bool changed = false;
  for (NodeId b = 0; b < g.n(); ++b) {
    for (NodeId d : g.adjacent(b)) {
      if (g.end_mark(d, b) != EdgeMark::Circle) continue;
      const std::vector<NodeId> into_b = g.adjacent(b);
      for (NodeId a : into_b) {
        if (a == d || g.end_mark(a, b) != EdgeMark::Arrow) continue;
        if (!g.has_edge(a, d) || g.end_mark(a, d) != EdgeMark::Circle)
          continue;
        for (NodeId c : into_b) {
          if (c <= a || c == d || g.end_mark(c, b) != EdgeMark::Arrow)
            continue;
          if (!g.has_edge(c, d) || g.end_mark(c, d) != EdgeMark::Circle)
            continue;
          if (g.has_edge(a, c)) continue;
          changed |= strengthen(g, d, b, EdgeMark::Arrow, warnings);
        }
      }
    }
  }
  return changed;
}

// Rule 4: resolve each discriminating path through the separating set of
// its endpoints.
bool rule4(MixedGraph& g, const SepsetMap& sepsets,
           std::vector<std::string>& warnings) {
  bool changed = false;
  for (NodeId c = 0; c < g.n(); ++c) {
    for (NodeId y : g.adjacent(c)) {
      if (g.end_mark(y, c) != EdgeMark::Circle) continue;  // circle at c end
      for (NodeId d = 0; d < g.n(); ++d) {
        if (d == c || d == y || g.has_edge(d, y)) continue;
        const auto path = find_discriminating_path(g, d, y, c);
        if (!path) continue;
        const NodeId x = (*path)[path->size() - 3];
        if (sepsets.contains(d, y, c)) {
          changed |= strengthen(g, y, c, EdgeMark::Tail, warnings);
          changed |= strengthen(g, c, y, EdgeMark::Arrow, warnings);
        } else {
          changed |= strengthen(g, x, c, EdgeMark::Arrow, warnings);
          changed |= strengthen(g, c, x, EdgeMark::Arrow, warnings);
          changed |= strengthen(g, c, y, EdgeMark::Arrow, warnings);
          changed |= strengthen(g, y, c, EdgeMark::Arrow, warnings);
        }
      }
    }
  }
  return changed;
}

}  // namespace

std::optional<std::vector<NodeId>> find_discriminating_path(
    const MixedGraph& pag, NodeId d, NodeId y, NodeId c) {
  if (d == y || d == c || c == y) return std::nullopt;
  if (!pag.has_edge(c, y)) return std::nullopt;
  if (pag.has_edge(d, y)) return std::nullopt;

  // Breadth-first over simple paths d, v1, ..., vk: every vi must be a
  // collider on the path and a parent of y; a step onto c completes the
  // path. Queue order makes the first hit a shortest one.
  std::deque<std::vector<NodeId>> queue;
  queue.push_back({d});
  while (!queue.empty()) {
    std::vector<NodeId> path = std::move(queue.front());
    queue.pop_front();
    const NodeId tail = path.back();
    for (NodeId w : pag.adjacent(tail)) {
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      if (w == y) continue;
      if (path.size() >= 2) {
        // The previous hop must have entered `tail` with an arrowhead
        // and `tail` must send one back along this new edge, making it
        // a collider; it must also be a parent of y.
        const NodeId prev = path[path.size() - 2];
        if (pag.end_mark(prev, tail) != EdgeMark::Arrow) continue;
        if (pag.end_mark(w, tail) != EdgeMark::Arrow) continue;
        if (!pag.has_edge(tail, y) || !pag.is_directed(tail, y)) continue;
      }
      if (w == c) {
        if (path.size() < 2) continue;  // needs an interior collider
        std::vector<NodeId> full = path;
        full.push_back(c);
        full.push_back(y);
        return full;
      }
      std::vector<NodeId> next = path;
      next.push_back(w);
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

std::vector<YStructure> detect_y_structures(const MixedGraph& pag) {
  std::vector<YStructure> out;
  const int n = pag.n();
  for (NodeId x = 0; x < n; ++x) {
    for (NodeId y = 0; y < n; ++y) {
      if (y == x || !pag.has_edge(x, y)) continue;
      // x ~ y must carry an arrow into y without one back into x.
      if (pag.end_mark(x, y) != EdgeMark::Arrow) continue;
      if (pag.end_mark(y, x) == EdgeMark::Arrow) continue;
      for (NodeId c1 = 0; c1 < n; ++c1) {
        if (c1 == x || c1 == y || !pag.has_edge(c1, x)) continue;
        if (pag.end_mark(c1, x) != EdgeMark::Arrow) continue;
        if (pag.has_edge(c1, y)) continue;
        for (NodeId c2 = c1 + 1; c2 < n; ++c2) {
          if (c2 == x || c2 == y || !pag.has_edge(c2, x)) continue;
          if (pag.end_mark(c2, x) != EdgeMark::Arrow) continue;
          if (pag.has_edge(c2, y) || pag.has_edge(c1, c2)) continue;
          out.push_back({c1, c2, x, y});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const YStructure& a, const YStructure& b) {
    return std::tie(a.c1, a.c2, a.x, a.y) < std::tie(b.c1, b.c2, b.x, b.y);
  });
  return out;
}

PagResult fci_orient(const MixedGraph& skeleton, const SepsetMap& sepsets) {
  const int n = skeleton.n();
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (!skeleton.has_edge(u, v) && !sepsets.has(u, v))
        throw InvalidArgumentError("missing separating set for '" +
                                   skeleton.name(u) + "' and '" +
                                   skeleton.name(v) + "'");

  PagResult out;
  out.pag = MixedGraph(skeleton.names());
  for (const Edge& e : skeleton.edges())
    out.pag.add_edge(e.u, e.v, EdgeMark::Circle, EdgeMark::Circle);
  out.sepsets = sepsets;
  MixedGraph& g = out.pag;

  // Collider arrowheads; the far ends keep their circles.
  for (const Triple& t : unshielded_triples(g)) {
    if (!sepsets.contains(t.x, t.y, t.c)) {
      strengthen(g, t.x, t.c, EdgeMark::Arrow, out.warnings);
      strengthen(g, t.y, t.c, EdgeMark::Arrow, out.warnings);
    }
  }

  bool changed = true;
  while (changed) {
    changed = rule1(g, out.warnings);
    changed = rule2(g, out.warnings) || changed;
    changed = rule3(g, out.warnings) || changed;
    changed = rule4(g, sepsets, out.warnings) || changed;
  }

  out.y_structures = detect_y_structures(g);
  return out;
}

PagResult run_fci(std::vector<std::string> names, const CiTestFn& test,
                  const BackgroundKnowledge& bk) {
  SkeletonResult sk = pc_skeleton(std::move(names), test, bk);
  PagResult out = fci_orient(sk.graph, sk.sepsets);
  out.tests_performed = sk.tests_performed;
  out.max_depth_reached = sk.max_depth_reached;
  return out;
}

PagResult run_fci(const Dataset& d, const TestConfig& cfg,
                  const BackgroundKnowledge& bk) {
  return run_fci(d.names(), make_ci_test(d, cfg), bk);
}

}  // namespace causalfair
