#include "causalfair/pc.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "causalfair/graph_algorithms.hpp"

namespace causalfair {

namespace {

// Advance idx to the next lexicographic k-combination of {0..m-1}.
bool next_combination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<std::size_t>(i)] < m - (k - i)) {
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

std::string test_context(const MixedGraph& g, NodeId x, NodeId y,
                         const std::vector<int>& z, int depth) {
  std::ostringstream os;
  os << " [testing " << g.name(x) << " vs " << g.name(y) << " given {";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << g.name(z[i]);
  }
  os << "} at depth " << depth << "]";
  return os.str();
}

}  // namespace

SkeletonResult pc_skeleton(std::vector<std::string> names,
                           const CiTestFn& test, const BackgroundKnowledge& bk,
                           int max_depth) {
  MixedGraph g = MixedGraph::complete_undirected(std::move(names));
  const int n = g.n();
  bk.validate(n);

  SepsetMap sepsets;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bk.forbids_adjacency(u, v)) {
        g.remove_edge(u, v);
        sepsets.set(u, v, {});
      }

  long long tests = 0;
  int max_reached = -1;
  for (int depth = 0; max_depth < 0 || depth <= max_depth; ++depth) {
    // Search continues while some ordered adjacent pair (X, Y) still has
    // |adj(X)\{Y}| >= depth, i.e. degree(X) >= depth + 1.
    bool guard = false;
    for (NodeId x = 0; x < n && !guard; ++x)
      guard = g.degree(x) >= depth + 1;
    if (!guard) break;

    for (NodeId x = 0; x < n; ++x) {
      const std::vector<NodeId> snapshot = g.adjacent(x);
      for (NodeId y : snapshot) {
        if (!g.has_edge(x, y)) continue;  // removed earlier in this sweep
        if (bk.requires_adjacency(x, y)) continue;
        std::vector<NodeId> cand = g.adjacent(x);
        cand.erase(std::remove(cand.begin(), cand.end(), y), cand.end());
        if (static_cast<int>(cand.size()) < depth) continue;

        std::vector<int> idx(static_cast<std::size_t>(depth));
        for (int i = 0; i < depth; ++i) idx[static_cast<std::size_t>(i)] = i;
        do {
          std::vector<int> zset;
          zset.reserve(static_cast<std::size_t>(depth));
          for (int i : idx) zset.push_back(cand[static_cast<std::size_t>(i)]);
          ++tests;
          max_reached = std::max(max_reached, depth);
          CiTestResult res;
          try {
            res = test(x, y, zset);
          } catch (const Error& e) {
            throw Error(e.code(),
                        e.what() + test_context(g, x, y, zset, depth));
          }
          if (res.independent) {
            g.remove_edge(x, y);
            sepsets.set(x, y, std::move(zset));
            break;
          }
        } while (next_combination(idx, static_cast<int>(cand.size())));
      }
    }
  }
  return {std::move(g), std::move(sepsets), tests, max_reached};
}

SkeletonResult pc_skeleton(const Dataset& d, const TestConfig& cfg,
                           const BackgroundKnowledge& bk, int max_depth) {
  return pc_skeleton(d.names(), make_ci_test(d, cfg), bk, max_depth);
}

MixedGraph pc_orient(const MixedGraph& skeleton, const SepsetMap& sepsets,
                     const BackgroundKnowledge& bk,
                     std::vector<std::string>* warnings_out) {
  if (!skeleton.is_pattern())
    throw InvalidArgumentError(
        "pc_orient needs a graph with only directed or undirected edges");
  const int n = skeleton.n();
  bk.validate(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (!skeleton.has_edge(u, v) && !sepsets.has(u, v))
        throw InvalidArgumentError("missing separating set for '" +
                                   skeleton.name(u) + "' and '" +
                                   skeleton.name(v) + "'");

  MixedGraph g = skeleton;
  std::vector<std::string> warnings;
  std::set<std::pair<NodeId, NodeId>> frozen;

  // Colliders first: centre node absent from the separating set.
  for (const Triple& t : unshielded_triples(g)) {
    if (!sepsets.contains(t.x, t.y, t.c)) {
      demand_orientation(g, t.x, t.c, frozen, warnings);
      demand_orientation(g, t.y, t.c, frozen, warnings);
    }
  }

  // Background knowledge next, so rule closure propagates it: earlier
  // tiers point at later tiers, and explicitly required orientations are
  // demanded as-is. Conflicts with collider arrows freeze the edge.
  for (const Edge& e : g.edges()) {
    const auto tu = bk.tier(e.u);
    const auto tv = bk.tier(e.v);
    if (tu && tv && *tu != *tv) {
      if (*tu < *tv)
        demand_orientation(g, e.u, e.v, frozen, warnings);
      else
        demand_orientation(g, e.v, e.u, frozen, warnings);
    }
    if (bk.is_required(e.u, e.v))
      demand_orientation(g, e.u, e.v, frozen, warnings);
    if (bk.is_required(e.v, e.u))
      demand_orientation(g, e.v, e.u, frozen, warnings);
  }

  apply_orientation_rules(g, frozen, warnings);

  if (warnings_out)
    warnings_out->insert(warnings_out->end(), warnings.begin(),
                         warnings.end());
  return g;
}

PcResult run_pc(std::vector<std::string> names, const CiTestFn& test,
                const BackgroundKnowledge& bk) {
  SkeletonResult sk = pc_skeleton(std::move(names), test, bk);
  PcResult out;
  out.cpdag = pc_orient(sk.graph, sk.sepsets, bk, &out.warnings);
  out.sepsets = std::move(sk.sepsets);
  out.tests_performed = sk.tests_performed;
  out.max_depth_reached = sk.max_depth_reached;
  return out;
}

PcResult run_pc(const Dataset& d, const TestConfig& cfg,
                const BackgroundKnowledge& bk) {
  return run_pc(d.names(), make_ci_test(d, cfg), bk);
}

}  // namespace causalfair
