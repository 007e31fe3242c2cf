#include "causalfair/sbcn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>

#include "causalfair/errors.hpp"

namespace causalfair {
namespace {

constexpr int kStallSweepAfter = 200;
constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<std::uint8_t>> binarize(
    const Dataset& d, const std::vector<BernoulliNode>& nodes) {
  std::vector<std::vector<std::uint8_t>> cols(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::vector<int>& codes = d.codes(nodes[k].var_index);
    cols[k].resize(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i)
      cols[k][i] = codes[i] == nodes[k].value ? 1 : 0;
  }
  return cols;
}

// Multinomial log-likelihood of one Bernoulli vertex given its parents,
// accumulated sparsely over observed parent configurations.
double node_log_lik(const std::vector<std::vector<std::uint8_t>>& cols,
                    int node, const std::vector<int>& parents) {
  if (parents.size() > 60)
    throw LimitExceededError("vertex has too many parents to score",
                             parents.size());
  const std::size_t n = cols[node].size();
  std::unordered_map<std::uint64_t, int> config, cell;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t t = 0; t < parents.size(); ++t)
      key |= static_cast<std::uint64_t>(cols[parents[t]][i]) << t;
    ++config[key];
    ++cell[(key << 1) | cols[node][i]];
  }
  double ll = 0.0;
  for (const auto& [key, count] : cell)
    ll += count * std::log(static_cast<double>(count) /
                           config.at(key >> 1));
  return ll;
}

struct ClimbState {
  std::vector<std::vector<std::uint8_t>> cols;
  std::vector<std::vector<int>> parents;   // per vertex, sorted
  std::vector<std::vector<int>> children;  // per vertex
  std::vector<double> local;               // per-vertex log-likelihood
  std::vector<bool> active;                // per candidate edge
  int active_count = 0;
  double penalty = 0.0;  // (ln n) / 2
  double score = 0.0;

  bool reaches(int from, int to) const {
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
      const int at = stack.back();
      stack.pop_back();
      if (at == to) return true;
      for (int next : children[at])
        if (seen.insert(next).second) stack.push_back(next);
    }
    return false;
  }

  // Score change of toggling candidate edge e, or nullopt when adding it
  // would close a directed cycle.
  std::optional<double> toggle_delta(const SbcnEdge& e, bool currently_on) {
    if (!currently_on && reaches(e.to, e.from)) return std::nullopt;
    std::vector<int> next_parents = parents[e.to];
    if (currently_on)
      next_parents.erase(
          std::find(next_parents.begin(), next_parents.end(), e.from));
    else
      next_parents.insert(std::lower_bound(next_parents.begin(),
                                           next_parents.end(), e.from),
                          e.from);
    const double next_local = node_log_lik(cols, e.to, next_parents);
    const double edge_change = currently_on ? penalty : -penalty;
    return next_local - local[e.to] + edge_change;
  }

  void apply(std::size_t index, const SbcnEdge& e, double delta) {
    const bool removing = active[index];
    active[index] = !removing;
    active_count += removing ? -1 : 1;
    if (removing) {
      parents[e.to].erase(
          std::find(parents[e.to].begin(), parents[e.to].end(), e.from));
      children[e.from].erase(
          std::find(children[e.from].begin(), children[e.from].end(), e.to));
    } else {
      parents[e.to].insert(std::lower_bound(parents[e.to].begin(),
                                            parents[e.to].end(), e.from),
                           e.from);
      children[e.from].push_back(e.to);
    }
    local[e.to] = node_log_lik(cols, e.to, parents[e.to]);
    score += delta;
  }
};

}  // namespace

int find_node(const std::vector<BernoulliNode>& nodes,
              const std::string& variable, int value) {
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].variable == variable && nodes[k].value == value)
      return static_cast<int>(k);
  return -1;
}

SbcnCandidates suppes_filter(const Dataset& d,
                             const std::vector<int>& tiers) {
  if (!d.all_categorical())
    throw MixedFamilyError(
        "the temporal-raising filter needs an all-categorical dataset");
  if (static_cast<int>(tiers.size()) != d.num_vars())
    throw InvalidArgumentError("expected one tier per variable, got " +
                               std::to_string(tiers.size()));

  SbcnCandidates out;
  for (int v = 0; v < d.num_vars(); ++v) {
    std::set<int> observed(d.codes(v).begin(), d.codes(v).end());
    for (int value : observed)
      out.nodes.push_back({d.name(v), v, value});
  }

  const auto cols = binarize(d, out.nodes);
  const double n = static_cast<double>(d.n());

  std::vector<long long> ones(out.nodes.size(), 0);
  for (std::size_t k = 0; k < out.nodes.size(); ++k)
    for (std::uint8_t bit : cols[k]) ones[k] += bit;

  std::vector<bool> degenerate(out.nodes.size(), false);
  for (std::size_t a = 0; a < out.nodes.size(); ++a) {
    if (ones[a] == d.n()) {
      degenerate[a] = true;
      out.flags.push_back("conditionals undefined for " +
                          out.nodes[a].variable + "=" +
                          std::to_string(out.nodes[a].value) +
                          " (complement never occurs); its outgoing "
                          "edges were skipped");
    }
  }

  for (std::size_t a = 0; a < out.nodes.size(); ++a) {
    if (degenerate[a]) continue;
    for (std::size_t y = 0; y < out.nodes.size(); ++y) {
      if (a == y || out.nodes[a].var_index == out.nodes[y].var_index)
        continue;
      if (tiers[out.nodes[a].var_index] > tiers[out.nodes[y].var_index])
        continue;
      long long both = 0;
      for (std::size_t i = 0; i < cols[a].size(); ++i)
        both += cols[a][i] & cols[y][i];
      const double p_given = static_cast<double>(both) / ones[a];
      const double p_other =
          static_cast<double>(ones[y] - both) / (n - ones[a]);
      if (p_given > p_other)
        out.edges.push_back({static_cast<int>(a), static_cast<int>(y),
                             p_given - p_other});
    }
  }
  return out;
}

double sbcn_bic(const Dataset& d, const std::vector<BernoulliNode>& nodes,
                const std::vector<SbcnEdge>& edges) {
  const auto cols = binarize(d, nodes);
  std::vector<std::vector<int>> parents(nodes.size());
  for (const SbcnEdge& e : edges) parents[e.to].push_back(e.from);
  for (auto& p : parents) std::sort(p.begin(), p.end());

  double total = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    total += node_log_lik(cols, static_cast<int>(k), parents[k]);
  return total -
         0.5 * std::log(static_cast<double>(d.n())) * edges.size();
}

SbcnGraph sbcn_hill_climb(const Dataset& d, const SbcnCandidates& candidates,
                          int max_iters, unsigned long long rng_seed) {
  if (max_iters < 0)
    throw InvalidArgumentError("iteration budget must be non-negative");

  SbcnGraph result;
  result.nodes = candidates.nodes;

  ClimbState state;
  state.cols = binarize(d, candidates.nodes);
  state.parents.assign(candidates.nodes.size(), {});
  state.children.assign(candidates.nodes.size(), {});
  state.local.resize(candidates.nodes.size());
  state.active.assign(candidates.edges.size(), false);
  state.penalty = 0.5 * std::log(static_cast<double>(d.n()));
  for (std::size_t k = 0; k < candidates.nodes.size(); ++k)
    state.local[k] = node_log_lik(state.cols, static_cast<int>(k), {});
  for (double l : state.local) state.score += l;
  result.trajectory.push_back(state.score);

  std::mt19937_64 rng(rng_seed);
  int rejections = 0;
  int iterations = 0;
  while (!candidates.edges.empty() && iterations < max_iters) {
    if (rejections >= kStallSweepAfter) {
      // The random proposals stalled; sweep every toggle once so "no
      // neighbour improves" is a checked fact, not a hunch.
      bool improved = false;
      for (std::size_t e = 0; e < candidates.edges.size(); ++e) {
        const auto delta =
            state.toggle_delta(candidates.edges[e], state.active[e]);
        if (delta && *delta > 0.0) {
          state.apply(e, candidates.edges[e], *delta);
          result.trajectory.push_back(state.score);
          improved = true;
          break;
        }
      }
      if (!improved) break;
      rejections = 0;
      continue;
    }

    ++iterations;
    const std::size_t e = rng() % candidates.edges.size();
    const auto delta =
        state.toggle_delta(candidates.edges[e], state.active[e]);
    if (delta && *delta > 0.0) {
      state.apply(e, candidates.edges[e], *delta);
      result.trajectory.push_back(state.score);
      rejections = 0;
    } else {
      ++rejections;
    }
  }

  for (std::size_t e = 0; e < candidates.edges.size(); ++e)
    if (state.active[e]) result.edges.push_back(candidates.edges[e]);
  return result;
}

std::vector<std::pair<int, double>> transition_probabilities(
    const SbcnGraph& g, int node) {
  double total = 0.0;
  for (const SbcnEdge& e : g.edges)
    if (e.from == node) total += e.weight;
  std::vector<std::pair<int, double>> out;
  if (total == 0.0) return out;
  for (const SbcnEdge& e : g.edges)
    if (e.from == node) out.emplace_back(e.to, e.weight / total);
  return out;
}

WalkScore random_walk_score(const SbcnGraph& g, int v,
                            const WalkConfig& cfg) {
  const int n_nodes = static_cast<int>(g.nodes.size());
  const auto in_range = [n_nodes](int k) { return k >= 0 && k < n_nodes; };
  if (!in_range(v) || !in_range(cfg.delta_minus) || !in_range(cfg.delta_plus))
    throw InvalidArgumentError("walk endpoints must be graph vertices");
  if (cfg.delta_minus == cfg.delta_plus)
    throw InvalidArgumentError("the two decision vertices must differ");
  if (cfg.n_walks < 1)
    throw InvalidArgumentError("need at least one walk");
  if (cfg.max_restarts < 0)
    throw InvalidArgumentError("restart cap must be non-negative");

  std::vector<std::vector<std::pair<int, double>>> moves(n_nodes);
  for (int k = 0; k < n_nodes; ++k) moves[k] = transition_probabilities(g, k);

  WalkScore score;

  // Without a path to either decision vertex every walk would burn its
  // restart budget; report that directly instead of simulating it.
  {
    std::vector<int> stack{v};
    std::set<int> seen{v};
    while (!stack.empty()) {
      const int at = stack.back();
      stack.pop_back();
      for (const auto& [next, p] : moves[at])
        if (seen.insert(next).second) stack.push_back(next);
    }
    if (!seen.count(cfg.delta_minus) && !seen.count(cfg.delta_plus)) {
      score.unreachable = true;
      score.walks_unresolved = cfg.n_walks;
      score.unresolved = 1.0;
      score.flags.push_back("neither decision vertex is reachable from " +
                            g.nodes[v].variable + "=" +
                            std::to_string(g.nodes[v].value) +
                            "; score reported as zero");
      return score;
    }
  }

  for (long long w = 0; w < cfg.n_walks; ++w) {
    std::mt19937_64 rng(cfg.rng_seed ^
                        (kSeedStride * static_cast<std::uint64_t>(w + 1)));
    int current = v;
    int restarts = 0;
    int steps = 0;
    for (;;) {
      if (current == cfg.delta_minus) {
        ++score.walks_minus;
        break;
      }
      if (current == cfg.delta_plus) {
        ++score.walks_plus;
        break;
      }
      // A walk in a well-formed (acyclic) graph takes fewer steps than
      // there are vertices; the cap only trips on hand-built cycles.
      if (moves[current].empty() || steps >= n_nodes) {
        if (++restarts > cfg.max_restarts) {
          ++score.walks_unresolved;
          break;
        }
        current = v;
        steps = 0;
        continue;
      }
      double u = unit_uniform(rng);
      int next = moves[current].back().first;
      for (const auto& [node, p] : moves[current]) {
        if (u < p) {
          next = node;
          break;
        }
        u -= p;
      }
      current = next;
      ++steps;
    }
  }

  const double n = static_cast<double>(cfg.n_walks);
  score.ds_minus = score.walks_minus / n;
  score.ds_plus = score.walks_plus / n;
  score.unresolved = score.walks_unresolved / n;
  return score;
}

CollapseResult sbcn_as_causal_graph(
    const SbcnGraph& g, const std::vector<std::string>& variables) {
  CollapseResult out{MixedGraph(variables), {}};
  const auto var_of = [&](int node) {
    const NodeId id = out.graph.index_of(g.nodes[node].variable);
    if (id < 0)
      throw InvalidArgumentError("vertex variable '" +
                                 g.nodes[node].variable +
                                 "' is not in the variable list");
    return id;
  };

  // Total value-level weight per ordered variable pair.
  std::map<std::pair<NodeId, NodeId>, double> mass;
  for (const SbcnEdge& e : g.edges) {
    const NodeId a = var_of(e.from);
    const NodeId b = var_of(e.to);
    if (a != b) mass[{a, b}] += e.weight;
  }

  for (const auto& [pair, forward] : mass) {
    const auto& [a, b] = pair;
    if (a > b && mass.count({b, a})) continue;  // handled from (b, a)
    const auto rit = mass.find({b, a});
    const double backward = rit == mass.end() ? 0.0 : rit->second;
    if (backward == 0.0) {
      out.graph.add_directed(a, b);
      continue;
    }
    // Both directions occurred at value level: keep the heavier one,
    // ties falling to the lower-indexed source, and say so.
    if (forward > backward || (forward == backward && a < b))
      out.graph.add_directed(a, b);
    else
      out.graph.add_directed(b, a);
    out.flags.push_back("conflicting value-level directions between " +
                        out.graph.name(a) + " and " + out.graph.name(b) +
                        " (" + std::to_string(forward) + " vs " +
                        std::to_string(backward) +
                        "); kept the heavier direction");
  }
  return out;
}

}  // namespace causalfair
