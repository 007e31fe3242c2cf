#include "causalfair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causalfair/errors.hpp"
#include "causalfair/graph_algorithms.hpp"

namespace causalfair {

namespace {

constexpr std::size_t kMaxConfigs = std::size_t{1} << 20;
constexpr std::size_t kMaxPaths = 4096;

void check_measure_var(const Dataset& d, int v, const char* what) {
  if (v < 0 || v >= d.num_vars()) {
    throw InvalidArgumentError(std::string(what) +
                               " index is not a dataset column");
  }
  if (!d.is_categorical(v)) {
    throw MixedFamilyError(std::string(what) + " column '" + d.name(v) +
                           "' must be categorical; discretize it first");
  }
}

void check_level(const Dataset& d, int v, int code, const char* what) {
  if (code < 0 || code >= d.levels(v)) {
    throw InvalidArgumentError(std::string(what) + " value " +
                               std::to_string(code) + " is outside the " +
                               std::to_string(d.levels(v)) + " levels of '" +
                               d.name(v) + "'");
  }
}

void check_pair(const Dataset& d, int a_var, int y_var, int a1, int a0,
                int y_plus) {
  check_measure_var(d, a_var, "protected attribute");
  check_measure_var(d, y_var, "outcome");
  if (a_var == y_var) {
    throw InvalidArgumentError(
        "protected attribute and outcome must be different columns");
  }
  check_level(d, a_var, a1, "privileged group");
  check_level(d, a_var, a0, "protected group");
  check_level(d, y_var, y_plus, "positive outcome");
}

void check_graph_data(const MixedGraph& g, const Dataset& d) {
  if (g.n() != d.num_vars()) {
    throw InvalidArgumentError("graph has " + std::to_string(g.n()) +
                               " nodes but the dataset has " +
                               std::to_string(d.num_vars()) + " columns");
  }
}

std::string percent(double fraction) {
  std::ostringstream os;
  os.precision(3);
  os << fraction * 100.0 << "%";
  return os.str();
}

// All directed simple paths src -> ... -> dst, children visited in index
// order so the listing is deterministic.
std::vector<std::vector<NodeId>> directed_paths(const MixedGraph& g,
                                                NodeId src, NodeId dst,
                                                std::size_t cap) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> cur{src};
  std::vector<char> on_path(g.n(), 0);
  on_path[src] = 1;
  auto walk = [&](auto&& self, NodeId u) -> void {
    if (u == dst) {
      if (out.size() >= cap) {
        throw LimitExceededError(
            "more than " + std::to_string(cap) +
                " directed paths between the attribute and the outcome",
            out.size());
      }
      out.push_back(cur);
      return;
    }
    for (NodeId w : g.children(u)) {
      if (on_path[w]) continue;
      on_path[w] = 1;
      cur.push_back(w);
      self(self, w);
      cur.pop_back();
      on_path[w] = 0;
    }
  };
  walk(walk, src);
  return out;
}

std::string path_to_string(const MixedGraph& g,
                           const std::vector<NodeId>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += " -> ";
    s += g.name(path[i]);
  }
  return s;
}

struct PlugInOutcome {
  double p = 0.0;
  double kept_mass = 0.0;
};

// P(Y = y_plus) in the intervened plug-in distribution: the attribute
// column is cut out and every conditional table that reads it is fed the
// per-child value from `a_input` instead. Evaluation enumerates the joint
// configurations of Y's ancestors, multiplying empirical conditional
// probabilities; configurations that land in an unobserved parent stratum
// contribute no mass and the rest is renormalized.
PlugInOutcome intervened_outcome(const Dataset& d, const MixedGraph& dag,
                                 int a_var, int y_var,
                                 const std::map<NodeId, int>& a_input,
                                 int y_plus) {
  std::vector<char> keep(dag.n(), 0);
  for (NodeId v : ancestors(dag, y_var)) keep[v] = 1;
  keep[y_var] = 1;
  keep[a_var] = 0;

  std::vector<NodeId> vars;
  for (NodeId v : topological_order(dag)) {
    if (keep[v]) vars.push_back(v);
  }
  for (NodeId v : vars) check_measure_var(d, v, "graph variable");

  std::size_t total = 1;
  for (NodeId v : vars) {
    total *= static_cast<std::size_t>(d.levels(v));
    if (total > kMaxConfigs) {
      throw LimitExceededError(
          "plug-in state space exceeds " + std::to_string(kMaxConfigs) +
              " configurations; marginalize or coarsen the data",
          total);
    }
  }

  std::vector<int> pos(dag.n(), -1);
  for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = static_cast<int>(i);

  struct Table {
    std::vector<NodeId> parents;
    std::vector<std::size_t> stride;
    std::vector<long long> denom;
    std::vector<long long> numer;
    int levels = 0;
  };
  std::vector<Table> tables(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    Table& t = tables[j];
    t.parents = dag.parents(vars[j]);
    t.levels = d.levels(vars[j]);
    std::size_t cfgs = 1;
    t.stride.resize(t.parents.size());
    for (std::size_t k = 0; k < t.parents.size(); ++k) {
      check_measure_var(d, t.parents[k], "graph variable");
      t.stride[k] = cfgs;
      cfgs *= static_cast<std::size_t>(d.levels(t.parents[k]));
      if (cfgs > kMaxConfigs) {
        throw LimitExceededError(
            "conditional table for '" + d.name(vars[j]) + "' exceeds " +
                std::to_string(kMaxConfigs) + " parent configurations",
            cfgs);
      }
    }
    t.denom.assign(cfgs, 0);
    t.numer.assign(cfgs * static_cast<std::size_t>(t.levels), 0);
    const auto& own = d.codes(vars[j]);
    for (int r = 0; r < d.n(); ++r) {
      std::size_t cfg = 0;
      for (std::size_t k = 0; k < t.parents.size(); ++k) {
        cfg += t.stride[k] *
               static_cast<std::size_t>(d.codes(t.parents[k])[r]);
      }
      ++t.denom[cfg];
      ++t.numer[cfg * static_cast<std::size_t>(t.levels) +
                static_cast<std::size_t>(own[r])];
    }
  }

  std::vector<int> val(vars.size(), 0);
  double mass = 0.0;
  double hit = 0.0;
  const int y_pos = pos[y_var];
  for (;;) {
    double w = 1.0;
    bool observed = true;
    for (std::size_t j = 0; j < vars.size() && observed; ++j) {
      const Table& t = tables[j];
      std::size_t cfg = 0;
      for (std::size_t k = 0; k < t.parents.size(); ++k) {
        const NodeId p = t.parents[k];
        const int pv = p == a_var ? a_input.at(vars[j]) : val[pos[p]];
        cfg += t.stride[k] * static_cast<std::size_t>(pv);
      }
      if (t.denom[cfg] == 0) {
        observed = false;
        break;
      }
      w *= static_cast<double>(
               t.numer[cfg * static_cast<std::size_t>(t.levels) +
                       static_cast<std::size_t>(val[j])]) /
           static_cast<double>(t.denom[cfg]);
    }
    if (observed) {
      mass += w;
      if (val[y_pos] == y_plus) hit += w;
    }
    std::size_t j = 0;
    while (j < vars.size()) {
      if (++val[j] < d.levels(vars[j])) break;
      val[j] = 0;
      ++j;
    }
    if (j == vars.size()) break;
  }

  if (mass <= 0.0) {
    throw EmptyGroupError(
        "no observed stratum supports the requested intervention");
  }
  return {hit / mass, mass};
}

void clamp_to_unit(MeasureValue& mv) {
  if (mv.value > 1.0) {
    mv.value = 1.0;
    mv.flags.push_back("estimate clamped to [-1, 1]");
  } else if (mv.value < -1.0) {
    mv.value = -1.0;
    mv.flags.push_back("estimate clamped to [-1, 1]");
  }
}

}  // namespace

const char* to_string(Measure m) {
  switch (m) {
    case Measure::TV:
      return "TV";
    case Measure::TE:
      return "TE";
    case Measure::AteIpw:
      return "ATE_IPW";
    case Measure::DE:
      return "DE";
    case Measure::ID:
      return "ID";
    case Measure::ED:
      return "ED";
  }
  return "?";
}

RoleAssignment classify_roles(const MixedGraph& dag, NodeId a, NodeId y,
                              const std::vector<VariableMeta>& schema) {
  const int n = dag.n();
  if (a < 0 || a >= n || y < 0 || y >= n) {
    throw InvalidArgumentError(
        "protected attribute or outcome is not a node of the graph");
  }
  if (a == y) {
    throw InvalidArgumentError(
        "protected attribute and outcome must be different nodes");
  }
  if (!dag.is_dag()) {
    throw InvalidArgumentError(
        "role classification needs a fully directed acyclic graph");
  }
  if (!schema.empty() && schema.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgumentError("schema has " + std::to_string(schema.size()) +
                               " entries for a graph with " +
                               std::to_string(n) + " nodes");
  }

  std::vector<char> desc_a(n, 0), anc_y(n, 0), desc_y(n, 0);
  for (NodeId v : descendants(dag, a)) desc_a[v] = 1;
  for (NodeId v : ancestors(dag, y)) anc_y[v] = 1;
  for (NodeId v : descendants(dag, y)) desc_y[v] = 1;

  RoleAssignment roles;
  for (NodeId v = 0; v < n; ++v) {
    if (v == a || v == y) continue;
    if (desc_a[v] && anc_y[v]) roles.mediators.push_back(v);
  }
  auto is_mediator = [&](NodeId v) {
    return std::binary_search(roles.mediators.begin(), roles.mediators.end(),
                              v);
  };

  // Directed reachability that never enters `banned`, so a confounder's
  // path to one endpoint cannot run through the other.
  auto reaches_avoiding = [&](NodeId src, NodeId dst, NodeId banned) {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{src};
    seen[src] = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      if (u == dst) return true;
      for (NodeId w : dag.children(u)) {
        if (w == banned || seen[w]) continue;
        seen[w] = 1;
        stack.push_back(w);
      }
    }
    return false;
  };

  for (NodeId v = 0; v < n; ++v) {
    if (v == a || v == y || is_mediator(v)) continue;
    if (reaches_avoiding(v, a, y) && reaches_avoiding(v, y, a)) {
      roles.confounders.push_back(v);
    }
  }
  auto is_confounder = [&](NodeId v) {
    return std::binary_search(roles.confounders.begin(),
                              roles.confounders.end(), v);
  };

  for (NodeId v = 0; v < n; ++v) {
    if (v == a || v == y || is_mediator(v) || is_confounder(v)) continue;
    if (desc_a[v] && desc_y[v] && dag.parents(v).size() >= 2) {
      roles.colliders.push_back(v);
    }
  }

  for (NodeId m : roles.mediators) {
    const bool explaining =
        !schema.empty() &&
        schema[static_cast<std::size_t>(m)].mediator_kind == "explaining";
    roles.mediator_kind[m] = explaining ? "explaining" : "redlining";
  }
  return roles;
}

double total_variation(const Dataset& d, int a_var, int y_var, int a1,
                       int a0, int y_plus) {
  check_pair(d, a_var, y_var, a1, a0, y_plus);
  const auto& a = d.codes(a_var);
  const auto& y = d.codes(y_var);
  long long n1 = 0, n0 = 0, hit1 = 0, hit0 = 0;
  for (int i = 0; i < d.n(); ++i) {
    if (a[i] == a1) {
      ++n1;
      hit1 += y[i] == y_plus;
    }
    if (a[i] == a0) {
      ++n0;
      hit0 += y[i] == y_plus;
    }
  }
  if (n1 == 0) {
    throw EmptyGroupError("no rows with " + d.name(a_var) + " = " +
                          std::to_string(a1));
  }
  if (n0 == 0) {
    throw EmptyGroupError("no rows with " + d.name(a_var) + " = " +
                          std::to_string(a0));
  }
  return static_cast<double>(hit1) / static_cast<double>(n1) -
         static_cast<double>(hit0) / static_cast<double>(n0);
}

MeasureValue total_effect(const Dataset& d, const MixedGraph& dag, int a_var,
                          int y_var, int a1, int a0, int y_plus) {
  check_pair(d, a_var, y_var, a1, a0, y_plus);
  check_graph_data(dag, d);
  const RoleAssignment roles = classify_roles(dag, a_var, y_var);
  for (NodeId c : roles.confounders) check_measure_var(d, c, "confounder");

  MeasureValue out;
  out.measure = Measure::TE;

  const auto& a = d.codes(a_var);
  const auto& y = d.codes(y_var);
  long long n1 = 0, n0 = 0;
  for (int i = 0; i < d.n(); ++i) {
    n1 += a[i] == a1;
    n0 += a[i] == a0;
  }
  if (n1 == 0) {
    throw EmptyGroupError("no rows with " + d.name(a_var) + " = " +
                          std::to_string(a1));
  }
  if (n0 == 0) {
    throw EmptyGroupError("no rows with " + d.name(a_var) + " = " +
                          std::to_string(a0));
  }
  if (a1 == a0) return out;

  struct Cell {
    long long rows = 0;
    long long in1 = 0, in0 = 0;
    long long hit1 = 0, hit0 = 0;
  };
  std::map<std::vector<int>, Cell> cells;
  std::vector<int> key(roles.confounders.size());
  for (int i = 0; i < d.n(); ++i) {
    for (std::size_t k = 0; k < roles.confounders.size(); ++k) {
      key[k] = d.codes(roles.confounders[k])[i];
    }
    Cell& c = cells[key];
    ++c.rows;
    if (a[i] == a1) {
      ++c.in1;
      c.hit1 += y[i] == y_plus;
    } else if (a[i] == a0) {
      ++c.in0;
      c.hit0 += y[i] == y_plus;
    }
  }

  double kept = 0.0, skipped = 0.0, sum = 0.0;
  for (const auto& [unused, c] : cells) {
    const double pc = static_cast<double>(c.rows) / d.n();
    if (c.in1 == 0 || c.in0 == 0) {
      skipped += pc;
      continue;
    }
    kept += pc;
    sum += (static_cast<double>(c.hit1) / c.in1 -
            static_cast<double>(c.hit0) / c.in0) *
           pc;
  }
  if (kept <= 0.0) {
    throw EmptyGroupError(
        "every confounder stratum lacks one of the two groups");
  }
  out.value = sum / kept;
  if (skipped > 0.0) {
    out.flags.push_back("skipped sparse confounder strata covering " +
                        percent(skipped) + " of rows (renormalized)");
  }
  return out;
}

MeasureValue ate_ipw(const Dataset& d, int a_var, int y_var,
                     const std::vector<int>& covariates, int a1, int a0,
                     int y_plus) {
  check_pair(d, a_var, y_var, a1, a0, y_plus);
  std::set<int> seen;
  for (int c : covariates) {
    if (c < 0 || c >= d.num_vars()) {
      throw InvalidArgumentError("covariate index is not a dataset column");
    }
    if (c == a_var || c == y_var) {
      throw InvalidArgumentError(
          "covariates must exclude the attribute and the outcome");
    }
    if (!seen.insert(c).second) {
      throw InvalidArgumentError("covariate '" + d.name(c) +
                                 "' listed twice");
    }
  }

  const auto& a = d.codes(a_var);
  const auto& y = d.codes(y_var);
  std::vector<int> rows;
  for (int i = 0; i < d.n(); ++i) {
    if (a[i] == a1 || a[i] == a0) rows.push_back(i);
  }
  long long n1 = 0;
  for (int i : rows) n1 += a[i] == a1;
  if (n1 == 0) {
    throw EmptyGroupError("no rows with " + d.name(a_var) + " = " +
                          std::to_string(a1));
  }
  if (n1 == static_cast<long long>(rows.size()) && a1 != a0) {
    throw EmptyGroupError("no rows with " + d.name(a_var) + " = " +
                          std::to_string(a0));
  }

  MeasureValue out;
  out.measure = Measure::AteIpw;
  if (a1 == a0) return out;

  const std::size_t m = rows.size();
  std::vector<std::vector<double>> feats;
  for (int c : covariates) {
    std::vector<double> col(m);
    for (std::size_t r = 0; r < m; ++r) {
      col[r] = d.is_continuous(c)
                   ? d.cont(c)[rows[r]]
                   : static_cast<double>(d.codes(c)[rows[r]]);
    }
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m);
    if (var <= 0.0) continue;  // constant covariate carries no signal
    const double sd = std::sqrt(var);
    for (double& v : col) v = (v - mean) / sd;
    feats.push_back(std::move(col));
  }

  std::vector<double> e(m);
  if (feats.empty()) {
    // Intercept-only logistic regression has the group rate as its exact
    // optimum; use it directly instead of iterating toward it.
    const double rate = static_cast<double>(n1) / static_cast<double>(m);
    const double p = std::min(0.99, std::max(0.01, rate));
    std::fill(e.begin(), e.end(), p);
  } else {
    const std::size_t k = feats.size();
    std::vector<double> w(k + 1, 0.0);
    std::vector<double> grad(k + 1, 0.0);
    auto fill_grad = [&]() {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        double z = w[0];
        for (std::size_t j = 0; j < k; ++j) z += w[j + 1] * feats[j][r];
        const double p = 1.0 / (1.0 + std::exp(-z));
        const double resid = (a[rows[r]] == a1 ? 1.0 : 0.0) - p;
        grad[0] += resid;
        for (std::size_t j = 0; j < k; ++j) grad[j + 1] += resid * feats[j][r];
      }
      for (double& g : grad) g /= static_cast<double>(m);
    };
    for (int it = 0; it < 500; ++it) {
      fill_grad();
      for (std::size_t j = 0; j <= k; ++j) w[j] += 0.1 * grad[j];
    }
    fill_grad();
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    if (std::sqrt(norm) > 1e-5) {
      out.flags.push_back(
          "propensity fit stopped before the gradient vanished");
    }
    for (std::size_t r = 0; r < m; ++r) {
      double z = w[0];
      for (std::size_t j = 0; j < k; ++j) z += w[j + 1] * feats[j][r];
      e[r] = std::min(0.99, std::max(0.01, 1.0 / (1.0 + std::exp(-z))));
    }
  }

  double s1 = 0.0, s0 = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const int i = rows[r];
    const double hit = y[i] == y_plus ? 1.0 : 0.0;
    if (a[i] == a1) {
      s1 += hit / e[r];
    } else {
      s0 += hit / (1.0 - e[r]);
    }
  }
  out.value = s1 / static_cast<double>(m) - s0 / static_cast<double>(m);
  clamp_to_unit(out);
  return out;
}

MeasureValue path_specific_effect(
    const Dataset& d, const MixedGraph& dag, int a_var, int y_var,
    const std::vector<std::vector<NodeId>>& active_paths, int a1, int a0,
    int y_plus) {
  check_pair(d, a_var, y_var, a1, a0, y_plus);
  check_graph_data(dag, d);
  if (!dag.is_dag()) {
    throw InvalidArgumentError("path effects need a fully directed DAG");
  }

  for (const auto& p : active_paths) {
    if (p.size() < 2 || p.front() != a_var || p.back() != y_var) {
      throw InvalidArgumentError(
          "active paths must run from the attribute to the outcome");
    }
    std::set<NodeId> uniq(p.begin(), p.end());
    if (uniq.size() != p.size()) {
      throw InvalidArgumentError("active path revisits a node");
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= dag.n() || p[i + 1] < 0 ||
          p[i + 1] >= dag.n() || !dag.is_directed(p[i], p[i + 1])) {
        throw InvalidArgumentError("active path uses a missing edge");
      }
    }
  }

  MeasureValue out;
  out.measure = Measure::DE;

  const std::set<std::vector<NodeId>> active(active_paths.begin(),
                                             active_paths.end());
  const auto all = directed_paths(dag, a_var, y_var, kMaxPaths);
  std::set<NodeId> active_children, inactive_children;
  for (const auto& p : all) {
    (active.count(p) ? active_children : inactive_children).insert(p[1]);
  }
  for (NodeId w : active_children) {
    if (inactive_children.count(w)) {
      out.identifiable = false;
      out.flags.push_back("recanting witness: '" + dag.name(w) +
                          "' carries both active and inactive influence");
    }
  }
  if (!out.identifiable) return out;

  std::map<NodeId, int> sigma, base;
  for (NodeId w : dag.children(a_var)) {
    sigma[w] = active_children.count(w) ? a1 : a0;
    base[w] = a0;
  }
  const PlugInOutcome lifted =
      intervened_outcome(d, dag, a_var, y_var, sigma, y_plus);
  const PlugInOutcome baseline =
      intervened_outcome(d, dag, a_var, y_var, base, y_plus);
  out.value = lifted.p - baseline.p;
  if (lifted.kept_mass < 1.0 - 1e-9 || baseline.kept_mass < 1.0 - 1e-9) {
    out.flags.push_back(
        "skipped unobserved strata covering " +
        percent(1.0 - std::min(lifted.kept_mass, baseline.kept_mass)) +
        " of plug-in mass (renormalized)");
  }
  return out;
}

MeasureValue natural_direct_effect(const Dataset& d, const MixedGraph& dag,
                                   int a_var, int y_var,
                                   const std::vector<int>& mediators, int a1,
                                   int a0, int y_plus) {
  check_pair(d, a_var, y_var, a1, a0, y_plus);
  check_graph_data(dag, d);
  for (int m : mediators) {
    if (m < 0 || m >= dag.n()) {
      throw InvalidArgumentError("mediator index is not a node of the graph");
    }
  }
  if (!dag.is_directed(a_var, y_var)) {
    MeasureValue out;
    out.measure = Measure::DE;
    return out;
  }
  MeasureValue out = path_specific_effect(
      d, dag, a_var, y_var, {{a_var, y_var}}, a1, a0, y_plus);
  out.measure = Measure::DE;
  return out;
}

std::pair<MeasureValue, MeasureValue> indirect_and_explained(
    const Dataset& d, const MixedGraph& dag, int a_var, int y_var,
    const RoleAssignment& roles, int a1, int a0, int y_plus) {
  check_pair(d, a_var, y_var, a1, a0, y_plus);
  check_graph_data(dag, d);
  if (!dag.is_dag()) {
    throw InvalidArgumentError("path effects need a fully directed DAG");
  }

  std::vector<std::vector<NodeId>> redlining_paths, explained_paths;
  for (const auto& p : directed_paths(dag, a_var, y_var, kMaxPaths)) {
    if (p.size() == 2) continue;  // the direct edge belongs to neither part
    bool touches_explaining = false;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      auto it = roles.mediator_kind.find(p[i]);
      if (it != roles.mediator_kind.end() && it->second == "explaining") {
        touches_explaining = true;
        break;
      }
    }
    (touches_explaining ? explained_paths : redlining_paths).push_back(p);
  }

  MeasureValue id = path_specific_effect(d, dag, a_var, y_var,
                                         redlining_paths, a1, a0, y_plus);
  id.measure = Measure::ID;
  MeasureValue ed = path_specific_effect(d, dag, a_var, y_var,
                                         explained_paths, a1, a0, y_plus);
  ed.measure = Measure::ED;
  return {id, ed};
}

FairnessReport measure_range(const MixedGraph& class_graph, const Dataset& d,
                             int a_var, int y_var,
                             const std::vector<VariableMeta>& schema,
                             const MeasureConfig& cfg) {
  check_pair(d, a_var, y_var, cfg.a1, cfg.a0, cfg.y_plus);
  check_graph_data(class_graph, d);
  if (!schema.empty() &&
      schema.size() != static_cast<std::size_t>(class_graph.n())) {
    throw InvalidArgumentError("schema has " + std::to_string(schema.size()) +
                               " entries for a graph with " +
                               std::to_string(class_graph.n()) + " nodes");
  }

  // Read circle marks as undirected so a partial ancestral graph can be
  // enumerated like a pattern. A bidirected edge survives the rewrite and
  // means a latent common cause: no DAG over the observed variables
  // represents it.
  MixedGraph pattern(class_graph.names());
  for (const Edge& e : class_graph.edges()) {
    const EdgeMark mu = e.mark_u == EdgeMark::Circle ? EdgeMark::Tail : e.mark_u;
    const EdgeMark mv = e.mark_v == EdgeMark::Circle ? EdgeMark::Tail : e.mark_v;
    if (mu == EdgeMark::Arrow && mv == EdgeMark::Arrow) {
      throw EmptyClassError("latent confounding between '" +
                            class_graph.name(e.u) + "' and '" +
                            class_graph.name(e.v) +
                            "' leaves every measure undefined");
    }
    pattern.add_edge(e.u, e.v, mu, mv);
  }

  const std::vector<MixedGraph> dags =
      enumerate_consistent_extensions(pattern, cfg.extension_cap);
  if (dags.empty()) {
    throw EmptyClassError("the pattern admits no DAG");
  }

  FairnessReport rep;
  rep.n_dags = dags.size();
  const double tv =
      total_variation(d, a_var, y_var, cfg.a1, cfg.a0, cfg.y_plus);

  for (std::size_t i = 0; i < dags.size(); ++i) {
    const MixedGraph& dag = dags[i];
    const std::string id = "dag_" + std::to_string(i);
    const RoleAssignment roles = classify_roles(dag, a_var, y_var, schema);

    MeasureValue tvv;
    tvv.measure = Measure::TV;
    tvv.value = tv;
    tvv.dag = id;
    rep.values.push_back(tvv);

    MeasureValue te =
        total_effect(d, dag, a_var, y_var, cfg.a1, cfg.a0, cfg.y_plus);
    te.dag = id;
    rep.values.push_back(std::move(te));

    MeasureValue ipw = ate_ipw(d, a_var, y_var, roles.confounders, cfg.a1,
                               cfg.a0, cfg.y_plus);
    ipw.dag = id;
    rep.values.push_back(std::move(ipw));

    MeasureValue de = natural_direct_effect(
        d, dag, a_var, y_var, roles.mediators, cfg.a1, cfg.a0, cfg.y_plus);
    de.dag = id;
    rep.values.push_back(std::move(de));

    auto [idv, edv] = indirect_and_explained(d, dag, a_var, y_var, roles,
                                             cfg.a1, cfg.a0, cfg.y_plus);
    idv.dag = id;
    edv.dag = id;
    rep.values.push_back(std::move(idv));
    rep.values.push_back(std::move(edv));

    // Structural check: a redlining path at all is already qualitative
    // evidence of unresolved discrimination, independent of magnitude.
    std::vector<std::string> offending;
    for (const auto& p : directed_paths(dag, a_var, y_var, kMaxPaths)) {
      if (p.size() == 2) continue;
      bool all_redlining = true;
      for (std::size_t k = 1; k + 1 < p.size(); ++k) {
        auto it = roles.mediator_kind.find(p[k]);
        all_redlining = all_redlining && it != roles.mediator_kind.end() &&
                        it->second == "redlining";
      }
      if (all_redlining) offending.push_back(path_to_string(dag, p));
    }
    if (!offending.empty()) {
      std::string line = id + ": redlining paths present:";
      for (const auto& s : offending) line += " [" + s + "]";
      rep.flags.push_back(std::move(line));
    }
  }

  for (Measure m : {Measure::TV, Measure::TE, Measure::AteIpw, Measure::DE,
                    Measure::ID, Measure::ED}) {
    bool any = false;
    MeasureRange r;
    for (const MeasureValue& mv : rep.values) {
      if (mv.measure != m || !mv.identifiable) continue;
      if (!any || mv.value < r.min_value) {
        r.min_value = mv.value;
        r.min_dag = mv.dag;
      }
      if (!any || mv.value > r.max_value) {
        r.max_value = mv.value;
        r.max_dag = mv.dag;
      }
      any = true;
    }
    if (!any) {
      rep.verdicts[m] = "unidentified";
      continue;
    }
    rep.ranges[m] = r;
    if (r.min_value > 0.0) {
      rep.verdicts[m] = "against";
    } else if (r.max_value < 0.0) {
      rep.verdicts[m] = "in favor";
    } else if (r.min_value == 0.0 && r.max_value == 0.0) {
      rep.verdicts[m] = "fair";
    } else {
      rep.verdicts[m] = "ambiguous";
    }
  }
  return rep;
}

}  // namespace causalfair
