#include "causalfair/lingam.hpp"

#include <algorithm>
#include <string>

#include "causalfair/errors.hpp"
#include "causalfair/stats.hpp"

namespace causalfair {
namespace {

void check_continuous(const Dataset& d, const char* what) {
  if (!d.all_continuous())
    throw MixedFamilyError(std::string(what) +
                           " needs an all-continuous dataset");
}

// T over raw working columns: how independent column j looks from the
// residuals of the other members of u regressed on it.
double t_over_columns(const std::vector<std::vector<double>>& cols, int j,
                      const std::vector<int>& u) {
  double total = 0.0;
  for (int i : u) {
    if (i == j) continue;
    total += mutual_information(cols[j], pairwise_residual(cols[i], cols[j]));
  }
  return total;
}

// True while the prior forbids j from preceding some still-unordered
// variable: j may not be oriented towards it, or an edge into j from it
// is required.
bool excluded_from_argmin(const BackgroundKnowledge& prior, int j,
                          const std::vector<int>& remaining) {
  for (int i : remaining) {
    if (i == j) continue;
    if (prior.forbids_orientation(j, i)) return true;
    if (prior.is_required(i, j)) return true;
  }
  return false;
}

}  // namespace

double t_statistic(const Dataset& d, int j, const std::vector<int>& u) {
  check_continuous(d, "the residual-independence statistic");
  if (std::find(u.begin(), u.end(), j) == u.end())
    throw InvalidArgumentError("variable " + std::to_string(j) +
                               " is not a member of the candidate set");
  {
    std::vector<int> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgumentError("candidate set has repeated members");
    if (sorted.front() < 0 || sorted.back() >= d.num_vars())
      throw InvalidArgumentError("candidate set member out of range");
  }
  std::vector<std::vector<double>> cols(d.num_vars());
  for (int i : u) cols[i] = d.cont(i);
  return t_over_columns(cols, j, u);
}

CausalOrder causal_order(const Dataset& d, const BackgroundKnowledge& prior) {
  check_continuous(d, "causal ordering");
  prior.validate(d.num_vars());

  std::vector<std::vector<double>> work(d.num_vars());
  for (int i = 0; i < d.num_vars(); ++i) work[i] = d.cont(i);

  std::vector<int> remaining(d.num_vars());
  for (int i = 0; i < d.num_vars(); ++i) remaining[i] = i;

  CausalOrder result;
  while (!remaining.empty()) {
    std::vector<std::pair<int, double>> scores;
    for (int j : remaining) {
      if (excluded_from_argmin(prior, j, remaining)) continue;
      scores.emplace_back(j, t_over_columns(work, j, remaining));
    }
    if (scores.empty())
      throw InvalidArgumentError(
          "prior knowledge excludes every remaining candidate from the "
          "causal order");

    int chosen = scores.front().first;
    double best = scores.front().second;
    for (const auto& [candidate, value] : scores) {
      if (value < best) {
        chosen = candidate;
        best = value;
      }
    }
    result.order.push_back(chosen);
    result.t_scores.push_back(std::move(scores));

    remaining.erase(
        std::find(remaining.begin(), remaining.end(), chosen));
    for (int i : remaining)
      work[i] = pairwise_residual(work[i], work[chosen]);
  }
  return result;
}

WeightedDag estimate_adjacency(const Dataset& d, const CausalOrder& order,
                               double threshold,
                               const BackgroundKnowledge& prior) {
  check_continuous(d, "adjacency estimation");
  if (threshold < 0.0)
    throw InvalidArgumentError("pruning threshold must be non-negative");
  {
    std::vector<int> sorted = order.order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < d.num_vars(); ++i)
      if (i >= static_cast<int>(sorted.size()) || sorted[i] != i)
        throw InvalidArgumentError(
            "causal order is not a permutation of the variables");
  }
  prior.validate(d.num_vars());

  WeightedDag dag;
  dag.threshold = threshold;
  dag.b.assign(d.num_vars(), std::vector<double>(d.num_vars(), 0.0));

  std::vector<int> predecessors;
  for (int pos = 0; pos < static_cast<int>(order.order.size()); ++pos) {
    const int j = order.order[pos];
    if (pos > 0) {
      const OlsFit fit = ols_fit(d, j, predecessors);
      for (int q = 0; q < static_cast<int>(predecessors.size()); ++q) {
        const int i = predecessors[q];
        double value = fit.coefficients[q];
        if (prior.forbids_orientation(i, j))
          value = 0.0;
        else if (std::abs(value) < threshold && !prior.is_required(i, j))
          value = 0.0;
        dag.b[j][i] = value;
      }
    }
    predecessors.push_back(j);
  }
  return dag;
}

LingamResult run_direct_lingam(const Dataset& d,
                               const BackgroundKnowledge& prior,
                               double threshold) {
  LingamResult result{causal_order(d, prior), {}, MixedGraph(d.names())};
  result.weights = estimate_adjacency(d, result.order, threshold, prior);
  for (int j = 0; j < d.num_vars(); ++j)
    for (int i = 0; i < d.num_vars(); ++i)
      if (result.weights.b[j][i] != 0.0) result.graph.add_directed(i, j);
  return result;
}

}  // namespace causalfair
