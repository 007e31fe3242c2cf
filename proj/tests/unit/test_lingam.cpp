#include <cmath>
#include <random>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/errors.hpp"
#include "causalfair/graph_algorithms.hpp"
#include "causalfair/lingam.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace causalfair;
using testsupport::normal01;
using testsupport::u01;

namespace {

// Centered uniform noise with a chosen standard deviation. Uniform noise
// is strongly non-Gaussian, which is what the ordering step exploits.
double uniform_noise(std::mt19937_64& rng, double sd) {
  const double half_width = sd * std::sqrt(3.0);
  return (2.0 * u01(rng) - 1.0) * half_width;
}

Dataset chain_xyz(std::mt19937_64& rng, int n) {
  std::vector<double> x(n), y(n), z(n);
  for (int i = 0; i < n; ++i) {
    x[i] = uniform_noise(rng, 1.0);
    y[i] = x[i] + uniform_noise(rng, 1.0);
    z[i] = y[i] + uniform_noise(rng, 1.0);
  }
  return Dataset({Column::continuous("X", x), Column::continuous("Y", y),
                  Column::continuous("Z", z)});
}

// Six-variable linear system with uniform noise; X5 takes two parents
// with the largest weights and the widest noise.
Dataset six_variable_sem(std::mt19937_64& rng, int n) {
  std::vector<std::vector<double>> col(6, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    const double x1 = uniform_noise(rng, 1.0);
    const double x2 = 1.0 * x1 + uniform_noise(rng, 1.0);
    const double x3 = 0.9 * x1 + uniform_noise(rng, 1.0);
    const double x4 = 1.1 * x2 + uniform_noise(rng, 1.0);
    const double x5 = 1.3 * x2 + 1.2 * x3 + uniform_noise(rng, 1.3);
    const double x6 = 0.8 * x4 + 1.0 * x5 + uniform_noise(rng, 1.0);
    col[0][i] = x1;
    col[1][i] = x2;
    col[2][i] = x3;
    col[3][i] = x4;
    col[4][i] = x5;
    col[5][i] = x6;
  }
  std::vector<Column> cols;
  for (int j = 0; j < 6; ++j)
    cols.push_back(Column::continuous("X" + std::to_string(j + 1), col[j]));
  return Dataset(std::move(cols));
}

MixedGraph six_variable_truth() {
  MixedGraph g({"X1", "X2", "X3", "X4", "X5", "X6"});
  g.add_directed(0, 1);
  g.add_directed(0, 2);
  g.add_directed(1, 3);
  g.add_directed(1, 4);
  g.add_directed(2, 4);
  g.add_directed(3, 5);
  g.add_directed(4, 5);
  return g;
}

}  // namespace

TEST_CASE("t statistic prefers the true source") {
  SUBCASE("singleton candidate set scores zero") {
    std::vector<double> x(100);
    for (int i = 0; i < 100; ++i) x[i] = i * 0.1;
    const Dataset d({Column::continuous("X", x)});
    CHECK(t_statistic(d, 0, {0}) == 0.0);
  }

  SUBCASE("cause scores below effect under uniform noise") {
    int wins = 0;
    for (int s = 0; s < 20; ++s) {
      std::mt19937_64 rng(611000 + s);
      const int n = 10000;
      std::vector<double> x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x[i] = uniform_noise(rng, 1.0);
        y[i] = x[i] + uniform_noise(rng, 1.0);
      }
      const Dataset d(
          {Column::continuous("X", x), Column::continuous("Y", y)});
      wins += t_statistic(d, 0, {0, 1}) < t_statistic(d, 1, {0, 1}) ? 1 : 0;
    }
    CHECK(wins >= 19);
  }

  SUBCASE("independent columns score near zero both ways") {
    std::mt19937_64 rng(611100);
    const int n = 10000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = normal01(rng);
      y[i] = normal01(rng);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});
    CHECK(t_statistic(d, 0, {0, 1}) < 0.05);
    CHECK(t_statistic(d, 1, {0, 1}) < 0.05);
  }

  SUBCASE("bad candidate sets are rejected") {
    std::vector<double> x(100), y(100);
    std::mt19937_64 rng(611200);
    for (int i = 0; i < 100; ++i) {
      x[i] = normal01(rng);
      y[i] = normal01(rng);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});
    CHECK_THROWS_AS(t_statistic(d, 0, {1}), InvalidArgumentError);
    CHECK_THROWS_AS(t_statistic(d, 0, {0, 0}), InvalidArgumentError);
    CHECK_THROWS_AS(t_statistic(d, 0, {0, 5}), InvalidArgumentError);
  }
}

TEST_CASE("causal order recovers a chain across seeds") {
  int exact = 0;
  for (int s = 0; s < 20; ++s) {
    std::mt19937_64 rng(612000 + s);
    const Dataset d = chain_xyz(rng, 10000);
    const CausalOrder result = causal_order(d);

    // Permutation validity and argmin bookkeeping hold on every seed.
    std::vector<int> sorted = result.order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2});
    REQUIRE(result.t_scores.size() == 3);
    for (std::size_t step = 0; step < result.t_scores.size(); ++step) {
      double best = result.t_scores[step].front().second;
      double chosen = -1.0;
      for (const auto& [candidate, value] : result.t_scores[step]) {
        best = std::min(best, value);
        if (candidate == result.order[step]) chosen = value;
      }
      CHECK(chosen == best);
    }

    exact += result.order == std::vector<int>{0, 1, 2} ? 1 : 0;
  }
  CHECK(exact >= 18);
}

TEST_CASE("causal order handles edge cases") {
  SUBCASE("single variable") {
    std::vector<double> x(64);
    for (int i = 0; i < 64; ++i) x[i] = i;
    const Dataset d({Column::continuous("X", x)});
    const CausalOrder result = causal_order(d);
    CHECK(result.order == std::vector<int>{0});
    REQUIRE(result.t_scores.size() == 1);
    CHECK(result.t_scores[0].size() == 1);
    CHECK(result.t_scores[0][0].second == 0.0);
  }

  SUBCASE("gaussian noise still yields a permutation") {
    std::mt19937_64 rng(612100);
    const int n = 5000;
    std::vector<double> x(n), y(n), z(n);
    for (int i = 0; i < n; ++i) {
      x[i] = normal01(rng);
      y[i] = x[i] + normal01(rng);
      z[i] = y[i] + normal01(rng);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y),
                     Column::continuous("Z", z)});
    const CausalOrder result = causal_order(d);
    std::vector<int> sorted = result.order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2});
  }

  SUBCASE("constant column trips the zero-variance guard") {
    std::mt19937_64 rng(612200);
    std::vector<double> x(100), c(100, 2.5);
    for (int i = 0; i < 100; ++i) x[i] = normal01(rng);
    const Dataset d({Column::continuous("X", x), Column::continuous("C", c)});
    CHECK_THROWS_AS(causal_order(d), ZeroVarianceError);
  }

  SUBCASE("categorical columns are rejected") {
    const Dataset d({Column::categorical("A", {0, 1, 0, 1}, 2)});
    CHECK_THROWS_AS(causal_order(d), MixedFamilyError);
  }
}

TEST_CASE("first selection is invariant to rescaling a column") {
  for (int scaled = 0; scaled < 3; ++scaled) {
    std::mt19937_64 rng(612300);
    const Dataset d = chain_xyz(rng, 10000);
    const CausalOrder base = causal_order(d);

    std::vector<Column> cols;
    for (int j = 0; j < 3; ++j) {
      std::vector<double> values = d.cont(j);
      if (j == scaled)
        for (double& v : values) v *= 10.0;
      cols.push_back(Column::continuous(d.name(j), values));
    }
    const CausalOrder rescaled = causal_order(Dataset(std::move(cols)));
    CHECK(rescaled.order[0] == base.order[0]);
  }
}

TEST_CASE("adjacency estimation recovers regression weights") {
  SUBCASE("two-variable slope lands within three standard errors") {
    std::mt19937_64 rng(613000);
    const int n = 5000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = uniform_noise(rng, 1.0);
      y[i] = 2.0 * x[i] + uniform_noise(rng, 1.0);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});
    const WeightedDag dag = estimate_adjacency(d, {{0, 1}, {}}, 0.05);

    // Reference standard error from first principles on the same sample.
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
      mx += x[i] / n;
      my += y[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double fitted = my + slope * (x[i] - mx);
      rss += (y[i] - fitted) * (y[i] - fitted);
    }
    const double se = std::sqrt(rss / (n - 2) / sxx);
    CHECK(std::abs(dag.b[1][0] - 2.0) < 3.0 * se);
    CHECK(dag.b[0][1] == 0.0);
  }

  SUBCASE("independent columns prune to nothing") {
    int clean = 0;
    for (int s = 0; s < 20; ++s) {
      std::mt19937_64 rng(613100 + s);
      const int n = 10000;
      std::vector<Column> cols;
      for (int j = 0; j < 3; ++j) {
        std::vector<double> values(n);
        for (double& v : values) v = normal01(rng);
        cols.push_back(Column::continuous("V" + std::to_string(j), values));
      }
      const Dataset d(std::move(cols));
      const WeightedDag dag = estimate_adjacency(d, {{2, 0, 1}, {}}, 0.05);
      bool empty = true;
      for (const auto& row : dag.b)
        for (double v : row) empty = empty && v == 0.0;
      clean += empty ? 1 : 0;
    }
    CHECK(clean >= 19);
  }

  SUBCASE("zero threshold keeps the dense estimate") {
    std::mt19937_64 rng(613200);
    const int n = 1000;
    std::vector<Column> cols;
    for (int j = 0; j < 3; ++j) {
      std::vector<double> values(n);
      for (double& v : values) v = normal01(rng);
      cols.push_back(Column::continuous("V" + std::to_string(j), values));
    }
    const Dataset d(std::move(cols));
    const std::vector<int> order = {1, 2, 0};
    const WeightedDag dag = estimate_adjacency(d, {order, {}}, 0.0);
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        const auto pos = [&](int v) {
          return std::find(order.begin(), order.end(), v) - order.begin();
        };
        if (pos(q) < pos(p))
          CHECK(dag.b[p][q] != 0.0);
        else
          CHECK(dag.b[p][q] == 0.0);
      }
  }

  SUBCASE("noiseless linear data reproduces coefficients exactly") {
    std::mt19937_64 rng(613300);
    const int n = 1000;
    std::vector<double> x(n), w(n), v(n), t(n);
    for (int i = 0; i < n; ++i) {
      x[i] = uniform_noise(rng, 1.0);
      w[i] = uniform_noise(rng, 1.0);
      v[i] = uniform_noise(rng, 1.0);
      t[i] = 2.0 * x[i] - 1.0 * w[i] + 0.5 * v[i];
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("W", w),
                     Column::continuous("V", v), Column::continuous("T", t)});
    const WeightedDag dag = estimate_adjacency(d, {{0, 1, 2, 3}, {}}, 0.05);
    CHECK(dag.b[3][0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(dag.b[3][1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(dag.b[3][2] == doctest::Approx(0.5).epsilon(1e-9));
    // The exogenous rows carry only sampling noise, which the threshold
    // removes.
    CHECK(dag.b[1][0] == 0.0);
    CHECK(dag.b[2][0] == 0.0);
    CHECK(dag.b[2][1] == 0.0);
  }

  SUBCASE("a broken order is rejected") {
    std::vector<double> x(100), y(100);
    std::mt19937_64 rng(613400);
    for (int i = 0; i < 100; ++i) {
      x[i] = normal01(rng);
      y[i] = normal01(rng);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});
    CHECK_THROWS_AS(estimate_adjacency(d, {{0, 0}, {}}, 0.05),
                    InvalidArgumentError);
    CHECK_THROWS_AS(estimate_adjacency(d, {{0}, {}}, 0.05),
                    InvalidArgumentError);
    CHECK_THROWS_AS(estimate_adjacency(d, {{0, 1}, {}}, -0.1),
                    InvalidArgumentError);
  }
}

TEST_CASE("direct lingam recovers the six-variable system") {
  std::mt19937_64 rng(614000);
  const Dataset d = six_variable_sem(rng, 10000);
  const LingamResult result = run_direct_lingam(d);

  CHECK(result.graph == six_variable_truth());
  CHECK(result.graph.is_dag());

  // Every recovered edge points from earlier to later in the order.
  std::vector<int> position(6);
  for (int p = 0; p < 6; ++p) position[result.order.order[p]] = p;
  for (const Edge& e : result.graph.edges()) {
    const int from = result.graph.is_directed(e.u, e.v) ? e.u : e.v;
    const int to = from == e.u ? e.v : e.u;
    CHECK(position[from] < position[to]);
  }
}

TEST_CASE("direct lingam degrades safely on gaussian noise") {
  std::mt19937_64 rng(614100);
  const int n = 10000;
  std::vector<std::vector<double>> col(6, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    const double x1 = normal01(rng);
    const double x2 = 1.0 * x1 + normal01(rng);
    const double x3 = 0.9 * x1 + normal01(rng);
    const double x4 = 1.1 * x2 + normal01(rng);
    const double x5 = 1.3 * x2 + 1.2 * x3 + 1.3 * normal01(rng);
    const double x6 = 0.8 * x4 + 1.0 * x5 + normal01(rng);
    col[0][i] = x1;
    col[1][i] = x2;
    col[2][i] = x3;
    col[3][i] = x4;
    col[4][i] = x5;
    col[5][i] = x6;
  }
  std::vector<Column> cols;
  for (int j = 0; j < 6; ++j)
    cols.push_back(Column::continuous("X" + std::to_string(j + 1), col[j]));
  const Dataset d(std::move(cols));

  // No recovery promise without non-Gaussian noise; the output must
  // still be a well-formed DAG over a valid permutation.
  const LingamResult result = run_direct_lingam(d);
  CHECK(result.graph.is_dag());
  std::vector<int> sorted = result.order.order;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("direct lingam honours prior knowledge") {
  SUBCASE("forbidding a variable as a cause pushes it to the back") {
    std::mt19937_64 rng(614200);
    const Dataset d = chain_xyz(rng, 10000);
    BackgroundKnowledge prior;
    prior.forbid(0, 1);
    prior.forbid(0, 2);
    const LingamResult result = run_direct_lingam(d, prior);
    CHECK(result.order.order.back() == 0);
    CHECK(result.weights.b[1][0] == 0.0);
    CHECK(result.weights.b[2][0] == 0.0);
  }

  SUBCASE("a forbidden entry is zeroed even when the fit is strong") {
    std::mt19937_64 rng(614300);
    const int n = 5000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = uniform_noise(rng, 1.0);
      y[i] = 2.0 * x[i] + uniform_noise(rng, 1.0);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});
    BackgroundKnowledge prior;
    prior.forbid(0, 1);
    const WeightedDag dag = estimate_adjacency(d, {{0, 1}, {}}, 0.05, prior);
    CHECK(dag.b[1][0] == 0.0);
  }

  SUBCASE("a required edge survives pruning and fixes the order") {
    std::mt19937_64 rng(614400);
    const int n = 20000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = uniform_noise(rng, 1.0);
      y[i] = 0.02 * x[i] + uniform_noise(rng, 1.0);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});

    const LingamResult plain = run_direct_lingam(d);
    CHECK(plain.graph.edges().empty());

    BackgroundKnowledge prior;
    prior.require(0, 1);
    const LingamResult forced = run_direct_lingam(d, prior);
    CHECK(forced.order.order == std::vector<int>{0, 1});
    CHECK(forced.weights.b[1][0] != 0.0);
    CHECK(forced.graph.is_directed(0, 1));
  }

  SUBCASE("tiers reorder against the data's preference") {
    std::mt19937_64 rng(614500);
    const Dataset d = chain_xyz(rng, 10000);
    BackgroundKnowledge prior;
    prior.set_tier(2, 0);
    prior.set_tier(0, 1);
    const CausalOrder result = causal_order(d, prior);
    std::vector<int> position(3);
    for (int p = 0; p < 3; ++p) position[result.order[p]] = p;
    CHECK(position[2] < position[0]);
  }

  SUBCASE("contradictory constraints fail loudly") {
    std::mt19937_64 rng(614600);
    const int n = 200;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = normal01(rng);
      y[i] = normal01(rng);
    }
    const Dataset d({Column::continuous("X", x), Column::continuous("Y", y)});
    BackgroundKnowledge prior;
    prior.require(0, 1);
    prior.require(1, 0);
    CHECK_THROWS_AS(causal_order(d, prior), InvalidArgumentError);
  }
}

TEST_CASE("direct lingam trivial shapes") {
  std::vector<double> x(64);
  for (int i = 0; i < 64; ++i) x[i] = std::sin(i * 0.7);
  const Dataset d({Column::continuous("X", x)});
  const LingamResult result = run_direct_lingam(d);
  CHECK(result.graph.edges().empty());
  CHECK(result.order.order == std::vector<int>{0});
  CHECK(result.weights.b.size() == 1);

  CHECK_THROWS_AS(Dataset(std::vector<Column>{}), EmptyDatasetError);
}
