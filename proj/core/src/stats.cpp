#include "causalfair/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <unordered_map>

#include "causalfair/graph_algorithms.hpp"

namespace causalfair {

namespace {

constexpr double kVarianceFloor = 1e-12;

void check_alpha(const TestConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw InvalidArgumentError("alpha must lie in (0,1), got " +
                               std::to_string(cfg.alpha));
}

// x, y and the conditioning set must name distinct columns.
void check_distinct(const Dataset& d, int x, int y,
                    const std::vector<int>& z) {
  std::vector<int> all = z;
  all.push_back(x);
  all.push_back(y);
  for (int v : all)
    if (v < 0 || v >= d.num_vars())
      throw InvalidArgumentError("variable index " + std::to_string(v) +
                                 " out of range");
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw InvalidArgumentError("test variables must be distinct");
}

Eigen::VectorXd centered(const std::vector<double>& v) {
  Eigen::Map<const Eigen::VectorXd> m(v.data(),
                                      static_cast<Eigen::Index>(v.size()));
  return m.array() - m.mean();
}

}  // namespace

std::string to_string(CiTestKind kind) {
  switch (kind) {
    case CiTestKind::FisherZ: return "fisher_z";
    case CiTestKind::GSquared: return "g_squared";
    case CiTestKind::Oracle: return "oracle";
  }
  return "unknown";
}

CiTestResult fisher_z_test(const Dataset& d, int x, int y,
                           const std::vector<int>& z, const TestConfig& cfg) {
  check_alpha(cfg);
  check_distinct(d, x, y, z);
  std::vector<int> vars = {x, y};
  vars.insert(vars.end(), z.begin(), z.end());
  for (int v : vars)
    if (!d.is_continuous(v))
      throw MixedFamilyError("fisher_z_test needs continuous variables; '" +
                             d.name(v) + "' is categorical");
  const int n = d.n();
  const int k = static_cast<int>(z.size());
  if (n <= k + 3)
    throw InsufficientSamplesError(
        "fisher_z_test needs n > |z| + 3 rows, got n = " + std::to_string(n) +
        " with |z| = " + std::to_string(k));

  // Columns are normalized to unit L2 norm so cross products are exactly
  // the correlation matrix entries.
  const int m = k + 2;
  Eigen::MatrixXd cols(n, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd c = centered(d.cont(vars[static_cast<std::size_t>(j)]));
    const double norm = c.norm();
    if (norm <= 0.0)
      throw SingularCovarianceError("column '" +
                                    d.name(vars[static_cast<std::size_t>(j)]) +
                                    "' has zero variance");
    cols.col(j) = c / norm;
  }
  const Eigen::MatrixXd corr = cols.transpose() * cols;

  double rho;
  if (k == 0) {
    rho = corr(0, 1);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(corr);
    if (!lu.isInvertible())
      throw SingularCovarianceError(
          "correlation matrix is singular (collinear variables) testing '" +
          d.name(x) + "' vs '" + d.name(y) + "'");
    const Eigen::MatrixXd prec = lu.inverse();
    rho = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
  }
  rho = std::clamp(rho, -1.0, 1.0);

  // atanh(±1) is ±inf; erfc then gives p = 0, which is the right verdict
  // for an exactly deterministic relationship.
  const double stat = std::sqrt(static_cast<double>(n - k) - 3.0) *
                      std::atanh(rho);
  const double p = std::erfc(std::abs(stat) / std::sqrt(2.0));
  return {stat, p, p >= cfg.alpha, {}};
}

CiTestResult g_squared_test(const Dataset& d, int x, int y,
                            const std::vector<int>& z, const TestConfig& cfg) {
  check_alpha(cfg);
  check_distinct(d, x, y, z);
  std::vector<int> vars = {x, y};
  vars.insert(vars.end(), z.begin(), z.end());
  for (int v : vars)
    if (!d.is_categorical(v))
      throw MixedFamilyError("g_squared_test needs categorical variables; '" +
                             d.name(v) + "' is continuous");
  const int n = d.n();
  const int lx = d.levels(x);
  const int ly = d.levels(y);
  double df = (lx - 1.0) * (ly - 1.0);
  for (int v : z) df *= d.levels(v);

  // Sparse-table heuristic: without roughly ten samples per degree of
  // freedom the asymptotic chi-square null is unreliable, so report
  // independence with a flag rather than an arbitrary verdict.
  if (static_cast<double>(n) < 10.0 * df)
    return {0.0, 1.0, true, {"insufficient_samples"}};

  long long strata = 1;
  for (int v : z) strata *= d.levels(v);
  std::vector<long long> table(
      static_cast<std::size_t>(strata) * static_cast<std::size_t>(lx) *
          static_cast<std::size_t>(ly),
      0);
  const std::vector<int>& cx = d.codes(x);
  const std::vector<int>& cy = d.codes(y);
  for (int r = 0; r < n; ++r) {
    long long s = 0;
    for (int v : z) s = s * d.levels(v) + d.codes(v)[static_cast<std::size_t>(r)];
    const std::size_t cell = static_cast<std::size_t>(
        (s * lx + cx[static_cast<std::size_t>(r)]) * ly +
        cy[static_cast<std::size_t>(r)]);
    ++table[cell];
  }

  double g2 = 0.0;
  std::vector<double> row_sum(static_cast<std::size_t>(lx));
  std::vector<double> col_sum(static_cast<std::size_t>(ly));
  for (long long s = 0; s < strata; ++s) {
    const long long* cells = table.data() + s * lx * ly;
    std::fill(row_sum.begin(), row_sum.end(), 0.0);
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    double total = 0.0;
    for (int a = 0; a < lx; ++a)
      for (int b = 0; b < ly; ++b) {
        const double obs = static_cast<double>(cells[a * ly + b]);
        row_sum[static_cast<std::size_t>(a)] += obs;
        col_sum[static_cast<std::size_t>(b)] += obs;
        total += obs;
      }
    if (total <= 0.0) continue;
    for (int a = 0; a < lx; ++a)
      for (int b = 0; b < ly; ++b) {
        const double obs = static_cast<double>(cells[a * ly + b]);
        if (obs <= 0.0) continue;  // empty cells contribute nothing
        const double expected = row_sum[static_cast<std::size_t>(a)] *
                                col_sum[static_cast<std::size_t>(b)] / total;
        g2 += obs * std::log(obs / expected);
      }
  }
  g2 = std::max(2.0 * g2, 0.0);
  const double p = boost::math::gamma_q(df / 2.0, g2 / 2.0);
  return {g2, p, p >= cfg.alpha, {}};
}

CiTestFn oracle_ci_test(const MixedGraph& truth) {
  if (!truth.is_dag())
    throw InvalidArgumentError("oracle_ci_test needs a DAG truth graph");
  return [g = truth](int x, int y, const std::vector<int>& z) {
    const bool ind = d_separated(g, x, y, z);
    return CiTestResult{ind ? 0.0 : 1.0, ind ? 1.0 : 0.0, ind, {}};
  };
}

CiTestFn make_ci_test(const Dataset& d, const TestConfig& cfg) {
  check_alpha(cfg);
  switch (cfg.kind) {
    case CiTestKind::FisherZ:
      return [&d, cfg](int x, int y, const std::vector<int>& z) {
        return fisher_z_test(d, x, y, z, cfg);
      };
    case CiTestKind::GSquared:
      return [&d, cfg](int x, int y, const std::vector<int>& z) {
        return g_squared_test(d, x, y, z, cfg);
      };
    case CiTestKind::Oracle:
      throw InvalidArgumentError(
          "the oracle test is built from a truth graph via oracle_ci_test");
  }
  throw InvalidArgumentError("unknown test kind");
}

double local_bic(const Dataset& d, int node, const std::vector<int>& parents) {
  {
    std::vector<int> all = parents;
    all.push_back(node);
    for (int v : all)
      if (v < 0 || v >= d.num_vars())
        throw InvalidArgumentError("variable index " + std::to_string(v) +
                                   " out of range");
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw InvalidArgumentError("node and parents must be distinct");
  }
  const int n = d.n();
  const double log_n = std::log(static_cast<double>(n));

  if (d.is_continuous(node)) {
    for (int p : parents)
      if (!d.is_continuous(p))
        throw MixedFamilyError("continuous node '" + d.name(node) +
                               "' cannot be scored with categorical parent '" +
                               d.name(p) + "'");
    const OlsFit fit = ols_fit(d, node, parents);
    double rss = 0.0;
    for (double r : fit.residuals) rss += r * r;
    const double sigma2 = std::max(rss / n, kVarianceFloor);
    const double ll =
        -0.5 * n * (std::log(2.0 * M_PI * sigma2) + 1.0);
    const double params = static_cast<double>(parents.size()) + 2.0;
    return ll - 0.5 * log_n * params;
  }

  for (int p : parents)
    if (!d.is_categorical(p))
      throw MixedFamilyError("categorical node '" + d.name(node) +
                             "' cannot be scored with continuous parent '" +
                             d.name(p) + "'");
  // Sparse accumulation: only occupied parent configurations matter and
  // empty cells contribute zero log-likelihood.
  std::unordered_map<long long, long long> stratum_total;
  std::unordered_map<long long, long long> cell_count;
  const int lx = d.levels(node);
  const std::vector<int>& node_codes = d.codes(node);
  for (int r = 0; r < n; ++r) {
    long long s = 0;
    for (int p : parents)
      s = s * d.levels(p) + d.codes(p)[static_cast<std::size_t>(r)];
    ++stratum_total[s];
    ++cell_count[s * lx + node_codes[static_cast<std::size_t>(r)]];
  }
  double ll = 0.0;
  for (const auto& [key, cnt] : cell_count) {
    const double total = static_cast<double>(stratum_total.at(key / lx));
    ll += static_cast<double>(cnt) *
          std::log(static_cast<double>(cnt) / total);
  }
  double params = lx - 1.0;
  for (int p : parents) params *= d.levels(p);
  return ll - 0.5 * log_n * params;
}

OlsFit ols_fit(const Dataset& d, int target,
               const std::vector<int>& regressors) {
  {
    std::vector<int> all = regressors;
    all.push_back(target);
    for (int v : all) {
      if (v < 0 || v >= d.num_vars())
        throw InvalidArgumentError("variable index " + std::to_string(v) +
                                   " out of range");
      if (!d.is_continuous(v))
        throw MixedFamilyError("ols_fit needs continuous columns; '" +
                               d.name(v) + "' is categorical");
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw InvalidArgumentError("target and regressors must be distinct");
  }
  const int n = d.n();
  const int k = static_cast<int>(regressors.size());
  if (n <= k + 1)
    throw InsufficientSamplesError("ols_fit needs n > |regressors| + 1, got " +
                                   std::to_string(n) + " rows for " +
                                   std::to_string(k) + " regressors");

  Eigen::Map<const Eigen::VectorXd> y(d.cont(target).data(), n);
  const double mean_y = y.mean();
  const Eigen::VectorXd yc = y.array() - mean_y;

  OlsFit fit;
  if (k == 0) {
    fit.intercept = mean_y;
    fit.residuals.assign(yc.data(), yc.data() + n);
    return fit;
  }

  Eigen::MatrixXd xc(n, k);
  Eigen::VectorXd means(k);
  for (int j = 0; j < k; ++j) {
    Eigen::Map<const Eigen::VectorXd> col(
        d.cont(regressors[static_cast<std::size_t>(j)]).data(), n);
    means(j) = col.mean();
    xc.col(j) = col.array() - means(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
  if (qr.rank() < k)
    throw SingularDesignError("design matrix for '" + d.name(target) +
                              "' is rank deficient");
  const Eigen::VectorXd b = qr.solve(yc);
  const Eigen::VectorXd res = yc - xc * b;

  fit.coefficients.assign(b.data(), b.data() + k);
  fit.intercept = mean_y - b.dot(means);
  fit.residuals.assign(res.data(), res.data() + n);
  return fit;
}

std::vector<double> pairwise_residual(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  if (x.size() != y.size())
    throw InvalidArgumentError("pairwise_residual needs equal-length columns");
  if (x.empty()) throw EmptyDatasetError("pairwise_residual on empty columns");
  const Eigen::VectorXd xc = centered(x);
  const Eigen::VectorXd yc = centered(y);
  const double var_y = yc.squaredNorm();
  if (var_y <= 0.0)
    throw ZeroVarianceError("pairwise_residual regressor is constant");
  const double b = xc.dot(yc) / var_y;
  const Eigen::VectorXd r = xc - b * yc;
  return std::vector<double>(r.data(), r.data() + r.size());
}

std::vector<double> pairwise_residual(const Dataset& d, int i, int j) {
  return pairwise_residual(d.cont(i), d.cont(j));
}

double mutual_information(const std::vector<double>& x,
                          const std::vector<double>& y, int bins) {
  if (x.size() != y.size())
    throw InvalidArgumentError("mutual_information needs equal-length columns");
  if (bins < 2) throw InvalidArgumentError("mutual_information needs >= 2 bins");
  const std::size_t n = x.size();
  if (n < 64)
    throw InsufficientSamplesError(
        "mutual_information needs at least 64 rows, got " + std::to_string(n));

  // Equal-frequency boundaries; duplicates collapse so tied values share
  // a bin and a constant column degenerates to a single bin.
  const auto boundaries = [&](const std::vector<double>& v) {
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(bins) - 1);
    for (int b = 1; b < bins; ++b)
      e.push_back(s[static_cast<std::size_t>(b) * n / bins]);
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
  };
  const auto bin_of = [](const std::vector<double>& e, double v) {
    return static_cast<std::size_t>(
        std::upper_bound(e.begin(), e.end(), v) - e.begin());
  };

  const std::vector<double> ex = boundaries(x);
  const std::vector<double> ey = boundaries(y);
  const std::size_t nbx = ex.size() + 1;
  const std::size_t nby = ey.size() + 1;

  std::vector<long long> joint(nbx * nby, 0);
  std::vector<long long> mx(nbx, 0);
  std::vector<long long> my(nby, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t bx = bin_of(ex, x[r]);
    const std::size_t by = bin_of(ey, y[r]);
    ++joint[bx * nby + by];
    ++mx[bx];
    ++my[by];
  }
  double mi = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t a = 0; a < nbx; ++a)
    for (std::size_t b = 0; b < nby; ++b) {
      const long long c = joint[a * nby + b];
      if (c == 0) continue;
      mi += (c / dn) *
            std::log(c * dn / (static_cast<double>(mx[a]) *
                               static_cast<double>(my[b])));
    }
  return std::max(mi, 0.0);
}

}  // namespace causalfair
