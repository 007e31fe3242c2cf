#pragma once

#include <functional>
#include <string>
#include <vector>

#include "causalfair/dataset.hpp"
#include "causalfair/graph.hpp"

namespace causalfair {

enum class CiTestKind { FisherZ, GSquared, Oracle };

std::string to_string(CiTestKind kind);

struct TestConfig {
  CiTestKind kind = CiTestKind::FisherZ;
  double alpha = 0.01;

  static TestConfig fisher_z(double alpha = 0.01) { return {CiTestKind::FisherZ, alpha}; }
  static TestConfig g_squared(double alpha = 0.05) { return {CiTestKind::GSquared, alpha}; }
};

struct CiTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool independent = true;
  // Non-fatal caveats, e.g. "insufficient_samples" when a sparse
  // contingency table forced the conservative independent verdict.
  std::vector<std::string> flags;
};

// Conditional-independence test over column indices. Implementations
// capture their data source; keep it alive while the function is used.
using CiTestFn =
    std::function<CiTestResult(int x, int y, const std::vector<int>& z)>;

// Partial correlation of x and y given z via inversion of the working
// correlation matrix, Fisher z-transformed against a standard normal.
// All variables must be continuous and distinct; requires n > |z| + 3.
// Collinearity anywhere in {x, y} ∪ z surfaces as SingularCovariance.
CiTestResult fisher_z_test(const Dataset& d, int x, int y,
                           const std::vector<int>& z, const TestConfig& cfg);

// Likelihood-ratio independence test on the contingency table of x and
// y stratified by the joint levels of z. Degrees of freedom are
// (|x|-1)(|y|-1)·Π|z_i|. When n < 10·df the table is too sparse for the
// asymptotic null, so the result is independent with a flag instead of
// an error (biases discovery toward sparser graphs).
CiTestResult g_squared_test(const Dataset& d, int x, int y,
                            const std::vector<int>& z, const TestConfig& cfg);

// Exact test backed by d-separation in a known DAG; p-value is 1 or 0.
// Drives exactness tests of the discovery algorithms.
CiTestFn oracle_ci_test(const MixedGraph& truth);

// Dispatch on cfg.kind (fisher_z or g_squared; the oracle kind needs a
// truth graph and is rejected here). The dataset is captured by
// reference and must outlive the returned function.
CiTestFn make_ci_test(const Dataset& d, const TestConfig& cfg);

// Decomposable local score: fitted log-likelihood of `node` given
// `parents` minus (ln n / 2) · (free parameters). Linear-Gaussian for
// continuous nodes (params = |parents| + 2), multinomial CPT for
// categorical nodes (params = (levels-1)·Π parent-levels). Mixing
// families throws MixedFamily. The Gaussian variance is floored at
// 1e-12 so constant columns score finite instead of diverging.
double local_bic(const Dataset& d, int node, const std::vector<int>& parents);

struct OlsFit {
  std::vector<double> coefficients;  // aligned with the regressor list
  double intercept = 0.0;
  std::vector<double> residuals;     // empirical mean zero
};

// Least squares with intercept, solved on mean-centered columns.
// Requires n > |regressors| + 1; rank-deficient designs throw
// SingularDesign.
OlsFit ols_fit(const Dataset& d, int target,
               const std::vector<int>& regressors);

// Single-regressor residual without intercept on mean-centered columns:
// r = (x - mean) - (cov(x,y)/var(y)) · (y - mean). The result is exactly
// uncorrelated with y.
std::vector<double> pairwise_residual(const std::vector<double>& x,
                                      const std::vector<double>& y);
std::vector<double> pairwise_residual(const Dataset& d, int i, int j);

// Plug-in mutual information (nats) after equal-frequency binning.
// Boundary duplicates collapse, so heavily tied columns fall into fewer
// bins and a constant column contributes zero. Requires n >= 64.
double mutual_information(const std::vector<double>& x,
                          const std::vector<double>& y, int bins = 16);

}  // namespace causalfair
