#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wassproj/distributions.hpp"

namespace wassproj {

/// Synthetic scenario generators. All of them derive one sub-stream per
/// observation from the scenario seed, so the first m draws of a size-n
/// dataset coincide with the size-m dataset for the same seed.

/// Truncated Gaussians on [-10, 10] with bimodal means: the location is
/// 0.5 N(-3, 0.2^2) + 0.5 N(3, 0.2^2) and the scale is U[0.5, 2]. Each
/// distribution is returned as a 2048-bin histogram.
std::vector<EmpiricalDistribution> gen_gaussian_mix(int n, std::uint64_t seed);

/// Finite mixture draws mimicking a Dirichlet process mixture: weights are
/// Dirichlet(1/K, ..., 1/K), atoms are N(mu_k, sigma_k^2) with mu_k ~ N(0, 4)
/// and sigma_k ~ U(0.5, 2). A floor of 1e-5 is added to the density before
/// renormalizing so the quantile function is strictly increasing. 2048-bin
/// histograms on [-10, 10].
std::vector<EmpiricalDistribution> gen_dpm(int n, int clusters, std::uint64_t seed);

/// Bernstein polynomial densities on [0, 1]: weights w ~ Dirichlet(0.01) of
/// length `order` mix the Beta(j, order - j + 1) densities, j = 1..order.
/// 2048-bin histograms on [0, 1].
std::vector<EmpiricalDistribution> gen_bernstein(int n, int order, std::uint64_t seed);

/// Distribution-on-distribution regression pairs with an exactly linear
/// ground truth. Predictor quantile functions are cubic splines with 30
/// basis functions whose coefficients are a cumulative sum, starting at 0,
/// of Dirichlet(1, ..., 1) increments, so they map [0, 1] onto [0, 1]. The
/// operator matrix B has U(0, 0.5) first-row entries and U(0, 0.5) column
/// increments below, which keeps y = B z monotone. Both sides are released
/// as 1000 quantile samples.
struct RegressionScenario {
    std::vector<EmpiricalDistribution> predictors;
    std::vector<EmpiricalDistribution> responses;
    Eigen::MatrixXd z_coeffs;  // n x 30 cubic coefficients per predictor
    Eigen::MatrixXd y_coeffs;  // n x 30, rows are B * z_coeffs row
    Eigen::MatrixXd B;         // 30 x 30 ground-truth operator
};
RegressionScenario gen_regression_pairs(int n, std::uint64_t seed);

/// Functional-regression consistency scenario. Predictors are step quantile
/// functions on a 1000-point grid (Dirichlet(0.01) increments plus a U[0, 5]
/// shift). Responses apply the integral operator with kernel beta(t, s),
/// project the curve back onto monotone functions, and add N(0, 0.1^2)
/// noise at every grid point before releasing the values as samples.
/// variant 1: beta(t, s) = (t - 1/2)^3 + (s - 1/2)^3. variant 2: the same
/// kernel frozen to its value at the nearest upper 10x10 grid corner.
struct ConsistencyScenario {
    std::vector<EmpiricalDistribution> predictors;
    std::vector<EmpiricalDistribution> responses;
};
ConsistencyScenario gen_consistency_regression(int n, int variant, std::uint64_t seed);

/// Two-atom distributions: samples {v1, v1 + v2} with v1, v2 independent
/// max(0, N(0, 1)) draws. Their quantile functions are single steps, so the
/// dataset spans a two-dimensional cone face.
std::vector<EmpiricalDistribution> gen_step_quantile(int n, std::uint64_t seed);

}  // namespace wassproj
