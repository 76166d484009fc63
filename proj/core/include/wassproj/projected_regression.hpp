#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wassproj/distributions.hpp"
#include "wassproj/spline_basis.hpp"

namespace wassproj {

/// Moment matrices of the penalized functional linear model in spline
/// coordinates, for one predictor block:
///   C_hat = (1/n) sum (E a_i^z)(E a_i^z)',   D_hat = (1/n) sum (E a_i^z)(E a_i^y)',
///   C_rho = E (x) (C_hat + rho Eprime),      P = Eprime (x) E + E (x) Eprime,
/// with (x) the Kronecker product and column-major vectorization throughout.
struct MomentMatrices {
    Eigen::MatrixXd C_hat;
    Eigen::MatrixXd D_hat;
    Eigen::MatrixXd C_rho;
    Eigen::MatrixXd P;
};

MomentMatrices moment_matrices(const std::vector<Eigen::VectorXd>& az,
                               const std::vector<Eigen::VectorXd>& ay,
                               const Eigen::MatrixXd& E, const Eigen::MatrixXd& Eprime,
                               double rho);

/// Fitted distribution-on-distribution regression: the response coefficients
/// follow theta_alpha + sum_j Theta[j] E a^{(z_j)}, followed by metric
/// projection onto the monotone cone at prediction time.
struct RegressionModel {
    SplineBasis basis;
    Eigen::VectorXd theta_alpha;
    std::vector<Eigen::MatrixXd> thetas;  // one J x J kernel matrix per predictor
    double rho = 0.0;
    bool intercept = true;
    std::vector<Eigen::VectorXd> z_means;  // stored for reference; empty without intercept
    Eigen::VectorXd y_mean;

    Eigen::MatrixXd E;
    Eigen::MatrixXd G;

    int predictors() const { return static_cast<int>(thetas.size()); }
};

/// Fits the penalized least-squares estimator in closed form: the stacked
/// Kronecker system over all predictor blocks (a single block reduces to
/// vec(Theta) = (C_rho + rho P)^{-1} vec(D_hat)), with the blockwise
/// derivative penalty sharing one rho. Data are centered when
/// include_intercept is set and the intercept is recovered from the means.
/// Requires rho > 0 and n >= 2; throws SingularFitError when the normal
/// system is not positive definite.
RegressionModel fit_regression(const std::vector<std::vector<QuantileSpline>>& Z,
                               const std::vector<QuantileSpline>& Y, double rho,
                               bool include_intercept = true);

/// Predicted response for one list of predictor splines (size K).
QuantileSpline predict(const RegressionModel& model,
                       const std::vector<QuantileSpline>& z);

struct CvEntry {
    double rho = 0.0;
    double mean_w2 = 0.0;
};

struct CvResult {
    double best_rho = 0.0;
    std::vector<CvEntry> table;
};

/// Grid `rho_grid` defaults to 9 logarithmic points from 1e-6 to 1e2.
/// folds = 0 requests leave-one-out; k-fold otherwise. Every training fold
/// must keep at least two observations. Ties in the CV error go to the
/// larger rho. Folds are contiguous blocks in input order, so shuffling is
/// the caller's choice.
CvResult cross_validate_rho(const std::vector<std::vector<QuantileSpline>>& Z,
                            const std::vector<QuantileSpline>& Y,
                            std::vector<double> rho_grid = {}, int folds = 0,
                            bool include_intercept = true);

}  // namespace wassproj
