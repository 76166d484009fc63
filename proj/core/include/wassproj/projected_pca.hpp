#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wassproj/distributions.hpp"
#include "wassproj/spline_basis.hpp"

namespace wassproj {

/// Principal components of an encoded dataset in the spline geometry.
///
/// Directions are E-orthonormal columns of W ordered by decreasing
/// eigenvalue of the empirical covariance (1/n sum of centered outer
/// products) composed with E; `center` defaults to the barycenter.
/// For geodesic fits the same document shape is reused (see geodesic_pca).
struct PcaModel {
    SplineBasis basis;
    Eigen::VectorXd center;       // a0
    Eigen::MatrixXd directions;   // J x k, E-orthonormal columns
    Eigen::VectorXd eigenvalues;  // covariance eigenvalues, empty for geodesic fits
    std::string method = "projected";

    Eigen::MatrixXd E;       // Gram matrix of the basis
    Eigen::MatrixXd G;       // first-difference operator

    int dimension() const { return static_cast<int>(directions.cols()); }
};

/// Fits projected PCA: eigendecomposition of the centered covariance in the
/// E-inner product, computed by whitening with the Cholesky factor of E so
/// the directions come out E-orthonormal by construction. Signs follow the
/// convention that each direction's largest-magnitude coefficient is
/// positive. n >= 2 required.
PcaModel fit_pca(const SplineBasis& basis, const Eigen::MatrixXd& coeffs,
                 const std::optional<Eigen::VectorXd>& center = std::nullopt);
PcaModel fit_pca(const std::vector<QuantileSpline>& data,
                 const std::optional<Eigen::VectorXd>& center = std::nullopt);

/// Scores and reconstruction of one observation on the leading k directions,
/// metric-projected so the reconstruction stays a quantile spline.
struct Projection {
    Eigen::VectorXd scores;          // k entries
    Eigen::VectorXd reconstruction;  // J entries, monotone within 1e-8
};

Projection project_observation(const PcaModel& model, const Eigen::VectorXd& coeffs,
                               int k);

/// Unconstrained scores <x - a0, w_h>_E for h = 1..k; equal to the
/// constrained scores at component dimension J.
Eigen::VectorXd l2_scores(const PcaModel& model, const Eigen::VectorXd& coeffs, int k);

/// Mean W2 distance between the observations and their k-dimensional
/// reconstructions (the distance itself, not its square). k = 0 measures
/// the spread around the center.
double reconstruction_error(const PcaModel& model, const Eigen::MatrixXd& coeffs, int k);

/// reconstruction_error divided by the mean W2 distance to the center;
/// 0 when the dataset is concentrated at the center.
double normalized_reconstruction_error(const PcaModel& model,
                                       const Eigen::MatrixXd& coeffs, int k);

/// Interpretability of direction h: one minus the mean relative overshoot of
/// the scores beyond the feasible ray extent of that direction. score_dim
/// picks the component dimension at which scores are computed (scores depend
/// on it); the default is the diagnostic's own dimension h. Passing J yields
/// the unconstrained scores. Zero scores contribute no penalty.
double interpretability_score(const PcaModel& model, const Eigen::MatrixXd& coeffs,
                              int h, std::optional<int> score_dim = std::nullopt);

/// Ghost variance of the k-dimensional component: mean relative E-distance
/// between the unconstrained projection onto the span and the constrained
/// projection of that point onto the component. Observations at the center
/// are skipped.
double ghost_variance(const PcaModel& model, const Eigen::MatrixXd& coeffs, int k);

/// Sum of squared E-distances between observations and their constrained
/// k-dimensional reconstructions; the objective shared with geodesic PCA.
double component_objective(const PcaModel& model, const Eigen::MatrixXd& coeffs, int k);

}  // namespace wassproj
