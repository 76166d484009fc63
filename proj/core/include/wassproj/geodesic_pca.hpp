#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wassproj/projected_pca.hpp"

namespace wassproj {

struct GeodesicOptions {
    int max_outer_iterations = 500;
    double relative_tolerance = 1e-9;
    int restarts = 5;
    unsigned long seed = 0;
    /// Additional direction matrices (J x k) to use as starting points on
    /// top of the built-in projected-PCA seed and random seeds.
    std::vector<Eigen::MatrixXd> extra_seeds;
};

/// Result of a geodesic PCA fit. The component is the affine slice through
/// the center spanned by `model.directions`, intersected with the monotone
/// cone; `scores` are the jointly feasible coordinates of each observation's
/// constrained projection and `objective` is the sum of squared E-distances
/// to those reconstructions. converged reports whether any restart met the
/// relative-improvement tolerance before the iteration cap; the best
/// objective found is returned either way.
struct GeodesicPcaResult {
    PcaModel model;          // method tag "global" or "nested"; eigenvalues empty
    Eigen::MatrixXd scores;  // n x k
    double objective = 0.0;
    bool converged = false;
    int restarts_used = 0;
    int outer_iterations = 0;
};

/// Global geodesic PCA: block-coordinate descent alternating exact
/// per-observation score programs with closed-form direction updates damped
/// by a monotone line search; multi-start with the projected-PCA seed, the
/// nested-geodesic solution, and random restarts. The returned objective
/// never exceeds the nested-geodesic objective, nor the projected-PCA
/// component objective at the same k (both are candidate starting points).
GeodesicPcaResult fit_global_geodesic(
    const SplineBasis& basis, const Eigen::MatrixXd& coeffs, int k,
    const GeodesicOptions& opts = {},
    const std::optional<Eigen::VectorXd>& center = std::nullopt);

/// Nested geodesic PCA: directions are fit one at a time, each solving the
/// rank-one constrained problem orthogonally (in E) to its predecessors, so
/// components are nested by construction. Scores and objective are then
/// recomputed jointly on the final span. The projected-PCA direction
/// sequence is kept as a fallback candidate, so the returned objective
/// never exceeds the projected component objective (up to QP tolerance).
GeodesicPcaResult fit_nested_geodesic(
    const SplineBasis& basis, const Eigen::MatrixXd& coeffs, int k,
    const GeodesicOptions& opts = {},
    const std::optional<Eigen::VectorXd>& center = std::nullopt);

}  // namespace wassproj
