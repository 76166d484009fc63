#pragma once

#include <Eigen/Dense>

namespace wassproj {

struct QpOptions {
    // Iteration cap is iteration_factor * max(#variables, #constraints + 1).
    int iteration_factor = 50;
    double feasibility_tol = 1e-10;
    double kkt_tol = 1e-8;
};

struct QpResult {
    Eigen::VectorXd x;
    int iterations = 0;
};

/// Primal active-set solver for the strictly convex program
///   min 0.5 x'Qx + c'x   s.t.  A x >= b,
/// started from a feasible point. The working set begins empty; blocking
/// constraints are added one at a time (each is automatically independent of
/// the current working set), and constraints with negative multipliers are
/// dropped. Throws QpSolverError when the iteration cap is hit and
/// std::invalid_argument when x0 is infeasible.
QpResult solve_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& x0, const QpOptions& opts = {});

/// Metric projection of v onto the monotone cone {w : G w >= 0} in the
/// E-inner product: argmin (w - v)' E (w - v). The result satisfies
/// G * result >= -1e-10 and the solver's KKT residual is at most 1e-8.
Eigen::VectorXd project_monotone(const Eigen::VectorXd& v, const Eigen::MatrixXd& E,
                                 const Eigen::MatrixXd& G, const QpOptions& opts = {});

/// Scores of the metric projection of x_star onto the set
/// (a0 + span W) n {G x >= 0}: solves
///   min_l || x_star - a0 - W l ||_E^2  s.t.  G (a0 + W l) >= 0.
/// W carries the component directions in its columns (E-orthonormal columns
/// make the objective the plain Euclidean distance to the unconstrained
/// scores, but orthonormality is not required). a0 must lie in the cone.
Eigen::VectorXd project_affine_slice(const Eigen::VectorXd& x_star,
                                     const Eigen::VectorXd& a0,
                                     const Eigen::MatrixXd& W,
                                     const Eigen::MatrixXd& E,
                                     const Eigen::MatrixXd& G,
                                     const QpOptions& opts = {});

/// Range of eta for which a0 + eta * w stays in the cone; infinite when no
/// constraint binds on that side. With c = G a0 and d = G w, rows with
/// negligible |d_i| impose no bound. Always contains eta = 0.
struct RayExtent {
    double eta_min;
    double eta_max;
};

RayExtent ray_extent(const Eigen::VectorXd& a0, const Eigen::VectorXd& w,
                     const Eigen::MatrixXd& G);

}  // namespace wassproj
