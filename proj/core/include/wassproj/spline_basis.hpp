#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wassproj {

/// Clamped uniform B-spline basis of quadratic degree on [0, 1].
///
/// The knot vector repeats 0 and 1 three times and places J - 3 equispaced
/// interior knots, giving J basis functions over J - 2 intervals. Quantile
/// functions are represented by coefficient vectors in this basis; a
/// coefficient vector with nondecreasing entries yields a nondecreasing
/// spline, and conversely.
struct SplineBasis {
    int J = 0;
    std::vector<double> knots;  // size J + 3

    static constexpr int degree = 2;
    int intervals() const { return J - degree; }
};

/// Gram matrices of the basis: E holds pairwise L2 inner products of the
/// basis functions, Eprime the inner products of their first derivatives.
struct GramPair {
    Eigen::MatrixXd E;
    Eigen::MatrixXd Eprime;
};

/// Builds the quadratic basis with J functions. Throws std::invalid_argument
/// for J < 4 (fewer functions leave no interior knot).
SplineBasis make_basis(int J);

/// Values of all J basis functions at x in [0, 1]; at most three are nonzero
/// and they sum to one. Throws std::domain_error outside [0, 1].
Eigen::VectorXd eval_basis(const SplineBasis& basis, double x);

/// First derivatives of all J basis functions at x. One-sided at the ends.
Eigen::VectorXd eval_basis_derivative(const SplineBasis& basis, double x);

/// Computes E and Eprime by per-interval Gauss-Legendre quadrature with three
/// nodes, which integrates the degree-4 products exactly. E is symmetric
/// positive definite and banded with bandwidth 2; Eprime is symmetric
/// positive semidefinite with zero row sums.
GramPair gram_matrices(const SplineBasis& basis);

/// First-difference operator G of shape (J-1) x J with rows e_i - e_{i-1};
/// a coefficient vector v is monotone iff G v >= 0.
Eigen::MatrixXd difference_matrix(int J);

/// Unconstrained least-squares fit of (x, y) samples in the basis. Requires
/// at least J samples inside [0, 1]; throws SingularFitError when the design
/// matrix is column-rank deficient.
Eigen::VectorXd fit_coefficients(const SplineBasis& basis,
                                 const std::vector<double>& xs,
                                 const std::vector<double>& ys);

/// True iff G * coeffs >= -tol componentwise.
bool is_monotone(const Eigen::VectorXd& coeffs, double tol = 1e-12);

namespace detail {

/// Clamped uniform knot vector for `count` basis functions of degree `deg`.
std::vector<double> clamped_knots(int count, int deg);

/// Cox-de Boor evaluation for a clamped knot vector of arbitrary degree.
/// Returns the full coefficient-length vector of basis values at x.
Eigen::VectorXd eval_clamped_bspline(const std::vector<double>& knots, int deg,
                                     int count, double x);

}  // namespace detail

}  // namespace wassproj
