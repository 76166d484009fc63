#include "wassproj/spline_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wassproj/errors.hpp"

namespace wassproj {

namespace detail {

std::vector<double> clamped_knots(int count, int deg) {
    const int spans = count - deg;
    std::vector<double> knots(static_cast<std::size_t>(count + deg + 1));
    for (int i = 0; i <= deg; ++i) {
        knots[static_cast<std::size_t>(i)] = 0.0;
        knots[static_cast<std::size_t>(count + i)] = 1.0;
    }
    for (int i = 1; i < spans; ++i)
        knots[static_cast<std::size_t>(deg + i)] =
            static_cast<double>(i) / static_cast<double>(spans);
    return knots;
}

namespace {

// Index k with knots[k] <= x < knots[k+1]; x == 1 maps to the last span.
int find_span(const std::vector<double>& knots, int deg, int count, double x) {
    if (x >= 1.0) return count - 1;
    int lo = deg, hi = count;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (x < knots[static_cast<std::size_t>(mid)])
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

// Nonzero basis values N_{span-deg..span} at x (NURBS book A2.2).
void basis_funs(const std::vector<double>& knots, int deg, int span, double x,
                double* out) {
    double left[8], right[8];
    out[0] = 1.0;
    for (int j = 1; j <= deg; ++j) {
        left[j] = x - knots[static_cast<std::size_t>(span + 1 - j)];
        right[j] = knots[static_cast<std::size_t>(span + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double tmp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out[j] = saved;
    }
}

}  // namespace

Eigen::VectorXd eval_clamped_bspline(const std::vector<double>& knots, int deg,
                                     int count, double x) {
    Eigen::VectorXd values = Eigen::VectorXd::Zero(count);
    const int span = find_span(knots, deg, count, x);
    double nz[8];
    basis_funs(knots, deg, span, x, nz);
    for (int r = 0; r <= deg; ++r) values[span - deg + r] = nz[r];
    return values;
}

}  // namespace detail

SplineBasis make_basis(int J) {
    if (J < 4)
        throw std::invalid_argument("make_basis: basis size must be at least 4, got " +
                                    std::to_string(J));
    SplineBasis basis;
    basis.J = J;
    basis.knots = detail::clamped_knots(J, SplineBasis::degree);
    return basis;
}

Eigen::VectorXd eval_basis(const SplineBasis& basis, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("eval_basis: x outside [0, 1]");
    return detail::eval_clamped_bspline(basis.knots, SplineBasis::degree, basis.J, x);
}

Eigen::VectorXd eval_basis_derivative(const SplineBasis& basis, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("eval_basis_derivative: x outside [0, 1]");
    const int p = SplineBasis::degree;
    const int J = basis.J;
    const auto& t = basis.knots;

    // N'_{i,p} = p/(t_{i+p}-t_i) N_{i,p-1} - p/(t_{i+p+1}-t_{i+1}) N_{i+1,p-1},
    // with vanishing terms where the knot span has zero length. The degree
    // p-1 functions below live on the same knot vector, truncated one from
    // each end, so their index i runs over 1..J here.
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(J + 1);
    {
        // Degree p-1 basis on knots t_1..t_{J+p-1}: evaluate via the generic
        // routine on the sub-knot vector.
        std::vector<double> sub(t.begin() + 1, t.end() - 1);
        Eigen::VectorXd vals = detail::eval_clamped_bspline(sub, p - 1, J - 1, x);
        for (int i = 0; i < vals.size(); ++i) lower[i + 1] = vals[i];
    }

    Eigen::VectorXd deriv = Eigen::VectorXd::Zero(J);
    for (int i = 0; i < J; ++i) {
        double a = 0.0, b = 0.0;
        double da = t[static_cast<std::size_t>(i + p)] - t[static_cast<std::size_t>(i)];
        double db = t[static_cast<std::size_t>(i + p + 1)] - t[static_cast<std::size_t>(i + 1)];
        if (da > 0.0) a = p / da * lower[i];
        if (db > 0.0) b = p / db * lower[i + 1];
        deriv[i] = a - b;
    }
    return deriv;
}

GramPair gram_matrices(const SplineBasis& basis) {
    const int J = basis.J;
    const int spans = basis.intervals();
    GramPair gram;
    gram.E = Eigen::MatrixXd::Zero(J, J);
    gram.Eprime = Eigen::MatrixXd::Zero(J, J);

    // 3-node Gauss-Legendre on [-1, 1].
    static const double node = std::sqrt(3.0 / 5.0);
    static const double gl_x[3] = {-node, 0.0, node};
    static const double gl_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    for (int s = 0; s < spans; ++s) {
        const double lo = static_cast<double>(s) / spans;
        const double hi = static_cast<double>(s + 1) / spans;
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (int q = 0; q < 3; ++q) {
            const double x = mid + half * gl_x[q];
            const double w = half * gl_w[q];
            Eigen::VectorXd v = eval_basis(basis, x);
            Eigen::VectorXd d = eval_basis_derivative(basis, x);
            // Only the three functions supported on span s are nonzero.
            const int first = s;
            const int last = std::min(J - 1, s + SplineBasis::degree);
            for (int i = first; i <= last; ++i) {
                for (int j = i; j <= last; ++j) {
                    gram.E(i, j) += w * v[i] * v[j];
                    gram.Eprime(i, j) += w * d[i] * d[j];
                }
            }
        }
    }
    gram.E = gram.E.selfadjointView<Eigen::Upper>();
    gram.Eprime = gram.Eprime.selfadjointView<Eigen::Upper>();
    return gram;
}

Eigen::MatrixXd difference_matrix(int J) {
    if (J < 2) throw std::invalid_argument("difference_matrix: J must be at least 2");
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(J - 1, J);
    for (int r = 0; r < J - 1; ++r) {
        G(r, r) = -1.0;
        G(r, r + 1) = 1.0;
    }
    return G;
}

Eigen::VectorXd fit_coefficients(const SplineBasis& basis,
                                 const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_coefficients: xs and ys differ in length");
    if (static_cast<int>(xs.size()) < basis.J)
        throw std::invalid_argument("fit_coefficients: need at least J samples");

    Eigen::MatrixXd design(static_cast<Eigen::Index>(xs.size()), basis.J);
    for (std::size_t r = 0; r < xs.size(); ++r)
        design.row(static_cast<Eigen::Index>(r)) = eval_basis(basis, xs[r]).transpose();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < basis.J)
        throw SingularFitError("fit_coefficients: design matrix is rank deficient (rank " +
                               std::to_string(qr.rank()) + " < " + std::to_string(basis.J) + ")");
    Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    return qr.solve(y);
}

bool is_monotone(const Eigen::VectorXd& coeffs, double tol) {
    for (Eigen::Index i = 1; i < coeffs.size(); ++i)
        if (coeffs[i] - coeffs[i - 1] < -tol) return false;
    return true;
}

}  // namespace wassproj
