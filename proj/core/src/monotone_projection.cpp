#include "wassproj/monotone_projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wassproj/errors.hpp"

namespace wassproj {

namespace {

// Solves the equality-constrained subproblem
//   min 0.5 (x+p)'Q(x+p) + c'(x+p)  s.t.  A_w p = 0
// through the bordered KKT system; returns the step p and the multipliers
// in the standard convention (nonnegative at an optimum of the inequality
// problem). Stationarity reads Q p - A_w' lambda = -g, so the symmetric
// system below solves for -lambda.
void solve_kkt(const Eigen::MatrixXd& Q, const Eigen::VectorXd& g,
               const Eigen::MatrixXd& A, const std::vector<int>& working,
               Eigen::VectorXd& p, Eigen::VectorXd& mu) {
    const Eigen::Index n = Q.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(working.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n) = Q;
    for (Eigen::Index r = 0; r < m; ++r) {
        kkt.block(n + r, 0, 1, n) = A.row(working[static_cast<std::size_t>(r)]);
        kkt.block(0, n + r, n, 1) =
            A.row(working[static_cast<std::size_t>(r)]).transpose();
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
    rhs.head(n) = -g;
    Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    p = sol.head(n);
    mu = -sol.tail(m);
}

}  // namespace

QpResult solve_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& x0, const QpOptions& opts) {
    const Eigen::Index n = Q.rows();
    const Eigen::Index m = A.rows();
    if (Q.cols() != n || c.size() != n || A.cols() != n || b.size() != m ||
        x0.size() != n)
        throw std::invalid_argument("solve_qp: inconsistent dimensions");
    if (m > 0 && ((A * x0 - b).minCoeff() < -opts.feasibility_tol))
        throw std::invalid_argument("solve_qp: start point is infeasible");

    const int cap = opts.iteration_factor *
                    std::max<int>(static_cast<int>(n), static_cast<int>(m) + 1);
    Eigen::VectorXd x = x0;
    std::vector<int> working;
    std::vector<char> in_working(static_cast<std::size_t>(m), 0);

    const double scale = std::max({1.0, c.lpNorm<Eigen::Infinity>(),
                                   Q.lpNorm<Eigen::Infinity>()});
    const double step_tol = 1e-13;

    Eigen::VectorXd p, mu;
    int iter = 0;
    for (; iter < cap; ++iter) {
        Eigen::VectorXd g = Q * x + c;
        solve_kkt(Q, g, A, working, p, mu);

        if (p.lpNorm<Eigen::Infinity>() <=
            step_tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
            // Stationary on the current working set; check multiplier signs.
            int drop = -1;
            double most_negative = -opts.kkt_tol * scale;
            for (Eigen::Index r = 0; r < mu.size(); ++r) {
                if (mu[r] < most_negative) {
                    most_negative = mu[r];
                    drop = static_cast<int>(r);
                }
            }
            if (drop < 0) {
                QpResult result;
                result.x = std::move(x);
                result.iterations = iter + 1;
                return result;
            }
            in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(drop)])] = 0;
            working.erase(working.begin() + drop);
            continue;
        }

        double alpha = 1.0;
        int blocker = -1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (in_working[static_cast<std::size_t>(i)]) continue;
            const double dir = A.row(i).dot(p);
            if (dir >= -1e-14) continue;
            const double gap = A.row(i).dot(x) - b[i];
            const double a_i = std::max(0.0, gap) / (-dir);
            if (a_i < alpha) {
                alpha = a_i;
                blocker = static_cast<int>(i);
            }
        }
        x += alpha * p;
        if (blocker >= 0 && alpha < 1.0) {
            working.push_back(blocker);
            in_working[static_cast<std::size_t>(blocker)] = 1;
        }
    }
    throw QpSolverError("solve_qp: iteration cap reached", iter);
}

Eigen::VectorXd project_monotone(const Eigen::VectorXd& v, const Eigen::MatrixXd& E,
                                 const Eigen::MatrixXd& G, const QpOptions& opts) {
    const Eigen::Index J = v.size();
    if (E.rows() != J || E.cols() != J)
        throw std::invalid_argument("project_monotone: E has wrong shape");
    if (G.cols() != J)
        throw std::invalid_argument("project_monotone: G has wrong shape");

    // Sorting the entries gives a cheap feasible start.
    Eigen::VectorXd start = v;
    std::sort(start.data(), start.data() + start.size());

    Eigen::VectorXd c = -(E * v);
    QpResult qp = solve_qp(E, c, G, Eigen::VectorXd::Zero(G.rows()), start, opts);
    return qp.x;
}

Eigen::VectorXd project_affine_slice(const Eigen::VectorXd& x_star,
                                     const Eigen::VectorXd& a0,
                                     const Eigen::MatrixXd& W,
                                     const Eigen::MatrixXd& E,
                                     const Eigen::MatrixXd& G,
                                     const QpOptions& opts) {
    const Eigen::Index J = a0.size();
    const Eigen::Index k = W.cols();
    if (x_star.size() != J || W.rows() != J)
        throw std::invalid_argument("project_affine_slice: inconsistent dimensions");
    Eigen::VectorXd cone_gap = G * a0;
    if (cone_gap.size() > 0 && cone_gap.minCoeff() < -1e-8)
        throw std::invalid_argument("project_affine_slice: a0 is not monotone");

    Eigen::MatrixXd Q = W.transpose() * E * W;
    Eigen::VectorXd c = -(W.transpose() * (E * (x_star - a0)));
    Eigen::MatrixXd A = G * W;
    // b = -G a0 up to roundoff; clamp so that l = 0 stays feasible.
    Eigen::VectorXd b = (-cone_gap).cwiseMin(0.0);
    QpResult qp = solve_qp(Q, c, A, b, Eigen::VectorXd::Zero(k), opts);
    return qp.x;
}

RayExtent ray_extent(const Eigen::VectorXd& a0, const Eigen::VectorXd& w,
                     const Eigen::MatrixXd& G) {
    Eigen::VectorXd c = G * a0;
    Eigen::VectorXd d = G * w;
    if (c.size() > 0 && c.minCoeff() < -1e-8)
        throw std::invalid_argument("ray_extent: a0 is not monotone");

    RayExtent extent{-std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
    const double d_tol = 1e-12 * std::max(1.0, d.lpNorm<Eigen::Infinity>());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double ci = std::max(c[i], 0.0);
        if (d[i] > d_tol) {
            extent.eta_min = std::max(extent.eta_min, -ci / d[i]);
        } else if (d[i] < -d_tol) {
            extent.eta_max = std::min(extent.eta_max, ci / (-d[i]));
        }
    }
    return extent;
}

}  // namespace wassproj
