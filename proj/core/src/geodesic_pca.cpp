#include "wassproj/geodesic_pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wassproj/monotone_projection.hpp"
#include "wassproj/rng.hpp"

namespace wassproj {

namespace {

struct Workspace {
    Eigen::MatrixXd E;
    Eigen::MatrixXd G;
    Eigen::VectorXd a0;
    Eigen::MatrixXd residuals;  // n x J rows x_i - a0
    Eigen::VectorXd cone_gap;   // G a0, clamped nonnegative

    double e_norm2(const Eigen::VectorXd& v) const {
        return std::max(0.0, v.dot(E * v));
    }
};

// Gram-Schmidt in the E-inner product; returns false when a column is
// (numerically) dependent on the previous ones.
bool orthonormalize(const Workspace& ws, Eigen::MatrixXd& W) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        for (Eigen::Index l = 0; l < j; ++l)
            W.col(j) -= W.col(l).dot(ws.E * W.col(j)) * W.col(l);
        const double norm = std::sqrt(ws.e_norm2(W.col(j)));
        if (norm < 1e-10) return false;
        W.col(j) /= norm;
    }
    return true;
}

Eigen::VectorXd random_direction(const Workspace& ws, Rng& rng) {
    Eigen::VectorXd v(ws.a0.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    return v;
}

// Exact per-observation score programs for fixed directions. Warm starts
// reuse the previous scores when they remain feasible.
void score_step(const Workspace& ws, const Eigen::MatrixXd& W,
                Eigen::MatrixXd& scores) {
    const Eigen::Index n = ws.residuals.rows();
    const Eigen::Index k = W.cols();
    Eigen::MatrixXd Q = W.transpose() * ws.E * W;
    Eigen::MatrixXd A = ws.G * W;
    Eigen::VectorXd b = (-ws.cone_gap).cwiseMin(0.0);
    Eigen::MatrixXd EWt = (ws.E * W).transpose();

    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd c = -(EWt * ws.residuals.row(i).transpose());
        Eigen::VectorXd start = scores.row(i).transpose();
        if (start.size() != k || (A * start - b).minCoeff() < 0.0)
            start = Eigen::VectorXd::Zero(k);
        scores.row(i) = solve_qp(Q, c, A, b, start).x.transpose();
    }
}

double objective_of(const Workspace& ws, const Eigen::MatrixXd& W,
                    const Eigen::MatrixXd& scores) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ws.residuals.rows(); ++i)
        acc += ws.e_norm2(ws.residuals.row(i).transpose() -
                          W * scores.row(i).transpose());
    return acc;
}

struct BcdOutcome {
    Eigen::MatrixXd W;
    Eigen::MatrixXd scores;
    double objective = std::numeric_limits<double>::infinity();
    bool converged = false;
    int outer_iterations = 0;
};

BcdOutcome run_global_bcd(const Workspace& ws, Eigen::MatrixXd W,
                          const GeodesicOptions& opts) {
    BcdOutcome out;
    if (!orthonormalize(ws, W)) return out;  // degenerate seed

    const Eigen::Index n = ws.residuals.rows();
    const Eigen::Index k = W.cols();
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(n, k);
    score_step(ws, W, scores);
    double obj = objective_of(ws, W, scores);

    for (int outer = 0; outer < opts.max_outer_iterations; ++outer) {
        out.outer_iterations = outer + 1;

        // Closed-form unconstrained direction update given the scores.
        Eigen::MatrixXd M = scores.transpose() * scores;
        M.diagonal().array() += 1e-12 * std::max(1.0, M.trace());
        Eigen::MatrixXd R = ws.residuals.transpose() * scores;  // J x k
        Eigen::MatrixXd W_star = M.ldlt().solve(R.transpose()).transpose();

        bool improved = false;
        double step = 1.0;
        for (int trial = 0; trial < 9; ++trial, step *= 0.5) {
            Eigen::MatrixXd W_cand = W + step * (W_star - W);
            if (!orthonormalize(ws, W_cand)) continue;
            Eigen::MatrixXd scores_cand = scores;
            score_step(ws, W_cand, scores_cand);
            const double obj_cand = objective_of(ws, W_cand, scores_cand);
            if (obj_cand < obj) {
                const double drop = obj - obj_cand;
                W = std::move(W_cand);
                scores = std::move(scores_cand);
                obj = obj_cand;
                improved = true;
                if (drop <= opts.relative_tolerance * std::max(obj, 1e-30))
                    out.converged = true;
                break;
            }
        }
        if (!improved) {
            out.converged = true;  // no descent direction left at line-search resolution
            break;
        }
        if (out.converged) break;
    }

    out.W = std::move(W);
    out.scores = std::move(scores);
    out.objective = obj;
    return out;
}

Workspace make_workspace(const SplineBasis& basis, const Eigen::MatrixXd& coeffs,
                         const std::optional<Eigen::VectorXd>& center) {
    if (coeffs.cols() != basis.J)
        throw std::invalid_argument("geodesic PCA: coefficient width differs from basis size");
    if (coeffs.rows() < 2)
        throw std::invalid_argument("geodesic PCA: need at least two observations");
    Workspace ws;
    ws.E = gram_matrices(basis).E;
    ws.G = difference_matrix(basis.J);
    ws.a0 = center ? *center : Eigen::VectorXd(coeffs.colwise().mean().transpose());
    if (ws.a0.size() != basis.J)
        throw std::invalid_argument("geodesic PCA: center has wrong length");
    Eigen::VectorXd gap = ws.G * ws.a0;
    if (gap.minCoeff() < -1e-8)
        throw std::invalid_argument("geodesic PCA: center is not monotone");
    ws.cone_gap = gap.cwiseMax(0.0);
    ws.residuals = coeffs.rowwise() - ws.a0.transpose();
    return ws;
}

GeodesicPcaResult finish(const SplineBasis& basis, const Workspace& ws,
                         BcdOutcome best, const char* method, int restarts_used) {
    GeodesicPcaResult result;
    result.model.basis = basis;
    result.model.center = ws.a0;
    result.model.directions = std::move(best.W);
    result.model.eigenvalues = Eigen::VectorXd();
    result.model.method = method;
    result.model.E = ws.E;
    result.model.G = ws.G;
    result.scores = std::move(best.scores);
    result.objective = best.objective;
    result.converged = best.converged;
    result.restarts_used = restarts_used;
    result.outer_iterations = best.outer_iterations;
    return result;
}

}  // namespace

GeodesicPcaResult fit_global_geodesic(const SplineBasis& basis,
                                      const Eigen::MatrixXd& coeffs, int k,
                                      const GeodesicOptions& opts,
                                      const std::optional<Eigen::VectorXd>& center) {
    Workspace ws = make_workspace(basis, coeffs, center);
    if (k < 0 || k > basis.J)
        throw std::invalid_argument("fit_global_geodesic: k out of range");

    if (k == 0) {
        BcdOutcome trivial;
        trivial.W = Eigen::MatrixXd::Zero(basis.J, 0);
        trivial.scores = Eigen::MatrixXd::Zero(coeffs.rows(), 0);
        trivial.objective = 0.0;
        for (Eigen::Index i = 0; i < ws.residuals.rows(); ++i)
            trivial.objective += ws.e_norm2(ws.residuals.row(i).transpose());
        trivial.converged = true;
        return finish(basis, ws, std::move(trivial), "global", 0);
    }

    std::vector<Eigen::MatrixXd> seeds;
    PcaModel projected = fit_pca(basis, coeffs, ws.a0);
    seeds.push_back(projected.directions.leftCols(k));
    for (const auto& s : opts.extra_seeds) {
        if (s.rows() != basis.J || s.cols() != k)
            throw std::invalid_argument("fit_global_geodesic: extra seed must be J x k");
        seeds.push_back(s);
    }
    Rng rng(Rng::derive_seed(opts.seed, 0xB10C));
    while (static_cast<int>(seeds.size()) < std::max(opts.restarts, 1)) {
        Eigen::MatrixXd W(basis.J, k);
        for (int j = 0; j < k; ++j) W.col(j) = random_direction(ws, rng);
        seeds.push_back(std::move(W));
    }

    BcdOutcome best;
    for (auto& seed : seeds) {
        BcdOutcome outcome = run_global_bcd(ws, std::move(seed), opts);
        if (outcome.objective < best.objective ||
            (outcome.objective == best.objective && outcome.converged && !best.converged))
            best = std::move(outcome);
    }

    // The nested solution is a feasible point of the global problem; adopting
    // it verbatim when it wins (and descending from it otherwise) keeps the
    // global objective at or below the nested one.
    GeodesicPcaResult nested = fit_nested_geodesic(basis, coeffs, k, opts, ws.a0);
    BcdOutcome adopted;
    adopted.W = nested.model.directions;
    adopted.scores = nested.scores;
    adopted.objective = nested.objective;
    adopted.converged = nested.converged;
    adopted.outer_iterations = nested.outer_iterations;
    Eigen::MatrixXd nested_seed = adopted.W;
    if (adopted.objective < best.objective) best = std::move(adopted);
    BcdOutcome descended = run_global_bcd(ws, std::move(nested_seed), opts);
    if (descended.objective < best.objective) best = std::move(descended);

    if (!std::isfinite(best.objective))
        throw std::runtime_error("fit_global_geodesic: all restarts degenerate");
    return finish(basis, ws, std::move(best), "global", static_cast<int>(seeds.size()) + 1);
}

GeodesicPcaResult fit_nested_geodesic(const SplineBasis& basis,
                                      const Eigen::MatrixXd& coeffs, int k,
                                      const GeodesicOptions& opts,
                                      const std::optional<Eigen::VectorXd>& center) {
    Workspace ws = make_workspace(basis, coeffs, center);
    if (k < 0 || k > basis.J)
        throw std::invalid_argument("fit_nested_geodesic: k out of range");
    const Eigen::Index n = coeffs.rows();

    PcaModel projected = fit_pca(basis, coeffs, ws.a0);
    Eigen::MatrixXd W(basis.J, 0);
    Rng rng(Rng::derive_seed(opts.seed, 0x4E57));
    bool all_converged = true;
    int outer_total = 0;
    int restarts_used = 0;

    for (int h = 0; h < k; ++h) {
        // Candidate seeds for this direction: the matching projected-PCA
        // direction plus random vectors, all orthogonalized against the
        // directions already found.
        std::vector<Eigen::VectorXd> seeds;
        seeds.push_back(projected.directions.col(h));
        while (static_cast<int>(seeds.size()) < std::max(opts.restarts, 1))
            seeds.push_back(random_direction(ws, rng));

        double best_obj = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_w;
        bool best_converged = false;
        int best_outer = 0;

        for (auto& seed : seeds) {
            ++restarts_used;
            Eigen::MatrixXd Wh(basis.J, W.cols() + 1);
            Wh.leftCols(W.cols()) = W;
            Wh.col(W.cols()) = seed;
            if (!orthonormalize(ws, Wh)) continue;
            Eigen::VectorXd w = Wh.col(W.cols());

            // Rank-one BCD: clamp scores onto the ray extent, then damp the
            // direction toward its closed-form unconstrained update.
            auto clamp_scores = [&](const Eigen::VectorXd& dir,
                                    Eigen::VectorXd& lam) {
                RayExtent extent = ray_extent(ws.a0, dir, ws.G);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double s = dir.dot(ws.E * ws.residuals.row(i).transpose());
                    lam[i] = std::clamp(s, extent.eta_min, extent.eta_max);
                }
            };
            auto rank1_obj = [&](const Eigen::VectorXd& dir,
                                 const Eigen::VectorXd& lam) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < n; ++i)
                    acc += ws.e_norm2(ws.residuals.row(i).transpose() - lam[i] * dir);
                return acc;
            };

            Eigen::VectorXd lam(n);
            clamp_scores(w, lam);
            double obj = rank1_obj(w, lam);
            bool converged = false;
            int outer = 0;
            for (; outer < opts.max_outer_iterations; ++outer) {
                const double denom = lam.squaredNorm();
                if (denom < 1e-30) {
                    converged = true;
                    break;
                }
                Eigen::VectorXd v = ws.residuals.transpose() * lam / denom;
                bool improved = false;
                double step = 1.0;
                for (int trial = 0; trial < 9; ++trial, step *= 0.5) {
                    Eigen::MatrixXd Wc(basis.J, W.cols() + 1);
                    Wc.leftCols(W.cols()) = W;
                    Wc.col(W.cols()) = w + step * (v - w);
                    if (!orthonormalize(ws, Wc)) continue;
                    Eigen::VectorXd wc = Wc.col(W.cols());
                    Eigen::VectorXd lamc(n);
                    clamp_scores(wc, lamc);
                    const double objc = rank1_obj(wc, lamc);
                    if (objc < obj) {
                        const double drop = obj - objc;
                        w = std::move(wc);
                        lam = std::move(lamc);
                        obj = objc;
                        improved = true;
                        if (drop <= opts.relative_tolerance * std::max(obj, 1e-30))
                            converged = true;
                        break;
                    }
                }
                if (!improved) {
                    converged = true;
                    break;
                }
                if (converged) break;
            }
            if (obj < best_obj) {
                best_obj = obj;
                best_w = w;
                best_converged = converged;
                best_outer = outer + 1;
            }
        }
        if (best_w.size() == 0)
            throw std::runtime_error("fit_nested_geodesic: no independent direction found");
        W.conservativeResize(Eigen::NoChange, W.cols() + 1);
        W.col(W.cols() - 1) = best_w;
        all_converged = all_converged && best_converged;
        outer_total += best_outer;
    }

    // Joint scores on the final span give the component's objective.
    BcdOutcome out;
    out.W = std::move(W);
    out.scores = Eigen::MatrixXd::Zero(n, k);
    score_step(ws, out.W, out.scores);
    out.objective = objective_of(ws, out.W, out.scores);
    out.converged = all_converged;
    out.outer_iterations = outer_total;

    // The projected-PCA directions are themselves a nested sequence
    // (E-orthonormal with nested spans), so they are a valid candidate;
    // keeping the better of the two bounds the objective by the projected
    // component objective.
    if (k > 0) {
        BcdOutcome alt;
        alt.W = projected.directions.leftCols(k);
        alt.scores = Eigen::MatrixXd::Zero(n, k);
        score_step(ws, alt.W, alt.scores);
        alt.objective = objective_of(ws, alt.W, alt.scores);
        if (alt.objective < out.objective) {
            alt.converged = true;
            alt.outer_iterations = outer_total;
            out = std::move(alt);
        }
    }
    return finish(basis, ws, std::move(out), "nested", restarts_used);
}

}  // namespace wassproj
