#include "wassproj/projected_pca.hpp"

#include <cmath>
#include <stdexcept>

#include "wassproj/monotone_projection.hpp"

namespace wassproj {

namespace {

void check_coeffs(const SplineBasis& basis, const Eigen::MatrixXd& coeffs) {
    if (coeffs.cols() != basis.J)
        throw std::invalid_argument("coefficient matrix width differs from basis size");
}

void check_k(const PcaModel& model, int k) {
    if (k < 0 || k > model.dimension())
        throw std::invalid_argument("component dimension k out of range");
}

}  // namespace

PcaModel fit_pca(const SplineBasis& basis, const Eigen::MatrixXd& coeffs,
                 const std::optional<Eigen::VectorXd>& center) {
    check_coeffs(basis, coeffs);
    const Eigen::Index n = coeffs.rows();
    const int J = basis.J;
    if (n < 2) throw std::invalid_argument("fit_pca: need at least two observations");

    PcaModel model;
    model.basis = basis;
    GramPair gram = gram_matrices(basis);
    model.E = std::move(gram.E);
    model.G = difference_matrix(J);

    model.center = center ? *center
                          : Eigen::VectorXd(coeffs.colwise().mean().transpose());
    if (model.center.size() != J)
        throw std::invalid_argument("fit_pca: center has wrong length");

    Eigen::MatrixXd centered = coeffs.rowwise() - model.center.transpose();
    Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(n);

    // Whiten with E = L L': the symmetric problem L' Cov L u = lambda u maps
    // back through w = L^{-T} u, which makes W' E W the identity exactly.
    Eigen::LLT<Eigen::MatrixXd> llt(model.E);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("fit_pca: Gram matrix is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd S = L.transpose() * cov * L;
    S = 0.5 * (S + S.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fit_pca: eigendecomposition failed");

    // Ascending from Eigen; flip to decreasing eigenvalue order.
    model.eigenvalues = es.eigenvalues().reverse();
    Eigen::MatrixXd U = es.eigenvectors().rowwise().reverse();
    Eigen::MatrixXd W = L.transpose().triangularView<Eigen::Upper>().solve(U);

    // Sign convention: largest-|coefficient| entry positive.
    for (int j = 0; j < J; ++j) {
        Eigen::Index arg;
        W.col(j).cwiseAbs().maxCoeff(&arg);
        if (W(arg, j) < 0.0) W.col(j) = -W.col(j);
    }
    model.directions = std::move(W);
    return model;
}

PcaModel fit_pca(const std::vector<QuantileSpline>& data,
                 const std::optional<Eigen::VectorXd>& center) {
    if (data.empty()) throw std::invalid_argument("fit_pca: empty dataset");
    Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(data.size()), data.front().basis.J);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].basis.J != data.front().basis.J)
            throw std::invalid_argument("fit_pca: mixed basis sizes");
        coeffs.row(static_cast<Eigen::Index>(i)) = data[i].coeffs.transpose();
    }
    return fit_pca(data.front().basis, coeffs, center);
}

Projection project_observation(const PcaModel& model, const Eigen::VectorXd& coeffs,
                               int k) {
    check_k(model, k);
    Projection proj;
    if (k == 0) {
        proj.scores = Eigen::VectorXd();
        proj.reconstruction = model.center;
        return proj;
    }
    Eigen::MatrixXd Wk = model.directions.leftCols(k);
    proj.scores = project_affine_slice(coeffs, model.center, Wk, model.E, model.G);
    proj.reconstruction = model.center + Wk * proj.scores;
    return proj;
}

Eigen::VectorXd l2_scores(const PcaModel& model, const Eigen::VectorXd& coeffs, int k) {
    check_k(model, k);
    return model.directions.leftCols(k).transpose() * (model.E * (coeffs - model.center));
}

double reconstruction_error(const PcaModel& model, const Eigen::MatrixXd& coeffs, int k) {
    check_coeffs(model.basis, coeffs);
    check_k(model, k);
    const Eigen::Index n = coeffs.rows();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Projection proj = project_observation(model, coeffs.row(i).transpose(), k);
        Eigen::VectorXd d = coeffs.row(i).transpose() - proj.reconstruction;
        acc += std::sqrt(std::max(0.0, d.dot(model.E * d)));
    }
    return acc / static_cast<double>(n);
}

double normalized_reconstruction_error(const PcaModel& model,
                                       const Eigen::MatrixXd& coeffs, int k) {
    check_coeffs(model.basis, coeffs);
    const Eigen::Index n = coeffs.rows();
    double spread = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd d = coeffs.row(i).transpose() - model.center;
        spread += std::sqrt(std::max(0.0, d.dot(model.E * d)));
    }
    spread /= static_cast<double>(n);
    if (spread == 0.0) return 0.0;
    return reconstruction_error(model, coeffs, k) / spread;
}

double interpretability_score(const PcaModel& model, const Eigen::MatrixXd& coeffs,
                              int h, std::optional<int> score_dim) {
    check_coeffs(model.basis, coeffs);
    if (h < 1 || h > model.dimension())
        throw std::invalid_argument("interpretability_score: direction h out of range");
    const int dim = score_dim.value_or(h);
    check_k(model, dim);
    if (h > dim)
        throw std::invalid_argument("interpretability_score: h exceeds score dimension");

    RayExtent extent = ray_extent(model.center, model.directions.col(h - 1), model.G);
    const Eigen::Index n = coeffs.rows();
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double s;
        if (dim == model.dimension()) {
            s = l2_scores(model, coeffs.row(i).transpose(), dim)[h - 1];
        } else {
            s = project_observation(model, coeffs.row(i).transpose(), dim).scores[h - 1];
        }
        if (s == 0.0) continue;
        double outside = 0.0;
        if (s < extent.eta_min) outside = extent.eta_min - s;
        if (s > extent.eta_max) outside = s - extent.eta_max;
        penalty += outside / std::abs(s);
    }
    return 1.0 - penalty / static_cast<double>(n);
}

double ghost_variance(const PcaModel& model, const Eigen::MatrixXd& coeffs, int k) {
    check_coeffs(model.basis, coeffs);
    check_k(model, k);
    if (k == 0) return 0.0;
    const Eigen::Index n = coeffs.rows();
    Eigen::MatrixXd Wk = model.directions.leftCols(k);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd x = coeffs.row(i).transpose();
        Eigen::VectorXd d = x - model.center;
        const double norm_d = std::sqrt(std::max(0.0, d.dot(model.E * d)));
        if (norm_d == 0.0) continue;  // the center carries no ghost mass

        // Unconstrained projection onto the span, then its constrained
        // projection onto the component; with E-orthonormal directions the
        // gap is the Euclidean distance between the two score vectors.
        Eigen::VectorXd s = Wk.transpose() * (model.E * d);
        Eigen::VectorXd span_point = model.center + Wk * s;
        Eigen::VectorXd lambda =
            project_affine_slice(span_point, model.center, Wk, model.E, model.G);
        acc += (s - lambda).norm() / norm_d;
    }
    return acc / static_cast<double>(n);
}

double component_objective(const PcaModel& model, const Eigen::MatrixXd& coeffs, int k) {
    check_coeffs(model.basis, coeffs);
    check_k(model, k);
    const Eigen::Index n = coeffs.rows();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Projection proj = project_observation(model, coeffs.row(i).transpose(), k);
        Eigen::VectorXd d = coeffs.row(i).transpose() - proj.reconstruction;
        acc += std::max(0.0, d.dot(model.E * d));
    }
    return acc;
}

}  // namespace wassproj
