#include "wassproj/projected_regression.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wassproj/errors.hpp"
#include "wassproj/monotone_projection.hpp"
#include "wassproj/parallel.hpp"

namespace wassproj {

namespace {

Eigen::MatrixXd cross_moment(const std::vector<Eigen::VectorXd>& left,
                             const std::vector<Eigen::VectorXd>& right,
                             const Eigen::MatrixXd& E) {
    const auto n = left.size();
    const Eigen::Index J = E.rows();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(J, J);
    for (std::size_t i = 0; i < n; ++i)
        M.noalias() += (E * left[i]) * (E * right[i]).transpose();
    return M / static_cast<double>(n);
}

struct CenteredData {
    // blocks[j][i]: centered coefficients of predictor j, observation i
    std::vector<std::vector<Eigen::VectorXd>> blocks;
    std::vector<Eigen::VectorXd> responses;
    std::vector<Eigen::VectorXd> z_means;
    Eigen::VectorXd y_mean;
};

CenteredData center_data(const std::vector<std::vector<QuantileSpline>>& Z,
                         const std::vector<QuantileSpline>& Y, int J,
                         bool include_intercept) {
    const std::size_t K = Z.size();
    const std::size_t n = Y.size();
    CenteredData data;
    data.blocks.resize(K);
    data.responses.resize(n);
    data.y_mean = Eigen::VectorXd::Zero(J);

    for (std::size_t i = 0; i < n; ++i) {
        if (Y[i].basis.J != J)
            throw std::invalid_argument("fit_regression: response basis size mismatch");
        data.y_mean += Y[i].coeffs;
    }
    data.y_mean /= static_cast<double>(n);

    for (std::size_t j = 0; j < K; ++j) {
        if (Z[j].size() != n)
            throw std::invalid_argument("fit_regression: predictor block size mismatch");
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(J);
        for (const auto& z : Z[j]) {
            if (z.basis.J != J)
                throw std::invalid_argument("fit_regression: predictor basis size mismatch");
            mean += z.coeffs;
        }
        mean /= static_cast<double>(n);
        data.z_means.push_back(mean);

        data.blocks[j].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            data.blocks[j][i] =
                include_intercept ? (Z[j][i].coeffs - mean).eval() : Z[j][i].coeffs;
    }
    for (std::size_t i = 0; i < n; ++i)
        data.responses[i] =
            include_intercept ? (Y[i].coeffs - data.y_mean).eval() : Y[i].coeffs;
    if (!include_intercept) {
        data.z_means.clear();
        data.y_mean = Eigen::VectorXd::Zero(J);
    }
    return data;
}

}  // namespace

MomentMatrices moment_matrices(const std::vector<Eigen::VectorXd>& az,
                               const std::vector<Eigen::VectorXd>& ay,
                               const Eigen::MatrixXd& E, const Eigen::MatrixXd& Eprime,
                               double rho) {
    if (az.empty() || az.size() != ay.size())
        throw std::invalid_argument("moment_matrices: need matching nonempty lists");
    MomentMatrices m;
    m.C_hat = cross_moment(az, az, E);
    m.D_hat = cross_moment(az, ay, E);
    m.C_rho = Eigen::kroneckerProduct(E.transpose(), (m.C_hat + rho * Eprime).eval());
    m.P = Eigen::kroneckerProduct(Eprime.transpose(), E) +
          Eigen::kroneckerProduct(E.transpose(), Eprime);
    return m;
}

RegressionModel fit_regression(const std::vector<std::vector<QuantileSpline>>& Z,
                               const std::vector<QuantileSpline>& Y, double rho,
                               bool include_intercept) {
    if (Z.empty()) throw std::invalid_argument("fit_regression: no predictor blocks");
    if (Y.size() < 2) throw std::invalid_argument("fit_regression: need at least two pairs");
    if (!(rho > 0.0)) throw std::invalid_argument("fit_regression: rho must be positive");

    const int K = static_cast<int>(Z.size());
    const SplineBasis& basis = Y.front().basis;
    const int J = basis.J;
    const Eigen::Index JJ = static_cast<Eigen::Index>(J) * J;

    RegressionModel model;
    model.basis = basis;
    GramPair gram = gram_matrices(basis);
    model.E = std::move(gram.E);
    model.G = difference_matrix(J);
    model.rho = rho;
    model.intercept = include_intercept;

    CenteredData data = center_data(Z, Y, J, include_intercept);
    model.z_means = data.z_means;
    model.y_mean = data.y_mean;

    // Stacked normal system in the vectorized transposed kernels: block
    // (j, l) couples predictors through E (x) C_hat^{(jl)}; the derivative
    // penalty sits on the diagonal blocks. Solving for the transpose makes
    // the Kronecker assembly match the closed form while the returned
    // Theta_j act on the left in the prediction equation.
    Eigen::MatrixXd penalty =
        Eigen::kroneckerProduct(model.E.transpose(), gram.Eprime) +
        Eigen::kroneckerProduct(gram.Eprime.transpose(), model.E) +
        Eigen::kroneckerProduct(model.E.transpose(), gram.Eprime);

    Eigen::MatrixXd S(K * JJ, K * JJ);
    Eigen::VectorXd rhs(K * JJ);
    for (int j = 0; j < K; ++j) {
        for (int l = 0; l < K; ++l) {
            Eigen::MatrixXd C_jl = cross_moment(data.blocks[static_cast<std::size_t>(j)],
                                                data.blocks[static_cast<std::size_t>(l)],
                                                model.E);
            S.block(j * JJ, l * JJ, JJ, JJ) =
                Eigen::kroneckerProduct(model.E.transpose(), C_jl);
            if (j == l) S.block(j * JJ, l * JJ, JJ, JJ) += rho * penalty;
        }
        Eigen::MatrixXd D_j = cross_moment(data.blocks[static_cast<std::size_t>(j)],
                                           data.responses, model.E);
        rhs.segment(j * JJ, JJ) = Eigen::Map<const Eigen::VectorXd>(D_j.data(), JJ);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    if (ldlt.info() != Eigen::Success)
        throw SingularFitError("fit_regression: normal system is not positive definite");
    Eigen::VectorXd sol = ldlt.solve(rhs);
    if (!sol.allFinite())
        throw SingularFitError("fit_regression: normal system solve failed");

    model.thetas.resize(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        Eigen::Map<const Eigen::MatrixXd> theta_t(sol.data() + j * JJ, J, J);
        model.thetas[static_cast<std::size_t>(j)] = theta_t.transpose();
    }

    model.theta_alpha = Eigen::VectorXd::Zero(J);
    if (include_intercept) {
        model.theta_alpha = model.y_mean;
        for (int j = 0; j < K; ++j)
            model.theta_alpha -= model.thetas[static_cast<std::size_t>(j)] *
                                 (model.E * model.z_means[static_cast<std::size_t>(j)]);
    }
    return model;
}

QuantileSpline predict(const RegressionModel& model,
                       const std::vector<QuantileSpline>& z) {
    if (static_cast<int>(z.size()) != model.predictors())
        throw std::invalid_argument("predict: wrong number of predictor splines");
    Eigen::VectorXd lin = model.theta_alpha;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (z[j].basis.J != model.basis.J)
            throw std::invalid_argument("predict: predictor basis size mismatch");
        lin += model.thetas[j] * (model.E * z[j].coeffs);
    }
    Eigen::VectorXd coeffs = lin;
    if (!is_monotone(coeffs)) coeffs = project_monotone(coeffs, model.E, model.G);
    return QuantileSpline{model.basis, std::move(coeffs)};
}

CvResult cross_validate_rho(const std::vector<std::vector<QuantileSpline>>& Z,
                            const std::vector<QuantileSpline>& Y,
                            std::vector<double> rho_grid, int folds,
                            bool include_intercept) {
    const int n = static_cast<int>(Y.size());
    if (rho_grid.empty()) {
        for (int e = -6; e <= 2; ++e) rho_grid.push_back(std::pow(10.0, e));
    }
    std::sort(rho_grid.begin(), rho_grid.end());

    const int fold_count = folds == 0 ? n : folds;
    if (fold_count < 2 || fold_count > n)
        throw std::invalid_argument("cross_validate_rho: invalid fold count");
    for (int f = 0; f < fold_count; ++f) {
        const int lo = f * n / fold_count;
        const int hi = (f + 1) * n / fold_count;
        if (n - (hi - lo) < 2)
            throw std::invalid_argument("cross_validate_rho: training folds need >= 2 pairs");
    }

    const Eigen::MatrixXd E = gram_matrices(Y.front().basis).E;
    const std::size_t K = Z.size();

    CvResult result;
    result.table.resize(rho_grid.size());
    std::vector<double> sums(rho_grid.size(), 0.0);

    for (int f = 0; f < fold_count; ++f) {
        const int lo = f * n / fold_count;
        const int hi = (f + 1) * n / fold_count;

        std::vector<std::vector<QuantileSpline>> z_train(K);
        std::vector<QuantileSpline> y_train;
        for (int i = 0; i < n; ++i) {
            if (i >= lo && i < hi) continue;
            for (std::size_t j = 0; j < K; ++j)
                z_train[j].push_back(Z[j][static_cast<std::size_t>(i)]);
            y_train.push_back(Y[static_cast<std::size_t>(i)]);
        }

        parallel_for(rho_grid.size(), [&](std::size_t r) {
            RegressionModel model =
                fit_regression(z_train, y_train, rho_grid[r], include_intercept);
            double acc = 0.0;
            for (int i = lo; i < hi; ++i) {
                std::vector<QuantileSpline> z_i;
                for (std::size_t j = 0; j < K; ++j)
                    z_i.push_back(Z[j][static_cast<std::size_t>(i)]);
                QuantileSpline pred = predict(model, z_i);
                acc += wasserstein2_spline(pred, Y[static_cast<std::size_t>(i)], E);
            }
            sums[r] += acc;
        });
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rho_grid.size(); ++r) {
        result.table[r].rho = rho_grid[r];
        result.table[r].mean_w2 = sums[r] / n;
        if (result.table[r].mean_w2 <= best) {  // ties go to the larger rho
            best = result.table[r].mean_w2;
            result.best_rho = rho_grid[r];
        }
    }
    return result;
}

}  // namespace wassproj
