#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wassproj/csv.hpp"
#include "wassproj/datagen.hpp"
#include "wassproj/distributions.hpp"
#include "wassproj/geodesic_pca.hpp"
#include "wassproj/model_io.hpp"
#include "wassproj/parallel.hpp"
#include "wassproj/projected_pca.hpp"
#include "wassproj/projected_regression.hpp"
#include "wassproj/spline_basis.hpp"

namespace wassproj::cli {

namespace {

using nlohmann::json;

std::string join_path(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Encodes every distribution of a CSV file on one shared encoder; ids out
/// come in file order.
std::vector<QuantileSpline> encode_file(const QuantileEncoder& encoder,
                                        const std::string& path,
                                        std::vector<std::string>* ids = nullptr) {
    const auto dists = read_distributions_csv(path);
    std::vector<QuantileSpline> out(
        dists.size(),
        QuantileSpline{encoder.basis(), Eigen::VectorXd::Zero(encoder.basis().J)});
    parallel_for(dists.size(),
                 [&](std::size_t i) { out[i] = encoder.encode(dists[i].dist); });
    if (ids) {
        ids->clear();
        for (const auto& d : dists) ids->push_back(d.id);
    }
    return out;
}

std::vector<std::string> numbered_ids(int n) {
    int width = 1;
    for (int v = n; v >= 10; v /= 10) ++width;
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        std::string digits = std::to_string(i);
        ids.push_back("d" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
                      digits);
    }
    return ids;
}

std::vector<NamedDistribution> with_ids(std::vector<EmpiricalDistribution> dists,
                                        const std::vector<std::string>& ids) {
    std::vector<NamedDistribution> out;
    out.reserve(dists.size());
    for (std::size_t i = 0; i < dists.size(); ++i)
        out.push_back({ids[i], std::move(dists[i])});
    return out;
}

}  // namespace

int cmd_encode(const EncodeArgs& args) {
    const auto dists = read_distributions_csv(args.input_csv);
    SplineBasis basis = make_basis(args.basis_size);
    QuantileEncoder encoder(basis);

    const std::size_t n = dists.size();
    CoefficientTable table;
    table.ids.resize(n);
    table.w2_errors.resize(static_cast<Eigen::Index>(n));
    table.coeffs.resize(static_cast<Eigen::Index>(n), basis.J);
    parallel_for(n, [&](std::size_t i) {
        const QuantileSpline spline = encoder.encode(dists[i].dist);
        table.ids[i] = dists[i].id;
        table.w2_errors(static_cast<Eigen::Index>(i)) =
            encoding_error(dists[i].dist, spline);
        table.coeffs.row(static_cast<Eigen::Index>(i)) = spline.coeffs.transpose();
    });
    write_coefficients_csv(args.out_csv, table);
    return 0;
}

int cmd_pca(const PcaArgs& args) {
    const CoefficientTable table = read_coefficients_csv(args.coeffs_csv);
    const int J = static_cast<int>(table.coeffs.cols());
    const Eigen::Index n = table.coeffs.rows();
    SplineBasis basis = make_basis(J);
    const int k = args.dims;
    if (k < 1 || k > J)
        throw std::invalid_argument("pca: --dims must be between 1 and the basis size");

    PcaModel model;
    Eigen::MatrixXd scores;
    if (args.method == "projected") {
        model = fit_pca(basis, table.coeffs);
        scores.resize(n, k);
        for (Eigen::Index i = 0; i < n; ++i)
            scores.row(i) = l2_scores(model, table.coeffs.row(i).transpose(), k).transpose();
        model.directions = model.directions.leftCols(k).eval();
    } else if (args.method == "global" || args.method == "nested") {
        GeodesicOptions opts;
        opts.seed = args.seed;
        GeodesicPcaResult result =
            args.method == "global" ? fit_global_geodesic(basis, table.coeffs, k, opts)
                                    : fit_nested_geodesic(basis, table.coeffs, k, opts);
        model = std::move(result.model);
        scores = std::move(result.scores);
    } else {
        throw std::invalid_argument("pca: method must be projected, global, or nested");
    }

    ensure_dir(args.out_dir);
    save_pca_model(join_path(args.out_dir, "model.json"), model);

    Eigen::MatrixXd diagnostics(k, 5);
    for (int h = 1; h <= k; ++h) {
        diagnostics(h - 1, 0) = h;
        diagnostics(h - 1, 1) = reconstruction_error(model, table.coeffs, h);
        diagnostics(h - 1, 2) = normalized_reconstruction_error(model, table.coeffs, h);
        diagnostics(h - 1, 3) = ghost_variance(model, table.coeffs, h);
        diagnostics(h - 1, 4) = interpretability_score(model, table.coeffs, h);
    }
    write_matrix_csv(join_path(args.out_dir, "diagnostics.csv"), diagnostics,
                     {"dim", "re", "nre", "gv", "is"});

    std::vector<std::string> score_names;
    for (int h = 1; h <= k; ++h) score_names.push_back("s" + std::to_string(h));
    write_matrix_csv(join_path(args.out_dir, "scores.csv"), scores, score_names,
                     table.ids, "dist_id");
    return 0;
}

int cmd_regress(const RegressArgs& args) {
    SplineBasis basis = make_basis(args.basis_size);
    QuantileEncoder encoder(basis);

    std::vector<std::vector<QuantileSpline>> Z;
    Z.reserve(args.z_csvs.size());
    for (const auto& path : args.z_csvs) Z.push_back(encode_file(encoder, path));
    const std::vector<QuantileSpline> Y = encode_file(encoder, args.y_csv);
    const bool intercept = !args.no_intercept;
    const std::size_t n = Y.size();

    RegressionModel model;
    Eigen::MatrixXd cv_table;
    if (args.rho >= 0.0) {
        model = fit_regression(Z, Y, args.rho, intercept);
        // No grid to search: report the in-sample error at the fixed rho.
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<QuantileSpline> zi;
            for (const auto& block : Z) zi.push_back(block[i]);
            mean += wasserstein2_spline(predict(model, zi), Y[i], model.E);
        }
        cv_table.resize(1, 2);
        cv_table << args.rho, mean / static_cast<double>(n);
    } else {
        const CvResult cv = cross_validate_rho(Z, Y, args.rho_grid, args.folds, intercept);
        model = fit_regression(Z, Y, cv.best_rho, intercept);
        cv_table.resize(static_cast<Eigen::Index>(cv.table.size()), 2);
        for (std::size_t r = 0; r < cv.table.size(); ++r)
            cv_table.row(static_cast<Eigen::Index>(r)) << cv.table[r].rho,
                cv.table[r].mean_w2;
    }

    ensure_dir(args.out_dir);
    save_regression_model(join_path(args.out_dir, "model.json"), model);
    write_matrix_csv(join_path(args.out_dir, "cv_table.csv"), cv_table,
                     {"rho", "mean_w2"});
    return 0;
}

int cmd_predict(const PredictArgs& args) {
    RegressionModel model = load_regression_model(args.model_json);
    if (static_cast<int>(args.z_csvs.size()) != model.predictors())
        throw std::invalid_argument(
            "predict: model expects " + std::to_string(model.predictors()) +
            " predictor file(s), got " + std::to_string(args.z_csvs.size()));

    QuantileEncoder encoder(model.basis);
    std::vector<std::string> ids;
    std::vector<std::vector<QuantileSpline>> Z;
    for (std::size_t b = 0; b < args.z_csvs.size(); ++b) {
        Z.push_back(encode_file(encoder, args.z_csvs[b], b == 0 ? &ids : nullptr));
        if (Z.back().size() != Z.front().size())
            throw std::invalid_argument("predict: predictor files disagree on size");
    }

    const std::size_t n = Z.front().size();
    const int J = model.basis.J;
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), J + 101);
    parallel_for(n, [&](std::size_t i) {
        std::vector<QuantileSpline> zi;
        for (const auto& block : Z) zi.push_back(block[i]);
        const QuantileSpline pred = predict(model, zi);
        rows.row(static_cast<Eigen::Index>(i)).head(J) = pred.coeffs.transpose();
        for (int g = 0; g <= 100; ++g)
            rows(static_cast<Eigen::Index>(i), J + g) = pred.value(g / 100.0);
    });

    std::vector<std::string> names;
    for (int j = 1; j <= J; ++j) names.push_back("a" + std::to_string(j));
    for (int g = 0; g <= 100; ++g) names.push_back("q_" + std::to_string(g));
    write_matrix_csv(args.out_csv, rows, names, ids, "dist_id");
    return 0;
}

int cmd_wasserstein(const WassersteinArgs& args) {
    const auto A = read_distributions_csv(args.csv_a);
    const auto B = read_distributions_csv(args.csv_b);
    Eigen::MatrixXd dist(static_cast<Eigen::Index>(A.size()),
                         static_cast<Eigen::Index>(B.size()));
    parallel_for(A.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < B.size(); ++j)
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                wasserstein2(A[i].dist, B[j].dist);
    });

    std::vector<std::string> col_ids, row_ids;
    for (const auto& d : B) col_ids.push_back(d.id);
    for (const auto& d : A) row_ids.push_back(d.id);
    write_matrix_csv(args.out_csv, dist, col_ids, row_ids, "dist_id");
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    ensure_dir(args.out_dir);
    const auto seed = static_cast<std::uint64_t>(args.seed);

    json manifest;
    manifest["scenario"] = args.scenario;
    manifest["n"] = args.n;
    manifest["seed"] = args.seed;
    json params = json::object();
    std::vector<std::string> files;

    const std::vector<std::string> ids = numbered_ids(args.n);
    if (args.scenario == "gaussian_mix") {
        write_distributions_csv(join_path(args.out_dir, "data.csv"),
                                with_ids(gen_gaussian_mix(args.n, seed), ids));
        files = {"data.csv"};
    } else if (args.scenario == "dpm") {
        params["clusters"] = 10;
        write_distributions_csv(join_path(args.out_dir, "data.csv"),
                                with_ids(gen_dpm(args.n, 10, seed), ids));
        files = {"data.csv"};
    } else if (args.scenario == "bernstein") {
        params["order"] = 10;
        write_distributions_csv(join_path(args.out_dir, "data.csv"),
                                with_ids(gen_bernstein(args.n, 10, seed), ids));
        files = {"data.csv"};
    } else if (args.scenario == "reg_wasserstein") {
        params["basis_count"] = 30;
        RegressionScenario scn = gen_regression_pairs(args.n, seed);
        write_distributions_csv(join_path(args.out_dir, "predictors.csv"),
                                with_ids(std::move(scn.predictors), ids));
        write_distributions_csv(join_path(args.out_dir, "responses.csv"),
                                with_ids(std::move(scn.responses), ids));
        files = {"predictors.csv", "responses.csv"};
    } else if (args.scenario == "consistency_beta1" || args.scenario == "consistency_beta2") {
        const int variant = args.scenario.back() == '1' ? 1 : 2;
        params["variant"] = variant;
        ConsistencyScenario scn = gen_consistency_regression(args.n, variant, seed);
        write_distributions_csv(join_path(args.out_dir, "predictors.csv"),
                                with_ids(std::move(scn.predictors), ids));
        write_distributions_csv(join_path(args.out_dir, "responses.csv"),
                                with_ids(std::move(scn.responses), ids));
        files = {"predictors.csv", "responses.csv"};
    } else if (args.scenario == "step_quantile") {
        write_distributions_csv(join_path(args.out_dir, "data.csv"),
                                with_ids(gen_step_quantile(args.n, seed), ids));
        files = {"data.csv"};
    } else {
        throw std::invalid_argument("simulate: unknown scenario '" + args.scenario + "'");
    }

    manifest["params"] = std::move(params);
    manifest["files"] = files;
    write_text(join_path(args.out_dir, "manifest.json"), manifest.dump(2) + "\n");
    return 0;
}

int cmd_bench(const BenchArgs& args) {
    const auto data = gen_dpm(args.n, 10, static_cast<std::uint64_t>(args.seed));
    SplineBasis basis = make_basis(args.basis_size);
    QuantileEncoder encoder(basis);
    Eigen::MatrixXd coeffs(args.n, basis.J);
    parallel_for(static_cast<std::size_t>(args.n), [&](std::size_t i) {
        coeffs.row(static_cast<Eigen::Index>(i)) =
            encoder.encode(data[i]).coeffs.transpose();
    });

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    PcaModel projected = fit_pca(basis, coeffs);
    const auto t1 = clock::now();
    GeodesicOptions opts;
    opts.seed = args.seed;
    GeodesicPcaResult geodesic = fit_global_geodesic(basis, coeffs, args.dims, opts);
    const auto t2 = clock::now();

    const double proj_s = std::chrono::duration<double>(t1 - t0).count();
    const double geo_s = std::chrono::duration<double>(t2 - t1).count();
    json report{{"n", args.n},
                {"basis_size", args.basis_size},
                {"dims", args.dims},
                {"projected_seconds", proj_s},
                {"geodesic_seconds", geo_s},
                {"speedup", proj_s > 0.0 ? geo_s / proj_s : 0.0},
                {"projected_re", reconstruction_error(projected, coeffs, args.dims)},
                {"geodesic_objective", geodesic.objective}};
    std::printf("%s\n", report.dump(2).c_str());
    return 0;
}

}  // namespace wassproj::cli
