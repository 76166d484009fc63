#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <json.hpp>

#include "commands.hpp"

namespace {

// Errors leave through stderr as a single JSON object so callers can parse
// failures mechanically.
int fail(const std::exception& e, const char* type) {
    nlohmann::json err{{"error", {{"type", type}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Projected statistics for 1-d distributions under the 2-Wasserstein metric"};
    app.require_subcommand(1);

    wassproj::cli::EncodeArgs encode_args;
    auto* encode = app.add_subcommand("encode", "Fit quantile-spline coefficients to distributions");
    encode->add_option("input", encode_args.input_csv, "Distributions CSV")->required();
    encode->add_option("--basis-size", encode_args.basis_size, "Spline basis size J");
    encode->add_option("--out", encode_args.out_csv, "Output coefficients CSV")->required();

    wassproj::cli::PcaArgs pca_args;
    auto* pca = app.add_subcommand("pca", "Principal component analysis of encoded datasets");
    pca->add_option("coeffs", pca_args.coeffs_csv, "Coefficients CSV from encode")->required();
    pca->add_option("--dims", pca_args.dims, "Number of components");
    pca->add_option("--method", pca_args.method, "projected | global | nested");
    pca->add_option("--seed", pca_args.seed, "Seed for geodesic restarts");
    pca->add_option("--out", pca_args.out_dir, "Output directory")->required();

    wassproj::cli::PcaArgs geo_args;
    geo_args.method = "global";
    auto* geo = app.add_subcommand("geodesic-pca", "Geodesic PCA (global or nested)");
    geo->add_option("coeffs", geo_args.coeffs_csv, "Coefficients CSV from encode")->required();
    geo->add_option("--dims", geo_args.dims, "Number of components");
    geo->add_option("--method", geo_args.method, "global | nested");
    geo->add_option("--seed", geo_args.seed, "Seed for restarts");
    geo->add_option("--out", geo_args.out_dir, "Output directory")->required();

    wassproj::cli::RegressArgs regress_args;
    auto* regress = app.add_subcommand("regress", "Distribution-on-distribution linear regression");
    regress->add_option("--z", regress_args.z_csvs, "Predictor distributions CSV (repeatable)")
        ->required()
        ->expected(-1);
    regress->add_option("--y", regress_args.y_csv, "Response distributions CSV")->required();
    regress->add_option("--basis-size", regress_args.basis_size, "Spline basis size J");
    regress->add_option("--rho", regress_args.rho, "Fixed penalty; omit to cross-validate");
    regress->add_option("--rho-grid", regress_args.rho_grid, "Penalty grid for cross-validation")
        ->delimiter(',');
    regress->add_option("--folds", regress_args.folds, "CV folds; 0 = leave-one-out");
    regress->add_flag("--no-intercept", regress_args.no_intercept, "Drop the intercept term");
    regress->add_option("--out", regress_args.out_dir, "Output directory")->required();

    wassproj::cli::PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Predict response distributions from a model");
    predict->add_option("model", predict_args.model_json, "Model JSON from regress")->required();
    predict->add_option("--z", predict_args.z_csvs, "Predictor distributions CSV (repeatable)")
        ->required()
        ->expected(-1);
    predict->add_option("--out", predict_args.out_csv, "Predictions CSV")->required();

    wassproj::cli::WassersteinArgs w_args;
    auto* wass = app.add_subcommand("wasserstein", "Pairwise W2 distance matrix");
    wass->add_option("csv_a", w_args.csv_a, "First distributions CSV")->required();
    wass->add_option("csv_b", w_args.csv_b, "Second distributions CSV")->required();
    wass->add_option("--out", w_args.out_csv, "Output matrix CSV")->required();

    wassproj::cli::SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Sample synthetic distribution datasets");
    sim->add_option("--scenario", sim_args.scenario,
                    "gaussian_mix | dpm | bernstein | reg_wasserstein | "
                    "consistency_beta1 | consistency_beta2 | step_quantile")
        ->required();
    sim->add_option("--n", sim_args.n, "Number of distributions / pairs");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--out", sim_args.out_dir, "Output directory")->required();

    wassproj::cli::BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time projected vs geodesic PCA on synthetic data");
    bench->add_option("--n", bench_args.n, "Dataset size");
    bench->add_option("--basis-size", bench_args.basis_size, "Spline basis size J");
    bench->add_option("--dims", bench_args.dims, "Number of components");
    bench->add_option("--seed", bench_args.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed()) return wassproj::cli::cmd_encode(encode_args);
        if (pca->parsed()) return wassproj::cli::cmd_pca(pca_args);
        if (geo->parsed()) {
            if (geo_args.method != "global" && geo_args.method != "nested")
                throw std::invalid_argument("geodesic-pca: method must be global or nested");
            return wassproj::cli::cmd_pca(geo_args);
        }
        if (regress->parsed()) return wassproj::cli::cmd_regress(regress_args);
        if (predict->parsed()) return wassproj::cli::cmd_predict(predict_args);
        if (wass->parsed()) return wassproj::cli::cmd_wasserstein(w_args);
        if (sim->parsed()) return wassproj::cli::cmd_simulate(sim_args);
        if (bench->parsed()) return wassproj::cli::cmd_bench(bench_args);
    } catch (const std::invalid_argument& e) {
        return fail(e, "invalid_argument");
    } catch (const std::domain_error& e) {
        return fail(e, "domain_error");
    } catch (const std::exception& e) {
        return fail(e, "runtime_error");
    }
    return 0;
}
