#pragma once

#include <string>
#include <vector>

// Implementations of the CLI subcommands, separated from main() so the test
// suite can drive them directly. Each returns a process exit code and throws
// on invalid input; main() converts exceptions to machine-readable JSON on
// stderr.
namespace wassproj::cli {

struct EncodeArgs {
    std::string input_csv;
    std::string out_csv;
    int basis_size = 20;
};

struct PcaArgs {
    std::string coeffs_csv;
    std::string out_dir;
    int dims = 2;
    std::string method = "projected";  // projected | global | nested
    unsigned long seed = 0;
};

struct RegressArgs {
    std::vector<std::string> z_csvs;
    std::string y_csv;
    std::string out_dir;
    int basis_size = 20;
    double rho = -1.0;  // fixed rho when >= 0, otherwise cross-validated
    std::vector<double> rho_grid;
    int folds = 0;  // 0 = leave-one-out
    bool no_intercept = false;
};

struct PredictArgs {
    std::string model_json;
    std::vector<std::string> z_csvs;
    std::string out_csv;
};

struct WassersteinArgs {
    std::string csv_a;
    std::string csv_b;
    std::string out_csv;
};

struct SimulateArgs {
    std::string scenario;
    int n = 100;
    unsigned long seed = 0;
    std::string out_dir;
};

struct BenchArgs {
    int n = 100;
    int basis_size = 20;
    int dims = 5;
    unsigned long seed = 0;
};

int cmd_encode(const EncodeArgs& args);
int cmd_pca(const PcaArgs& args);
int cmd_regress(const RegressArgs& args);
int cmd_predict(const PredictArgs& args);
int cmd_wasserstein(const WassersteinArgs& args);
int cmd_simulate(const SimulateArgs& args);
int cmd_bench(const BenchArgs& args);

}  // namespace wassproj::cli
