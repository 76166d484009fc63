#include <benchmark/benchmark.h>

#include <random>

#include "wassproj/monotone_projection.hpp"
#include "wassproj/spline_basis.hpp"

namespace {

void BM_ProjectMonotone(benchmark::State& state) {
    const int J = static_cast<int>(state.range(0));
    wassproj::SplineBasis basis = wassproj::make_basis(J);
    Eigen::MatrixXd E = wassproj::gram_matrices(basis).E;
    Eigen::MatrixXd G = wassproj::difference_matrix(J);

    std::mt19937 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::VectorXd> inputs(64);
    for (auto& v : inputs) {
        v.resize(J);
        for (int i = 0; i < J; ++i) v[i] = normal(rng);
    }

    std::size_t idx = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wassproj::project_monotone(inputs[idx % inputs.size()], E, G));
        ++idx;
    }
}

}  // namespace

BENCHMARK(BM_ProjectMonotone)->Arg(8)->Arg(20)->Arg(40);
