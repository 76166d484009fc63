#include <benchmark/benchmark.h>

#include "wassproj/datagen.hpp"
#include "wassproj/distributions.hpp"
#include "wassproj/geodesic_pca.hpp"
#include "wassproj/projected_pca.hpp"

namespace {

Eigen::MatrixXd encoded_dataset(int n, int J, unsigned long seed) {
    auto dists = wassproj::gen_dpm(n, 10, seed);
    wassproj::QuantileEncoder encoder(wassproj::make_basis(J));
    Eigen::MatrixXd coeffs(n, J);
    for (int i = 0; i < n; ++i)
        coeffs.row(i) = encoder.encode(dists[static_cast<std::size_t>(i)]).coeffs.transpose();
    return coeffs;
}

void BM_ProjectedPca(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int J = 20;
    Eigen::MatrixXd coeffs = encoded_dataset(n, J, 3);
    wassproj::SplineBasis basis = wassproj::make_basis(J);
    for (auto _ : state)
        benchmark::DoNotOptimize(wassproj::fit_pca(basis, coeffs));
}

void BM_GlobalGeodesicPca(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int J = 20;
    Eigen::MatrixXd coeffs = encoded_dataset(n, J, 3);
    wassproj::SplineBasis basis = wassproj::make_basis(J);
    wassproj::GeodesicOptions opts;
    opts.restarts = 1;
    opts.max_outer_iterations = 50;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            wassproj::fit_global_geodesic(basis, coeffs, 3, opts));
}

}  // namespace

BENCHMARK(BM_ProjectedPca)->Arg(50)->Arg(100);
BENCHMARK(BM_GlobalGeodesicPca)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
