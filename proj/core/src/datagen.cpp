#include "wassproj/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wassproj/rng.hpp"
#include "wassproj/spline_basis.hpp"

namespace wassproj {

namespace {

constexpr int kBins = 2048;

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * (1.0 + std::erf((x - mean) / (sd * M_SQRT2)));
}

EmpiricalDistribution histogram_from_masses(double lo, double hi,
                                            std::vector<double> masses) {
    double total = 0.0;
    for (double m : masses) total += m;
    for (double& m : masses) m /= total;
    std::vector<double> edges(masses.size() + 1);
    const double width = (hi - lo) / static_cast<double>(masses.size());
    for (std::size_t b = 0; b < edges.size(); ++b)
        edges[b] = lo + width * static_cast<double>(b);
    edges.back() = hi;
    return EmpiricalDistribution::from_histogram(edges, masses);
}

/// Isotonic regression of `v` under the unweighted L2 metric (PAVA).
void pool_adjacent_violators(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> level(n), weight(n);
    std::vector<std::size_t> length(n);
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        level[blocks] = v[i];
        weight[blocks] = 1.0;
        length[blocks] = 1;
        ++blocks;
        while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
            const double w = weight[blocks - 2] + weight[blocks - 1];
            level[blocks - 2] =
                (weight[blocks - 2] * level[blocks - 2] + weight[blocks - 1] * level[blocks - 1]) / w;
            weight[blocks - 2] = w;
            length[blocks - 2] += length[blocks - 1];
            --blocks;
        }
    }
    std::size_t pos = 0;
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t r = 0; r < length[b]; ++r) v[pos++] = level[b];
}

}  // namespace

std::vector<EmpiricalDistribution> gen_gaussian_mix(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_gaussian_mix: n must be positive");
    std::vector<EmpiricalDistribution> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const double center = rng.uniform() < 0.5 ? -3.0 : 3.0;
        const double mu = rng.normal(center, 0.2);
        const double sigma = rng.uniform(0.5, 2.0);
        std::vector<double> masses(kBins);
        const double width = 20.0 / kBins;
        for (int b = 0; b < kBins; ++b) {
            const double lo = -10.0 + b * width;
            masses[static_cast<std::size_t>(b)] =
                normal_cdf(lo + width, mu, sigma) - normal_cdf(lo, mu, sigma);
        }
        out.push_back(histogram_from_masses(-10.0, 10.0, std::move(masses)));
    }
    return out;
}

std::vector<EmpiricalDistribution> gen_dpm(int n, int clusters, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_dpm: n must be positive");
    if (clusters < 1) throw std::invalid_argument("gen_dpm: clusters must be positive");
    std::vector<EmpiricalDistribution> out;
    out.reserve(static_cast<std::size_t>(n));
    const double width = 20.0 / kBins;
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::vector<double> w = rng.dirichlet(1.0 / clusters, clusters);
        std::vector<double> mu(w.size()), sigma(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) {
            mu[k] = rng.normal(0.0, 2.0);
            sigma[k] = rng.uniform(0.5, 2.0);
        }
        std::vector<double> masses(kBins, 1e-5 * width);
        for (int b = 0; b < kBins; ++b) {
            const double lo = -10.0 + b * width;
            for (std::size_t k = 0; k < w.size(); ++k)
                masses[static_cast<std::size_t>(b)] +=
                    w[k] * (normal_cdf(lo + width, mu[k], sigma[k]) -
                            normal_cdf(lo, mu[k], sigma[k]));
        }
        out.push_back(histogram_from_masses(-10.0, 10.0, std::move(masses)));
    }
    return out;
}

std::vector<EmpiricalDistribution> gen_bernstein(int n, int order, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_bernstein: n must be positive");
    if (order < 1) throw std::invalid_argument("gen_bernstein: order must be positive");
    // Beta(j, order - j + 1) log-normalizers.
    std::vector<double> log_norm(static_cast<std::size_t>(order));
    for (int j = 1; j <= order; ++j)
        log_norm[static_cast<std::size_t>(j - 1)] =
            std::lgamma(order + 1.0) - std::lgamma(static_cast<double>(j)) -
            std::lgamma(order - j + 1.0);
    std::vector<EmpiricalDistribution> out;
    out.reserve(static_cast<std::size_t>(n));
    const double width = 1.0 / kBins;
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::vector<double> w = rng.dirichlet(0.01, order);
        std::vector<double> masses(kBins, 0.0);
        for (int b = 0; b < kBins; ++b) {
            const double x = (b + 0.5) * width;
            double density = 0.0;
            for (int j = 1; j <= order; ++j)
                density += w[static_cast<std::size_t>(j - 1)] *
                           std::exp(log_norm[static_cast<std::size_t>(j - 1)] +
                                    (j - 1) * std::log(x) +
                                    (order - j) * std::log1p(-x));
            masses[static_cast<std::size_t>(b)] = density * width;
        }
        out.push_back(histogram_from_masses(0.0, 1.0, std::move(masses)));
    }
    return out;
}

RegressionScenario gen_regression_pairs(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_regression_pairs: n must be positive");
    constexpr int kCount = 30;
    constexpr int kDegree = 3;
    constexpr int kSamples = 1000;
    const std::vector<double> knots = detail::clamped_knots(kCount, kDegree);

    RegressionScenario scn;
    scn.B.resize(kCount, kCount);
    Rng op_rng(Rng::derive_seed(seed, 0xB00Cull));
    for (int j = 0; j < kCount; ++j) {
        scn.B(0, j) = op_rng.uniform(0.0, 0.5);
        for (int i = 1; i < kCount; ++i)
            scn.B(i, j) = scn.B(i - 1, j) + op_rng.uniform(0.0, 0.5);
    }

    scn.z_coeffs.resize(n, kCount);
    scn.y_coeffs.resize(n, kCount);
    scn.predictors.reserve(static_cast<std::size_t>(n));
    scn.responses.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::vector<double> incr = rng.dirichlet(1.0, kCount - 1);
        Eigen::VectorXd z(kCount);
        z(0) = 0.0;
        for (int j = 1; j < kCount; ++j) z(j) = z(j - 1) + incr[static_cast<std::size_t>(j - 1)];
        const Eigen::VectorXd y = scn.B * z;
        scn.z_coeffs.row(i) = z.transpose();
        scn.y_coeffs.row(i) = y.transpose();

        std::vector<double> zs(kSamples), ys(kSamples);
        for (int m = 0; m < kSamples; ++m) {
            const double t = (m + 0.5) / kSamples;
            const Eigen::VectorXd phi = detail::eval_clamped_bspline(knots, kDegree, kCount, t);
            zs[static_cast<std::size_t>(m)] = phi.dot(z);
            ys[static_cast<std::size_t>(m)] = phi.dot(y);
        }
        scn.predictors.push_back(EmpiricalDistribution::from_samples(zs));
        scn.responses.push_back(EmpiricalDistribution::from_samples(ys));
    }
    return scn;
}

ConsistencyScenario gen_consistency_regression(int n, int variant, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_consistency_regression: n must be positive");
    if (variant != 1 && variant != 2)
        throw std::invalid_argument("gen_consistency_regression: variant must be 1 or 2");
    constexpr int kGrid = 1000;

    const auto cube = [](double u) { return u * u * u; };
    // Variant 2 freezes each argument to the upper corner of its cell on a
    // 10x10 grid. Both kernels are additive in t and s, so the quadrature
    // of beta(t, s) z(s) ds collapses into two one-dimensional sums.
    const auto part = [&](double u) {
        if (variant == 2) u = std::ceil(u * 10.0 - 1e-12) / 10.0;
        return cube(u - 0.5);
    };

    ConsistencyScenario scn;
    scn.predictors.reserve(static_cast<std::size_t>(n));
    scn.responses.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::vector<double> incr = rng.dirichlet(0.01, kGrid);
        const double shift = rng.uniform(0.0, 5.0);
        std::vector<double> z(kGrid);
        double acc = shift;
        for (int k = 0; k < kGrid; ++k) {
            acc += incr[static_cast<std::size_t>(k)];
            z[static_cast<std::size_t>(k)] = acc;
        }

        // Midpoint quadrature of the integral operator on the same grid.
        double z_total = 0.0, s_moment = 0.0;
        for (int k = 0; k < kGrid; ++k) {
            z_total += z[static_cast<std::size_t>(k)];
            s_moment += part((k + 0.5) / kGrid) * z[static_cast<std::size_t>(k)];
        }
        std::vector<double> y(kGrid);
        for (int g = 0; g < kGrid; ++g)
            y[static_cast<std::size_t>(g)] =
                (part((g + 0.5) / kGrid) * z_total + s_moment) / kGrid;
        pool_adjacent_violators(y);
        for (double& v : y) v += rng.normal(0.0, 0.1);

        scn.predictors.push_back(EmpiricalDistribution::from_samples(z));
        scn.responses.push_back(EmpiricalDistribution::from_samples(y));
    }
    return scn;
}

std::vector<EmpiricalDistribution> gen_step_quantile(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_step_quantile: n must be positive");
    std::vector<EmpiricalDistribution> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const double v1 = std::max(0.0, rng.normal());
        const double v2 = std::max(0.0, rng.normal());
        out.push_back(EmpiricalDistribution::from_samples({v1, v1 + v2}));
    }
    return out;
}

}  // namespace wassproj
