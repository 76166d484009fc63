#include <doctest.h>

#include <cmath>
#include <vector>

#include "wassproj/datagen.hpp"
#include "wassproj/monotone_projection.hpp"

using namespace wassproj;

namespace {

bool same_histogram(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return a.is_histogram() && b.is_histogram() && a.edges() == b.edges() &&
           a.masses() == b.masses();
}

bool same_samples(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return !a.is_histogram() && !b.is_histogram() && a.samples() == b.samples();
}

double histogram_mean(const EmpiricalDistribution& d) {
    double m = 0.0;
    for (std::size_t b = 0; b < d.masses().size(); ++b)
        m += d.masses()[b] * 0.5 * (d.edges()[b] + d.edges()[b + 1]);
    return m;
}

void check_quantile_monotone(const EmpiricalDistribution& d) {
    double prev = quantile_at(d, 1e-4);
    for (int k = 2; k <= 10000; ++k) {
        const double cur = quantile_at(d, k * 1e-4);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

}  // namespace

TEST_SUITE_BEGIN("datagen");

TEST_CASE("fixed seeds give bit-identical reruns and prefix-stable extensions") {
    auto g1 = gen_gaussian_mix(4, 9), g2 = gen_gaussian_mix(4, 9);
    auto g6 = gen_gaussian_mix(6, 9);
    for (int i = 0; i < 4; ++i) {
        CHECK(same_histogram(g1[static_cast<std::size_t>(i)], g2[static_cast<std::size_t>(i)]));
        CHECK(same_histogram(g1[static_cast<std::size_t>(i)], g6[static_cast<std::size_t>(i)]));
    }

    auto d1 = gen_dpm(3, 10, 9), d2 = gen_dpm(3, 10, 9), d5 = gen_dpm(5, 10, 9);
    for (int i = 0; i < 3; ++i) {
        CHECK(same_histogram(d1[static_cast<std::size_t>(i)], d2[static_cast<std::size_t>(i)]));
        CHECK(same_histogram(d1[static_cast<std::size_t>(i)], d5[static_cast<std::size_t>(i)]));
    }

    auto b1 = gen_bernstein(3, 6, 9), b2 = gen_bernstein(3, 6, 9);
    for (int i = 0; i < 3; ++i)
        CHECK(same_histogram(b1[static_cast<std::size_t>(i)], b2[static_cast<std::size_t>(i)]));

    RegressionScenario r1 = gen_regression_pairs(4, 9);
    RegressionScenario r2 = gen_regression_pairs(4, 9);
    RegressionScenario r7 = gen_regression_pairs(7, 9);
    CHECK(r1.B == r2.B);
    CHECK(r1.B == r7.B);
    CHECK(r1.z_coeffs == r2.z_coeffs);
    CHECK(r1.z_coeffs == r7.z_coeffs.topRows(4));
    CHECK(r1.y_coeffs == r7.y_coeffs.topRows(4));
    for (int i = 0; i < 4; ++i) {
        CHECK(same_samples(r1.predictors[static_cast<std::size_t>(i)],
                           r7.predictors[static_cast<std::size_t>(i)]));
        CHECK(same_samples(r1.responses[static_cast<std::size_t>(i)],
                           r7.responses[static_cast<std::size_t>(i)]));
    }

    ConsistencyScenario c1 = gen_consistency_regression(2, 1, 9);
    ConsistencyScenario c2 = gen_consistency_regression(2, 1, 9);
    for (int i = 0; i < 2; ++i) {
        CHECK(same_samples(c1.predictors[static_cast<std::size_t>(i)],
                           c2.predictors[static_cast<std::size_t>(i)]));
        CHECK(same_samples(c1.responses[static_cast<std::size_t>(i)],
                           c2.responses[static_cast<std::size_t>(i)]));
    }

    auto s1 = gen_step_quantile(5, 9), s2 = gen_step_quantile(5, 9);
    auto s8 = gen_step_quantile(8, 9);
    for (int i = 0; i < 5; ++i) {
        CHECK(same_samples(s1[static_cast<std::size_t>(i)], s2[static_cast<std::size_t>(i)]));
        CHECK(same_samples(s1[static_cast<std::size_t>(i)], s8[static_cast<std::size_t>(i)]));
    }
}

TEST_CASE("gaussian mixture histograms are normalized and bimodal") {
    auto data = gen_gaussian_mix(5, 31);
    for (const auto& d : data) {
        REQUIRE(d.is_histogram());
        CHECK(d.masses().size() == 2048);
        CHECK(d.edges().front() == doctest::Approx(-10.0));
        CHECK(d.edges().back() == doctest::Approx(10.0));
        double total = 0.0;
        for (double m : d.masses()) {
            CHECK(m >= 0.0);
            total += m;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }

    // Mixture check over 10^4 locations: means concentrate near -3 or +3 in
    // roughly equal shares, with almost nothing in between.
    int low = 0, high = 0, middle = 0, n_total = 0;
    for (int batch = 0; batch < 10; ++batch) {
        auto chunk = gen_gaussian_mix(1000, 1000 + static_cast<std::uint64_t>(batch));
        for (const auto& d : chunk) {
            const double m = histogram_mean(d);
            ++n_total;
            if (m > -4.5 && m < -1.5) ++low;
            if (m > 1.5 && m < 4.5) ++high;
            if (std::abs(m) < 1.0) ++middle;
        }
    }
    CHECK(n_total == 10000);
    CHECK(low > 4000);
    CHECK(high > 4000);
    CHECK(middle < 100);
}

TEST_CASE("dpm densities stay above the renormalized floor") {
    auto data = gen_dpm(6, 10, 17);
    const double width = 20.0 / 2048;
    for (const auto& d : data) {
        REQUIRE(d.is_histogram());
        double total = 0.0, min_density = 1e300;
        for (double m : d.masses()) {
            total += m;
            min_density = std::min(min_density, m / width);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        // Pre-normalization density is mixture + 1e-5 and the normalizer is
        // at most 1 + 2e-4, so the floor survives nearly intact.
        CHECK(min_density >= 9.9e-6);
    }
    check_quantile_monotone(data[0]);
    check_quantile_monotone(data[3]);
}

TEST_CASE("bernstein mixtures are supported exactly on the unit interval") {
    auto data = gen_bernstein(5, 10, 23);
    for (const auto& d : data) {
        REQUIRE(d.is_histogram());
        CHECK(d.edges().front() == 0.0);
        CHECK(d.edges().back() == 1.0);
        double total = 0.0;
        for (double m : d.masses()) {
            CHECK(m >= 0.0);
            total += m;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    check_quantile_monotone(data[0]);
    CHECK(quantile_at(data[1], 1e-4) >= 0.0);
    CHECK(quantile_at(data[1], 1.0) <= 1.0);
}

TEST_CASE("regression pair coefficients start at zero, end at one, stay monotone") {
    const int n = 8;
    RegressionScenario scn = gen_regression_pairs(n, 2024);
    REQUIRE(scn.z_coeffs.rows() == n);
    REQUIRE(scn.z_coeffs.cols() == 30);
    REQUIRE(scn.B.rows() == 30);

    // The operator columns are cumulative with positive increments.
    for (int j = 0; j < 30; ++j) {
        CHECK(scn.B(0, j) > 0.0);
        for (int i = 1; i < 30; ++i) CHECK(scn.B(i, j) > scn.B(i - 1, j));
    }

    for (int i = 0; i < n; ++i) {
        CHECK(scn.z_coeffs(i, 0) == 0.0);
        CHECK(scn.z_coeffs(i, 29) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(is_monotone(scn.z_coeffs.row(i).transpose(), 1e-12));
        CHECK(is_monotone(scn.y_coeffs.row(i).transpose(), 1e-12));

        // Spline values are convex combinations of the coefficients, so the
        // released quantile samples stay inside the coefficient range.
        const auto& zs = scn.predictors[static_cast<std::size_t>(i)].samples();
        REQUIRE(zs.size() == 1000);
        CHECK(zs.front() >= -1e-12);
        CHECK(zs.back() <= 1.0 + 1e-12);
        const auto& ys = scn.responses[static_cast<std::size_t>(i)].samples();
        CHECK(ys.front() >= scn.y_coeffs.row(i).minCoeff() - 1e-9);
        CHECK(ys.back() <= scn.y_coeffs.row(i).maxCoeff() + 1e-9);
    }
    check_quantile_monotone(scn.predictors[0]);
}

TEST_CASE("consistency scenario: smooth kernel gives cubic-shaped responses") {
    const int n = 6;
    ConsistencyScenario scn = gen_consistency_regression(n, 1, 11);
    for (int i = 0; i < n; ++i) {
        const auto& z = scn.predictors[static_cast<std::size_t>(i)].samples();
        REQUIRE(z.size() == 1000);
        CHECK(z.front() >= 0.0);
        CHECK(z.back() <= 6.0 + 1e-9);

        // The operator output is A (t - 1/2)^3 + C before noise, so a least
        // squares fit on {1, (t - 1/2)^3} should leave only the N(0, 0.1^2)
        // noise behind.
        const auto& y = scn.responses[static_cast<std::size_t>(i)].samples();
        REQUIRE(y.size() == 1000);
        Eigen::MatrixXd X(1000, 2);
        Eigen::VectorXd rhs(1000);
        for (int m = 0; m < 1000; ++m) {
            const double t = (m + 0.5) / 1000.0;
            X(m, 0) = 1.0;
            X(m, 1) = std::pow(t - 0.5, 3);
            rhs(m) = y[static_cast<std::size_t>(m)];
        }
        Eigen::VectorXd beta = X.colPivHouseholderQr().solve(rhs);
        const double rms = std::sqrt((X * beta - rhs).squaredNorm() / 1000.0);
        CHECK(rms < 0.15);
        CHECK(beta(1) >= -0.05);  // slope coefficient is mean(z) >= 0
    }
}

TEST_CASE("consistency scenario: snapped kernel gives staircase responses") {
    const int n = 6;
    ConsistencyScenario v2 = gen_consistency_regression(n, 2, 12);
    ConsistencyScenario v1 = gen_consistency_regression(n, 1, 12);
    for (int i = 0; i < n; ++i) {
        // Predictors ignore the kernel variant, responses do not.
        CHECK(same_samples(v1.predictors[static_cast<std::size_t>(i)],
                           v2.predictors[static_cast<std::size_t>(i)]));
        const auto& y1 = v1.responses[static_cast<std::size_t>(i)].samples();
        const auto& y2 = v2.responses[static_cast<std::size_t>(i)].samples();
        double max_gap = 0.0;
        for (std::size_t m = 0; m < y1.size(); ++m)
            max_gap = std::max(max_gap, std::abs(y1[m] - y2[m]));
        CHECK(max_gap > 1e-6);

        // Within each of the ten kernel cells the pre-noise response is
        // constant; check the inner 60% of every cell against its mean and
        // that cell means rise with the cell index.
        double prev_mean = -1e300;
        for (int c = 0; c < 10; ++c) {
            double sum = 0.0;
            int count = 0;
            for (int m = 0; m < 1000; ++m) {
                const double t = (m + 0.5) / 1000.0;
                if (t < c / 10.0 + 0.02 || t > (c + 1) / 10.0 - 0.02) continue;
                sum += y2[static_cast<std::size_t>(m)];
                ++count;
            }
            REQUIRE(count > 0);
            const double mean = sum / count;
            double ss = 0.0;
            for (int m = 0; m < 1000; ++m) {
                const double t = (m + 0.5) / 1000.0;
                if (t < c / 10.0 + 0.02 || t > (c + 1) / 10.0 - 0.02) continue;
                ss += (y2[static_cast<std::size_t>(m)] - mean) *
                      (y2[static_cast<std::size_t>(m)] - mean);
            }
            CHECK(std::sqrt(ss / count) < 0.15);
            CHECK(mean >= prev_mean - 0.05);
            prev_mean = mean;
        }
    }
}

TEST_CASE("step quantiles are single steps with nonnegative levels") {
    const int n = 200;
    auto data = gen_step_quantile(n, 5);
    int zero_floor = 0, strict_step = 0;
    for (const auto& d : data) {
        REQUIRE(d.samples().size() == 2);
        const double lo = d.samples()[0], hi = d.samples()[1];
        CHECK(lo >= 0.0);
        CHECK(hi >= lo);
        CHECK(quantile_at(d, 0.25) == lo);
        CHECK(quantile_at(d, 0.5) == lo);
        CHECK(quantile_at(d, 0.75) == hi);
        CHECK(quantile_at(d, 1.0) == hi);
        if (lo == 0.0) ++zero_floor;
        if (hi > lo) ++strict_step;
    }
    // v1 = max(0, N(0,1)) is exactly zero half the time.
    CHECK(zero_floor > 50);
    CHECK(strict_step > 50);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(gen_gaussian_mix(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_dpm(0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_dpm(3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_bernstein(0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_bernstein(3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_regression_pairs(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_consistency_regression(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_consistency_regression(3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_consistency_regression(3, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_step_quantile(0, 1), std::invalid_argument);
}

TEST_SUITE_END();
