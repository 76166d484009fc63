#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wassproj/distributions.hpp"
#include "wassproj/monotone_projection.hpp"

using namespace wassproj;

namespace {

// Greville coefficients reproduce the identity exactly in a clamped
// quadratic basis: c_i = (t_{i+1} + t_{i+2}) / 2.
Eigen::VectorXd identity_coeffs(const SplineBasis& basis) {
    Eigen::VectorXd c(basis.J);
    for (int i = 0; i < basis.J; ++i)
        c(i) = 0.5 * (basis.knots[static_cast<std::size_t>(i + 1)] +
                      basis.knots[static_cast<std::size_t>(i + 2)]);
    return c;
}

Eigen::VectorXd random_monotone(std::mt19937_64& rng, int J, double lo = -2.0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd c(J);
    double acc = lo + unif(rng);
    for (int i = 0; i < J; ++i) {
        acc += unif(rng);
        c(i) = acc;
    }
    return c;
}

double normal_quantile(double t) {
    // Bisection on the CDF; plenty for test tolerances.
    double a = -10.0, b = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (0.5 * (1.0 + std::erf(m / M_SQRT2)) < t)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

EmpiricalDistribution standard_normal_histogram() {
    const int bins = 2048;
    std::vector<double> edges(bins + 1), masses(bins);
    double total = 0.0;
    for (int i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = -10.0 + 20.0 * i / bins;
    for (int i = 0; i < bins; ++i) {
        const auto cdf = [](double x) { return 0.5 * (1.0 + std::erf(x / M_SQRT2)); };
        masses[static_cast<std::size_t>(i)] =
            cdf(edges[static_cast<std::size_t>(i + 1)]) - cdf(edges[static_cast<std::size_t>(i)]);
        total += masses[static_cast<std::size_t>(i)];
    }
    for (auto& m : masses) m /= total;
    return EmpiricalDistribution::from_histogram(edges, masses);
}

}  // namespace

TEST_SUITE_BEGIN("distributions");

TEST_CASE("sample quantiles are the order statistics") {
    auto d = EmpiricalDistribution::from_samples({3.0, 1.0, 2.0});
    CHECK(quantile_at(d, 1.0 / 3.0) == 1.0);
    CHECK(quantile_at(d, 0.34) == 2.0);
    CHECK(quantile_at(d, 2.0 / 3.0) == 2.0);
    CHECK(quantile_at(d, 0.67) == 3.0);
    CHECK(quantile_at(d, 1.0) == 3.0);
    CHECK(quantile_at(d, 1e-9) == 1.0);
    CHECK_THROWS_AS(quantile_at(d, 0.0), std::domain_error);
    CHECK_THROWS_AS(quantile_at(d, 1.0 + 1e-12), std::domain_error);
}

TEST_CASE("histogram quantiles interpolate within bins and skip empty bins") {
    auto d = EmpiricalDistribution::from_histogram({0.0, 1.0, 3.0}, {0.25, 0.75});
    CHECK(quantile_at(d, 0.125) == doctest::Approx(0.5));
    CHECK(quantile_at(d, 0.25) == doctest::Approx(1.0));
    CHECK(quantile_at(d, 0.625) == doctest::Approx(2.0));
    CHECK(quantile_at(d, 1.0) == doctest::Approx(3.0));

    auto gap = EmpiricalDistribution::from_histogram({0.0, 1.0, 2.0, 3.0},
                                                     {0.5, 0.0, 0.5});
    CHECK(quantile_at(gap, 0.75) == doctest::Approx(2.5));
    CHECK(quantile_at(gap, 0.5 + 1e-9) >= 2.0);  // the empty middle bin is skipped
}

TEST_CASE("histogram validation") {
    CHECK_THROWS_AS(EmpiricalDistribution::from_histogram({0.0, 0.0, 1.0}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalDistribution::from_histogram({0.0, 1.0}, {-0.1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalDistribution::from_histogram({0.0, 1.0, 2.0}, {0.5, 0.4}),
                    std::invalid_argument);
    // A tiny deviation from unit mass is renormalized, not rejected.
    auto d = EmpiricalDistribution::from_histogram({0.0, 1.0}, {1.0 + 5e-13});
    CHECK(d.masses()[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(EmpiricalDistribution::from_samples({1.0, std::nan("")}),
                    std::invalid_argument);
}

TEST_CASE("wasserstein2 on samples: sorted matching, translations, point masses") {
    auto a = EmpiricalDistribution::from_samples({0.0, 1.0});
    auto b = EmpiricalDistribution::from_samples({3.0, 2.0});
    CHECK(wasserstein2(a, b) == doctest::Approx(2.0));  // sqrt(mean(4, 4))

    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    std::vector<double> xs(40), ys(40);
    for (int i = 0; i < 40; ++i) {
        xs[static_cast<std::size_t>(i)] = gauss(rng);
        ys[static_cast<std::size_t>(i)] = xs[static_cast<std::size_t>(i)] + 2.5;
    }
    CHECK(wasserstein2(EmpiricalDistribution::from_samples(xs),
                       EmpiricalDistribution::from_samples(ys)) == doctest::Approx(2.5));

    CHECK(wasserstein2(EmpiricalDistribution::from_samples({1.0}),
                       EmpiricalDistribution::from_samples({-2.0})) == doctest::Approx(3.0));
}

TEST_CASE("wasserstein2 quadrature route agrees and satisfies the triangle inequality") {
    // Uniform[0,1] vs uniform[2,3] through histograms: distance is exactly 2.
    auto u01 = EmpiricalDistribution::from_histogram({0.0, 1.0}, {1.0});
    auto u23 = EmpiricalDistribution::from_histogram({2.0, 3.0}, {1.0});
    CHECK(wasserstein2(u01, u23) == doctest::Approx(2.0).epsilon(1e-6));

    // W2(U[0,1], point mass at 0)^2 = int_0^1 t^2 dt = 1/3.
    auto atom = EmpiricalDistribution::from_samples({0.0});
    CHECK(wasserstein2(u01, atom) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-4));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> xs(17), ys(23), zs(31);
        for (auto& v : xs) v = gauss(rng);
        for (auto& v : ys) v = 1.0 + 2.0 * gauss(rng);
        for (auto& v : zs) v = -0.5 + 0.5 * gauss(rng);
        auto A = EmpiricalDistribution::from_samples(xs);
        auto B = EmpiricalDistribution::from_samples(ys);
        auto C = EmpiricalDistribution::from_samples(zs);
        CHECK(wasserstein2(A, C) <= wasserstein2(A, B) + wasserstein2(B, C) + 1e-9);
        CHECK(wasserstein2(A, B) == doctest::Approx(wasserstein2(B, A)));
    }
}

TEST_CASE("spline evaluation: constants and the identity") {
    SplineBasis basis = make_basis(12);
    QuantileSpline flat{basis, Eigen::VectorXd::Ones(12) * 4.2};
    QuantileSpline ident{basis, identity_coeffs(basis)};
    for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        CHECK(flat.value(t) == doctest::Approx(4.2).epsilon(1e-13));
        CHECK(flat.derivative(t) == doctest::Approx(0.0).scale(1.0));
        CHECK(ident.value(t) == doctest::Approx(t).epsilon(1e-12).scale(1.0));
        CHECK(ident.derivative(t) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("spline W2 equals the E-norm and a quadrature oracle") {
    SplineBasis basis = make_basis(9);
    GramPair gram = gram_matrices(basis);
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        QuantileSpline qa{basis, random_monotone(rng, 9)};
        QuantileSpline qb{basis, random_monotone(rng, 9)};
        const double direct = wasserstein2_spline(qa, qb);
        const double with_gram = wasserstein2_spline(qa, qb, gram.E);
        Eigen::VectorXd d = qa.coeffs - qb.coeffs;
        CHECK(direct == doctest::Approx(std::sqrt(d.dot(gram.E * d))).epsilon(1e-12));
        CHECK(direct == doctest::Approx(with_gram).epsilon(1e-14));
        double quad = 0.0;
        for (int s = 0; s < basis.intervals(); ++s)
            quad += oracles::simpson(
                [&](double t) {
                    const double diff = qa.value(t) - qb.value(t);
                    return diff * diff;
                },
                static_cast<double>(s) / basis.intervals(),
                static_cast<double>(s + 1) / basis.intervals(), 512);
        CHECK(direct == doctest::Approx(std::sqrt(quad)).epsilon(1e-10));
    }
}

TEST_CASE("barycenter is the coefficient mean") {
    SplineBasis basis = make_basis(7);
    std::mt19937_64 rng(3);
    std::vector<QuantileSpline> qs;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(7);
    for (int i = 0; i < 5; ++i) {
        qs.push_back({basis, random_monotone(rng, 7)});
        mean += qs.back().coeffs;
    }
    mean /= 5.0;
    QuantileSpline bar = barycenter(qs);
    CHECK((bar.coeffs - mean).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK_THROWS_AS(barycenter({}), std::invalid_argument);
}

TEST_CASE("encoder recovers representable quantiles from their samples") {
    SplineBasis basis = make_basis(10);
    std::mt19937_64 rng(17);
    QuantileEncoder encoder(basis);
    for (int rep = 0; rep < 5; ++rep) {
        QuantileSpline truth{basis, random_monotone(rng, 10)};
        std::vector<double> samples(1000);
        for (int m = 0; m < 1000; ++m)
            samples[static_cast<std::size_t>(m)] = truth.value((m + 0.5) / 1000.0);
        QuantileSpline fit = encoder.encode(EmpiricalDistribution::from_samples(samples));
        CHECK((fit.coeffs - truth.coeffs).lpNorm<Eigen::Infinity>() < 1e-8);
    }
}

TEST_CASE("encoder handles the uniform and the standard normal") {
    SplineBasis basis = make_basis(20);
    QuantileEncoder encoder(basis);

    auto uniform = EmpiricalDistribution::from_histogram({0.0, 1.0}, {1.0});
    QuantileSpline u_fit = encoder.encode(uniform);
    for (double t : {0.0, 0.2, 0.6, 1.0})
        CHECK(u_fit.value(t) == doctest::Approx(t).epsilon(1e-9).scale(1.0));
    CHECK(encoding_error(uniform, u_fit) < 1e-9);

    auto normal = standard_normal_histogram();
    QuantileSpline n_fit = encoder.encode(normal);
    CHECK(is_monotone(n_fit.coeffs, 1e-8));
    // The W2 error is dominated by the tails; it shrinks as the basis grows.
    CHECK(encoding_error(normal, n_fit) < 0.05);
    CHECK(encoding_error(normal, encode(normal, make_basis(40))) <
          encoding_error(normal, n_fit));
    for (double t : {0.1, 0.25, 0.5, 0.75, 0.9})
        CHECK(n_fit.value(t) == doctest::Approx(normal_quantile(t)).epsilon(0.02).scale(1.0));
}

TEST_CASE("encoding a two-atom distribution projects onto the monotone cone") {
    SplineBasis basis = make_basis(12);
    QuantileEncoder encoder(basis);
    auto steps = EmpiricalDistribution::from_samples({0.0, 1.0});
    QuantileSpline fit = encoder.encode(steps);
    CHECK(is_monotone(fit.coeffs, 1e-8));
    CHECK(fit.value(0.0) == doctest::Approx(0.0).epsilon(0.15).scale(1.0));
    CHECK(fit.value(1.0) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("decode_pdf: uniform density, normal density, unit mass, atoms") {
    SplineBasis basis = make_basis(20);
    QuantileSpline ident{basis, identity_coeffs(basis)};
    DecodedPdf uni = decode_pdf(ident, 64);
    CHECK_FALSE(uni.atom_warning);
    double integral = 0.0;
    const double h_uni = 1.0 / 64;
    for (double f : uni.density) {
        CHECK(f == doctest::Approx(1.0).epsilon(1e-6));
        integral += f * h_uni;
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));

    auto normal = standard_normal_histogram();
    auto sup_density_err = [&](int J) {
        QuantileSpline fit = encode(normal, make_basis(J));
        DecodedPdf pdf = decode_pdf(fit, 200);
        const double h =
            (fit.coeffs(J - 1) - fit.coeffs(0)) / static_cast<double>(pdf.grid.size());
        double integral = 0.0, sup = 0.0;
        for (std::size_t k = 0; k < pdf.grid.size(); ++k) {
            integral += pdf.density[k] * h;
            const double x = pdf.grid[k];
            if (std::abs(x) < 2.0)
                sup = std::max(sup, std::abs(pdf.density[k] -
                                             std::exp(-0.5 * x * x) /
                                                 std::sqrt(2.0 * M_PI)));
        }
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
        return sup;
    };
    // The error is dominated by the spline resolution, so doubling the basis
    // has to help.
    const double sup20 = sup_density_err(20);
    CHECK(sup20 < 0.08);
    CHECK(sup_density_err(40) < sup20);

    // A genuinely flat quantile stretch must raise the atom flag.
    Eigen::VectorXd flat_coeffs(20);
    for (int i = 0; i < 20; ++i) flat_coeffs(i) = i < 10 ? 0.0 : 1.0;
    DecodedPdf atoms = decode_pdf(QuantileSpline{basis, flat_coeffs}, 32);
    CHECK(atoms.atom_warning);

    DecodedPdf point = decode_pdf(QuantileSpline{basis, Eigen::VectorXd::Zero(20)}, 8);
    CHECK(point.atom_warning);
    CHECK_THROWS_AS(decode_pdf(ident, 1), std::invalid_argument);
}

TEST_SUITE_END();
