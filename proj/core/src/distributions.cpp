#include "wassproj/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wassproj/monotone_projection.hpp"

namespace wassproj {

namespace {

constexpr int kQuadraturePoints = 10000;
constexpr int kEncodeGridPoints = 1000;

void check_finite(const std::vector<double>& values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::from_samples(std::vector<double> samples) {
    if (samples.empty())
        throw std::invalid_argument("from_samples: empty sample set");
    check_finite(samples, "from_samples");
    std::sort(samples.begin(), samples.end());
    EmpiricalDistribution dist;
    dist.histogram_ = false;
    dist.samples_ = std::move(samples);
    return dist;
}

EmpiricalDistribution EmpiricalDistribution::from_histogram(std::vector<double> edges,
                                                            std::vector<double> masses) {
    if (edges.size() < 2 || masses.size() + 1 != edges.size())
        throw std::invalid_argument("from_histogram: need B+1 edges for B masses");
    check_finite(edges, "from_histogram");
    check_finite(masses, "from_histogram");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw std::invalid_argument("from_histogram: edges must be strictly increasing");
    double total = 0.0;
    for (double m : masses) {
        if (m < 0.0) throw std::invalid_argument("from_histogram: negative mass");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("from_histogram: masses must sum to 1");
    for (double& m : masses) m /= total;

    EmpiricalDistribution dist;
    dist.histogram_ = true;
    dist.edges_ = std::move(edges);
    dist.masses_ = std::move(masses);
    return dist;
}

double quantile_at(const EmpiricalDistribution& dist, double t) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error("quantile_at: t must lie in (0, 1]");
    if (!dist.is_histogram()) {
        const auto& x = dist.samples();
        const double n = static_cast<double>(x.size());
        // ceil(n t) with a guard against roundoff just above an integer.
        long idx = static_cast<long>(std::ceil(n * t - 1e-9));
        idx = std::clamp<long>(idx, 1, static_cast<long>(x.size()));
        return x[static_cast<std::size_t>(idx - 1)];
    }
    const auto& edges = dist.edges();
    const auto& masses = dist.masses();
    double cum = 0.0;
    for (std::size_t b = 0; b < masses.size(); ++b) {
        if (masses[b] <= 0.0) continue;
        if (cum + masses[b] >= t) {
            const double frac = (t - cum) / masses[b];
            return edges[b] + frac * (edges[b + 1] - edges[b]);
        }
        cum += masses[b];
    }
    return edges.back();
}

double wasserstein2(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (!a.is_histogram() && !b.is_histogram() && a.size() == b.size()) {
        const auto& xa = a.samples();
        const auto& xb = b.samples();
        double acc = 0.0;
        for (std::size_t i = 0; i < xa.size(); ++i) {
            const double d = xa[i] - xb[i];
            acc += d * d;
        }
        return std::sqrt(acc / static_cast<double>(xa.size()));
    }
    double acc = 0.0;
    for (int g = 0; g < kQuadraturePoints; ++g) {
        const double t = (g + 0.5) / kQuadraturePoints;
        const double d = quantile_at(a, t) - quantile_at(b, t);
        acc += d * d;
    }
    return std::sqrt(acc / kQuadraturePoints);
}

double QuantileSpline::value(double t) const {
    return eval_basis(basis, t).dot(coeffs);
}

double QuantileSpline::derivative(double t) const {
    return eval_basis_derivative(basis, t).dot(coeffs);
}

namespace {

void check_same_basis(const QuantileSpline& a, const QuantileSpline& b, const char* what) {
    if (a.basis.J != b.basis.J)
        throw std::invalid_argument(std::string(what) + ": basis sizes differ");
}

}  // namespace

double wasserstein2_spline(const QuantileSpline& a, const QuantileSpline& b,
                           const Eigen::MatrixXd& E) {
    check_same_basis(a, b, "wasserstein2_spline");
    Eigen::VectorXd d = a.coeffs - b.coeffs;
    const double sq = d.dot(E * d);
    return std::sqrt(std::max(0.0, sq));
}

double wasserstein2_spline(const QuantileSpline& a, const QuantileSpline& b) {
    check_same_basis(a, b, "wasserstein2_spline");
    return wasserstein2_spline(a, b, gram_matrices(a.basis).E);
}

QuantileSpline barycenter(const std::vector<QuantileSpline>& splines) {
    if (splines.empty())
        throw std::invalid_argument("barycenter: empty input");
    for (const auto& s : splines) check_same_basis(splines.front(), s, "barycenter");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(splines.front().basis.J);
    for (const auto& s : splines) mean += s.coeffs;
    mean /= static_cast<double>(splines.size());
    return QuantileSpline{splines.front().basis, std::move(mean)};
}

QuantileEncoder::QuantileEncoder(const SplineBasis& basis) : basis_(basis) {
    grid_.resize(kEncodeGridPoints);
    Eigen::MatrixXd design(kEncodeGridPoints, basis_.J);
    for (int m = 0; m < kEncodeGridPoints; ++m) {
        grid_[static_cast<std::size_t>(m)] = (m + 0.5) / kEncodeGridPoints;
        design.row(m) = eval_basis(basis_, grid_[static_cast<std::size_t>(m)]).transpose();
    }
    design_qr_.compute(design);
    GramPair gram = gram_matrices(basis_);
    E_ = std::move(gram.E);
    Eprime_ = std::move(gram.Eprime);
    G_ = difference_matrix(basis_.J);
}

QuantileSpline QuantileEncoder::encode(const EmpiricalDistribution& dist) const {
    Eigen::VectorXd y(kEncodeGridPoints);
    for (int m = 0; m < kEncodeGridPoints; ++m)
        y[m] = quantile_at(dist, grid_[static_cast<std::size_t>(m)]);
    Eigen::VectorXd coeffs = design_qr_.solve(y);
    if (!is_monotone(coeffs)) coeffs = project_monotone(coeffs, E_, G_);
    return QuantileSpline{basis_, std::move(coeffs)};
}

QuantileSpline encode(const EmpiricalDistribution& dist, const SplineBasis& basis) {
    return QuantileEncoder(basis).encode(dist);
}

double encoding_error(const EmpiricalDistribution& dist, const QuantileSpline& spline) {
    double acc = 0.0;
    for (int g = 0; g < kQuadraturePoints; ++g) {
        const double t = (g + 0.5) / kQuadraturePoints;
        const double d = quantile_at(dist, t) - spline.value(t);
        acc += d * d;
    }
    return std::sqrt(acc / kQuadraturePoints);
}

DecodedPdf decode_pdf(const QuantileSpline& spline, int grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("decode_pdf: grid_size must be at least 2");
    const Eigen::VectorXd& c = spline.coeffs;
    const double lo = c[0];
    const double hi = c[c.size() - 1];
    constexpr double kAtomLength = 1e-6;   // flat t-stretch that flags an atom
    constexpr double kDensityCap = 1e6;

    DecodedPdf out;
    out.grid.resize(static_cast<std::size_t>(grid_size));
    out.density.resize(static_cast<std::size_t>(grid_size));

    if (!(hi > lo)) {
        // Point mass: everything collapses onto one atom.
        for (int k = 0; k < grid_size; ++k) {
            out.grid[static_cast<std::size_t>(k)] = lo;
            out.density[static_cast<std::size_t>(k)] = kDensityCap;
        }
        out.atom_warning = true;
        return out;
    }

    // Flat-stretch scan for atoms: walk a fine t-grid and measure runs where
    // the spline does not increase appreciably.
    {
        const int fine = 4096;
        double run_start = 0.0;
        double prev_val = spline.value(0.0);
        const double eps = 1e-12 * (hi - lo);
        bool in_run = false;
        for (int i = 1; i <= fine; ++i) {
            const double t = static_cast<double>(i) / fine;
            const double v = spline.value(t);
            if (v - prev_val <= eps) {
                if (!in_run) {
                    in_run = true;
                    run_start = static_cast<double>(i - 1) / fine;
                }
            } else {
                if (in_run && t - run_start > kAtomLength + 1.0 / fine)
                    out.atom_warning = true;
                in_run = false;
            }
            prev_val = v;
        }
        if (in_run && 1.0 - run_start > kAtomLength + 1.0 / fine) out.atom_warning = true;
    }

    // Invert the nondecreasing spline by bisection at every cell edge, then
    // difference the quantile levels: each cell's density is the probability
    // mass it captures divided by its width, so the grid integral telescopes
    // to one (up to capping at atoms).
    const double h = (hi - lo) / grid_size;
    auto invert = [&spline](double x) {
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            if (spline.value(m) < x)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    };
    double t_prev = 0.0;
    for (int k = 0; k < grid_size; ++k) {
        const double t_next = k + 1 == grid_size ? 1.0 : invert(lo + (k + 1) * h);
        out.grid[static_cast<std::size_t>(k)] = lo + (k + 0.5) * h;
        out.density[static_cast<std::size_t>(k)] =
            std::min((t_next - t_prev) / h, kDensityCap);
        t_prev = t_next;
    }
    return out;
}

}  // namespace wassproj
