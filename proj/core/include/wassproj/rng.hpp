#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace wassproj {

/// Deterministic sampler on top of mt19937_64. The engine's output stream is
/// standardized, and all transformations to uniforms, normals, gammas and
/// Dirichlet vectors are implemented here, so a fixed seed reproduces the
/// same draws on any platform within one build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// splitmix64 mix for deriving independent per-item seeds.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() {  // in [2^-54, 1 - 2^-54] roughly; never exactly 0
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal(double mean = 0.0, double sd = 1.0) {
        // Box-Muller; the second variate is discarded to keep the stream
        // position a simple function of the call count.
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(2.0 * M_PI * u2);
    }

    /// Marsaglia-Tsang; shapes below one go through the boosting identity
    /// gamma(a) = gamma(a + 1) * U^{1/a}.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Symmetric Dirichlet with concentration alpha in each of k slots.
    std::vector<double> dirichlet(double alpha, int k) {
        std::vector<double> w(static_cast<std::size_t>(k));
        double total = 0.0;
        for (auto& wi : w) {
            wi = gamma(alpha);
            total += wi;
        }
        if (total <= 0.0) {
            // All gammas underflowed (tiny alpha); fall back to a single atom.
            w.assign(w.size(), 0.0);
            w[static_cast<std::size_t>(engine_() % w.size())] = 1.0;
            return w;
        }
        for (auto& wi : w) wi /= total;
        return w;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace wassproj
