#include "pcrit/rng.hpp"

#include "pcrit/error.hpp"

#include <cmath>

namespace pcrit {

double Rng::uniform() {
    return (double(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection keeps the draw exactly uniform
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double Rng::gamma(double shape) {
    require(shape > 0.0 && std::isfinite(shape), ErrorCode::InvalidArgument, "gamma shape must be positive");
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void Rng::dirichlet(std::span<const double> alpha, std::span<double> out) {
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = alpha[i] > 0.0 ? gamma(alpha[i]) : 0.0;
        total += out[i];
    }
    if (total <= 0.0) {
        // every gamma draw underflowed; fall back to the largest concentration
        std::size_t best = 0;
        for (std::size_t i = 1; i < alpha.size(); ++i)
            if (alpha[i] > alpha[best]) best = i;
        out[best] = 1.0;
        return;
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) out[i] /= total;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace pcrit
