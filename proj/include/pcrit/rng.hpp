#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace pcrit {

/**
 * Platform-independent random stream.
 *
 * std::mt19937_64 output is fixed by the standard, but the standard
 * distributions are not, so the uniform, normal and gamma transforms are
 * implemented here to keep samples bitwise reproducible across toolchains.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Name recorded in outputs so a run can be reproduced elsewhere.
    static constexpr std::string_view algorithm = "mt19937_64+polar-normal+marsaglia-tsang-gamma";

    std::uint64_t next() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();
    double gamma(double shape);
    /// Dirichlet draw written into out; alpha entries of zero yield zero.
    void dirichlet(std::span<const double> alpha, std::span<double> out);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Independent child seed for stream index `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace pcrit
