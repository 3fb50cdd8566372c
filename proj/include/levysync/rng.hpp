#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "errors.hpp"

namespace levysync {

// splitmix64 step; used only to derive well-mixed substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One root seed fans out to independent substreams keyed by (channel, index).
// channel: which noise / which role, index: component or purpose within it.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t channel, std::uint64_t index = 0) {
    std::uint64_t s = mix64(root ^ 0x6a09e667f3bcc909ULL);
    s = mix64(s ^ (channel * 0xd1342543de82ef95ULL + 1));
    s = mix64(s ^ (index * 0xaf251af3b0f025b5ULL + 1));
    return s;
}

// Deterministic draw stream. All transforms are written out explicitly so the
// produced values depend only on the engine, not on the standard library's
// distribution implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on the open interval (0,1); never returns an endpoint.
    double uniform_open() {
        const std::uint64_t bits = engine_() >> 11; // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

    // Box-Muller, cosine branch only; two engine draws per value.
    double gaussian() {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double exponential(double mean) {
        return -mean * std::log(uniform_open());
    }

    // Chambers-Mallows-Stuck draw of a standard alpha-stable variate,
    // S_alpha(scale 1, skew beta, location 0), alpha in (1,2). For this range
    // the variate has mean zero for every skew.
    double stable(double alpha, double beta) {
        if (!(alpha > 1.0 && alpha < 2.0))
            throw parameter_error("stable: alpha must lie in (1,2), got " + std::to_string(alpha));
        if (!(beta >= -1.0 && beta <= 1.0))
            throw parameter_error("stable: skew must lie in [-1,1], got " + std::to_string(beta));
        const double u = std::numbers::pi * (uniform_open() - 0.5);
        const double w = exponential(1.0);
        const double inv_alpha = 1.0 / alpha;
        if (beta == 0.0) {
            return std::sin(alpha * u) / std::pow(std::cos(u), inv_alpha) *
                   std::pow(std::cos(u - alpha * u) / w, (1.0 - alpha) * inv_alpha);
        }
        const double zeta = -beta * std::tan(std::numbers::pi * alpha / 2.0);
        const double xi = inv_alpha * std::atan(-zeta);
        return std::pow(1.0 + zeta * zeta, 0.5 * inv_alpha) *
               std::sin(alpha * (u + xi)) / std::pow(std::cos(u), inv_alpha) *
               std::pow(std::cos(u - alpha * (u + xi)) / w, (1.0 - alpha) * inv_alpha);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace levysync
