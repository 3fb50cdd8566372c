#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cadlag_path.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "rng.hpp"

namespace levysync {

// Scalar jump-size law for compound-Poisson channels.
struct JumpDistribution {
    enum class Kind { Constant, PlusMinusOne, Normal, Uniform, Exponential };

    Kind kind = Kind::Constant;
    double p1 = 1.0; // constant value / normal mean / uniform lo / exponential mean
    double p2 = 0.0; // normal sd / uniform hi

    static JumpDistribution constant(double v) { return {Kind::Constant, v, 0.0}; }
    static JumpDistribution plus_minus_one() { return {Kind::PlusMinusOne, 0.0, 0.0}; }
    static JumpDistribution normal(double mu, double sd) { return {Kind::Normal, mu, sd}; }
    static JumpDistribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
    static JumpDistribution exponential(double mean) { return {Kind::Exponential, mean, 0.0}; }

    void validate() const {
        switch (kind) {
        case Kind::Normal:
            if (!(p2 >= 0.0)) throw parameter_error("jump distribution: normal sd must be >= 0");
            break;
        case Kind::Uniform:
            if (!(p1 < p2)) throw parameter_error("jump distribution: uniform needs lo < hi");
            break;
        case Kind::Exponential:
            if (!(p1 > 0.0)) throw parameter_error("jump distribution: exponential mean must be > 0");
            break;
        default:
            break;
        }
    }

    double draw(Stream& rng) const {
        switch (kind) {
        case Kind::Constant: return p1;
        case Kind::PlusMinusOne: return rng.uniform_open() < 0.5 ? -1.0 : 1.0;
        case Kind::Normal: return p1 + p2 * rng.gaussian();
        case Kind::Uniform: return rng.uniform(p1, p2);
        case Kind::Exponential: return rng.exponential(p1);
        }
        throw parameter_error("jump distribution: unknown kind");
    }

    double mean() const {
        switch (kind) {
        case Kind::Constant: return p1;
        case Kind::PlusMinusOne: return 0.0;
        case Kind::Normal: return p1;
        case Kind::Uniform: return 0.5 * (p1 + p2);
        case Kind::Exponential: return p1;
        }
        throw parameter_error("jump distribution: unknown kind");
    }
};

// Jump part of a generating triplet: none, finite-activity compound Poisson,
// or an alpha-stable channel handled through exact per-cell increments.
struct JumpMeasureSpec {
    enum class Kind { None, CompoundPoisson, AlphaStable };

    Kind kind = Kind::None;
    double rate = 0.0;
    JumpDistribution dist;
    double alpha = 1.5;
    double scale = 1.0;
    double skew = 0.0;

    static JumpMeasureSpec none() { return {}; }
    static JumpMeasureSpec compound_poisson(double rate, JumpDistribution dist) {
        JumpMeasureSpec s;
        s.kind = Kind::CompoundPoisson;
        s.rate = rate;
        s.dist = dist;
        return s;
    }
    static JumpMeasureSpec alpha_stable(double alpha, double scale, double skew = 0.0) {
        JumpMeasureSpec s;
        s.kind = Kind::AlphaStable;
        s.alpha = alpha;
        s.scale = scale;
        s.skew = skew;
        return s;
    }

    void validate() const {
        switch (kind) {
        case Kind::None:
            break;
        case Kind::CompoundPoisson:
            if (!(rate > 0.0)) throw parameter_error("jump measure: rate must be positive");
            dist.validate();
            break;
        case Kind::AlphaStable:
            if (!(alpha > 1.0 && alpha < 2.0))
                throw parameter_error("jump measure: alpha must lie in (1,2), got " + std::to_string(alpha));
            if (!(scale > 0.0)) throw parameter_error("jump measure: scale must be positive");
            if (!(skew >= -1.0 && skew <= 1.0))
                throw parameter_error("jump measure: skew must lie in [-1,1]");
            break;
        }
    }
};

// Generating triplet (A, nu, gamma). A is a dim x dim covariance (row-major),
// gamma the drift vector. Jump channels are scalar; requesting them on a
// multi-component process raises a capability error at sampling time.
struct GeneratingTriplet {
    int dim = 1;
    std::vector<double> A{1.0};
    std::vector<double> gamma{0.0};
    JumpMeasureSpec jumps;

    GeneratingTriplet() = default;

    // Standard brownian motion in d dimensions: identity covariance, no drift.
    explicit GeneratingTriplet(int d) {
        if (d < 1) throw parameter_error("triplet: dimension must be >= 1");
        dim = d;
        A.assign(static_cast<std::size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(i) * d + i] = 1.0;
        gamma.assign(static_cast<std::size_t>(d), 0.0);
    }

    static GeneratingTriplet scalar(double a, double drift, JumpMeasureSpec j = JumpMeasureSpec::none()) {
        GeneratingTriplet t;
        t.dim = 1;
        t.A = {a};
        t.gamma = {drift};
        t.jumps = j;
        t.validate();
        return t;
    }

    static GeneratingTriplet brownian(double a = 1.0, double drift = 0.0) { return scalar(a, drift); }

    void validate() const {
        if (dim < 1) throw parameter_error("triplet: dimension must be >= 1");
        if (A.size() != static_cast<std::size_t>(dim) * dim)
            throw parameter_error("triplet: covariance must be dim x dim");
        if (gamma.size() != static_cast<std::size_t>(dim))
            throw parameter_error("triplet: drift must have dim entries");
        for (int i = 0; i < dim; ++i) {
            if (A[static_cast<std::size_t>(i) * dim + i] < 0.0)
                throw parameter_error("triplet: covariance diagonal must be nonnegative");
            for (int j = 0; j < i; ++j)
                if (std::abs(A[i * dim + j] - A[j * dim + i]) > 1e-12)
                    throw parameter_error("triplet: covariance must be symmetric");
        }
        jumps.validate();
    }
};

namespace detail {

// Cholesky factor of a PSD matrix; zero pivots within tolerance are allowed
// so degenerate covariances (including the zero matrix) work.
inline std::vector<double> psd_cholesky(const std::vector<double>& a, int n) {
    std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            if (i == j) {
                if (s < -1e-10) throw parameter_error("triplet: covariance is not positive semidefinite");
                l[i * n + i] = s > 0.0 ? std::sqrt(std::max(s, 0.0)) : 0.0;
            } else {
                l[i * n + j] = l[j * n + j] > 0.0 ? s / l[j * n + j] : 0.0;
            }
        }
    }
    return l;
}

} // namespace detail

// A sampled Levy path together with the law and seed that produced it.
struct NoiseRealization {
    GeneratingTriplet triplet;
    SimulationGrid grid;
    std::uint64_t seed = 0;
    CadlagPath path;

    int dim() const { return triplet.dim; }
};

// Samples one Levy path on the grid, L(t_start) = 0. Gaussian and drift parts
// spread affinely across cells (exact marginals at every knot); compound-
// Poisson jumps sit at their exact exponential arrival times as path jumps;
// an alpha-stable channel contributes exact per-cell stable increments.
inline NoiseRealization sample_levy_path(const GeneratingTriplet& triplet, const SimulationGrid& grid,
                                         std::uint64_t seed) {
    triplet.validate();
    const int d = triplet.dim;
    if (triplet.jumps.kind != JumpMeasureSpec::Kind::None && d != 1)
        throw capability_error("sample_levy_path: jump channels are scalar only");

    Stream gauss(split_seed(seed, 0));
    Stream jumps(split_seed(seed, 1));
    Stream stable(split_seed(seed, 2));

    const std::vector<double> chol = detail::psd_cholesky(triplet.A, d);
    bool has_gauss = false;
    for (double v : chol)
        if (v != 0.0) has_gauss = true;

    // Exact arrival times and sizes for the finite-activity channel.
    std::vector<std::pair<double, double>> arrivals;
    if (triplet.jumps.kind == JumpMeasureSpec::Kind::CompoundPoisson) {
        double t = grid.t_start();
        while (true) {
            double next = t + jumps.exponential(1.0 / triplet.jumps.rate);
            if (next <= t) next = std::nextafter(t, grid.t_end() + 1.0);
            t = next;
            if (t > grid.t_end()) break;
            arrivals.emplace_back(t, triplet.jumps.dist.draw(jumps));
        }
    }
    const bool is_stable = triplet.jumps.kind == JumpMeasureSpec::Kind::AlphaStable;
    const double inv_alpha = is_stable ? 1.0 / triplet.jumps.alpha : 0.0;

    CadlagPath path(d);
    path.reserve(static_cast<std::size_t>(grid.n_nodes()) + 2 * arrivals.size());
    std::vector<double> acc(d, 0.0);
    std::vector<double> z(d);
    path.push_knot(grid.t_start(), acc);

    std::size_t next_jump = 0;
    auto advance = [&](double u, double v) {
        // continuous-part increment over (u, v]
        const double h = v - u;
        if (h <= 0.0) return;
        for (int c = 0; c < d; ++c) acc[c] += triplet.gamma[c] * h;
        if (has_gauss) {
            const double sq = std::sqrt(h);
            for (int c = 0; c < d; ++c) z[c] = gauss.gaussian();
            for (int i = 0; i < d; ++i) {
                double s = 0.0;
                for (int j = 0; j <= i; ++j) s += chol[i * d + j] * z[j];
                acc[i] += sq * s;
            }
        }
        if (is_stable)
            acc[0] += triplet.jumps.scale * std::pow(h, inv_alpha) *
                      stable.stable(triplet.jumps.alpha, triplet.jumps.skew);
    };

    for (std::int64_t k = 1; k <= grid.n_cells(); ++k) {
        double u = grid.node(k - 1);
        const double v = grid.node(k);
        while (next_jump < arrivals.size() && arrivals[next_jump].first <= v) {
            const auto [tau, size] = arrivals[next_jump];
            ++next_jump;
            advance(u, tau);
            std::vector<double> pre = acc;
            acc[0] += size;
            if (tau == v) {
                path.push_knot(tau, pre, acc);
                u = tau;
                goto cell_done;
            }
            path.push_knot(tau, pre, acc);
            u = tau;
        }
        advance(u, v);
        path.push_knot(v, acc);
    cell_done:;
    }

    return NoiseRealization{triplet, grid, seed, std::move(path)};
}

// Two-sided extension: an independent copy L~ supplies the past through
// L(-t) = -L~(t-), so the result is cadlag on [-T_past, T_future] with
// L(0) = 0 and mirrored jumps keeping their sign.
inline NoiseRealization build_two_sided(const GeneratingTriplet& triplet, double t_past, double t_future,
                                        double dt, std::uint64_t seed) {
    if (!(t_past > 0.0) || !(t_future > 0.0))
        throw parameter_error("build_two_sided: horizons must be positive");
    const SimulationGrid fwd_grid(0.0, t_future, dt);
    const SimulationGrid bwd_grid(0.0, t_past, dt);
    NoiseRealization fwd = sample_levy_path(triplet, fwd_grid, split_seed(seed, 7, 0));
    NoiseRealization bwd = sample_levy_path(triplet, bwd_grid, split_seed(seed, 7, 1));

    const int d = triplet.dim;
    CadlagPath path(d);
    path.reserve(fwd.path.size() + bwd.path.size());
    std::vector<double> l(d), r(d);
    for (std::size_t ri = bwd.path.size(); ri-- > 1;) {
        // knot (tau, left, right) of the copy becomes (-tau, -right, -left)
        for (int c = 0; c < d; ++c) {
            l[c] = -bwd.path.right(ri)[c];
            r[c] = -bwd.path.left(ri)[c];
        }
        path.push_knot(-bwd.path.time(ri), l, r);
    }
    for (std::size_t i = 0; i < fwd.path.size(); ++i)
        path.push_knot(fwd.path.time(i), fwd.path.left(i), fwd.path.right(i));

    return NoiseRealization{triplet, SimulationGrid(-t_past, t_future, dt), seed, std::move(path)};
}

// L(t_eval)/t_eval, the law-of-large-numbers drift estimate.
inline std::vector<double> empirical_drift(const NoiseRealization& noise, double t_eval) {
    if (t_eval == 0.0) throw path_domain_error("empirical_drift: t_eval must be nonzero");
    std::vector<double> v = noise.path.eval(t_eval);
    for (double& x : v) x /= t_eval;
    return v;
}

// Adds c*t to a scalar realization (the recentering move: absorbing a
// constant forcing term into the noise drift). Jumps are untouched.
inline NoiseRealization add_drift(const NoiseRealization& noise, double c) {
    if (noise.dim() != 1) throw capability_error("add_drift: scalar noise only");
    NoiseRealization out = noise;
    out.triplet.gamma[0] += c;
    CadlagPath path(1);
    path.reserve(noise.path.size());
    for (std::size_t i = 0; i < noise.path.size(); ++i) {
        const double t = noise.path.time(i);
        path.push_knot(t, noise.path.left(i)[0] + c * t, noise.path.right(i)[0] + c * t);
    }
    out.path = std::move(path);
    return out;
}

// Shifted realization theta_h: s -> L(h+s) - L(h).
inline NoiseRealization shift(const NoiseRealization& noise, double h) {
    NoiseRealization out = noise;
    out.path = noise.path.shift(h);
    out.grid = SimulationGrid(out.path.t_begin(), out.path.t_end(), noise.grid.dt());
    return out;
}

} // namespace levysync
