#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cadlag_path.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "levy.hpp"
#include "rng.hpp"

namespace levysync {

using VectorField = std::function<std::vector<double>(const std::vector<double>&)>;
using JumpCoefficient = std::function<std::vector<double>(const std::vector<double>&, double)>;

// dY = f(Y)dt + coeff . dL over a realized noise path. The noise pointer is
// non-owning; the realization must outlive the integration call. max_step > 0
// caps the internal step for stiff drifts without changing the output nodes.
struct AdditiveSdeSpec {
    VectorField f;
    std::vector<double> noise_coeff;
    const CadlagPath* noise = nullptr;
    double max_step = 0.0;
};

struct DissipativityEstimate {
    double l_hat = 0.0;
    int sample_count = 0;
    double domain_radius = 0.0;
    bool violated = false;
};

struct GrowthCheck {
    bool bounded = false;
    double worst_ratio = 0.0;
};

// General jump diffusion: drift b, diffusion sigma (dim x noise_dim,
// row-major), small jumps |x| < cutoff through small_jump with compensator
// correction, large jumps through large_jump at exact arrival times. An
// alpha-stable triplet enters as a single per-cell increment channel on
// component 0 and admits no jump coefficients. scripted_jumps overrides the
// sampled arrivals (deterministic scenarios); empty means sample from the
// triplet with the given seed.
struct GeneralSdeSpec {
    int dim = 1;
    int noise_dim = 1;
    VectorField b;
    VectorField sigma;
    JumpCoefficient small_jump;
    JumpCoefficient large_jump;
    double cutoff = 1.0;
    GeneratingTriplet triplet;
    std::vector<std::pair<double, double>> scripted_jumps;
};

namespace detail {

inline double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

[[noreturn]] inline void throw_divergence(double t) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "integrate: state passed the 1e12 guard at t = %.6g", t);
    throw divergence_error(buf);
}

// merged event timeline: grid nodes plus exact jump times, each event
// remembering whether a jump fires there
struct EventLine {
    std::vector<double> times;
    std::vector<std::size_t> jump_index; // size_t(-1) when no jump at the event
};

inline EventLine merge_events(const SimulationGrid& grid, const std::vector<std::pair<double, double>>& jumps) {
    EventLine ev;
    const std::size_t none = static_cast<std::size_t>(-1);
    std::int64_t k = 1;
    std::size_t j = 0;
    ev.times.push_back(grid.t_start());
    ev.jump_index.push_back(none);
    while (k <= grid.n_cells() || j < jumps.size()) {
        const double tg = k <= grid.n_cells() ? grid.node(k) : std::numeric_limits<double>::infinity();
        const double tj = j < jumps.size() ? jumps[j].first : std::numeric_limits<double>::infinity();
        if (tj < tg) {
            ev.times.push_back(tj);
            ev.jump_index.push_back(j++);
        } else if (tg < tj) {
            ev.times.push_back(tg);
            ev.jump_index.push_back(none);
            ++k;
        } else {
            ev.times.push_back(tg);
            ev.jump_index.push_back(j++);
            ++k;
        }
    }
    return ev;
}

// 16-point Gauss-Legendre rule on [-1, 1]
constexpr double gl_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double gl_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// integral of h over [a, b] with two stacked 16-point panels
template <class Fn>
inline void gauss_integral_into(Fn&& h, double a, double b, std::vector<double>& acc, std::vector<double>& buf) {
    const double mid = 0.5 * (a + b);
    for (const auto [lo, hi] : {std::pair{a, mid}, std::pair{mid, b}}) {
        const double c = 0.5 * (lo + hi);
        const double r = 0.5 * (hi - lo);
        for (int i = 0; i < 8; ++i) {
            for (double s : {c - r * gl_x[i], c + r * gl_x[i]}) {
                h(s, buf);
                for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += r * gl_w[i] * buf[q];
            }
        }
    }
}

// E[F(y, x) 1_{|x| < cutoff}] under the jump size law, times one (rate is
// applied by the caller)
inline std::vector<double> small_jump_mean(const JumpCoefficient& F, const std::vector<double>& y,
                                           const JumpDistribution& dist, double cutoff, int dim) {
    std::vector<double> acc(dim, 0.0);
    std::vector<double> buf;
    auto eval = [&](double x, std::vector<double>& out) { out = F(y, x); };
    switch (dist.kind) {
    case JumpDistribution::Kind::Constant:
        if (std::abs(dist.p1) < cutoff) acc = F(y, dist.p1);
        break;
    case JumpDistribution::Kind::PlusMinusOne:
        if (1.0 < cutoff) {
            acc = F(y, 1.0);
            const std::vector<double> neg = F(y, -1.0);
            for (int c = 0; c < dim; ++c) acc[c] = 0.5 * (acc[c] + neg[c]);
        }
        break;
    case JumpDistribution::Kind::Uniform: {
        const double lo = std::max(dist.p1, -cutoff);
        const double hi = std::min(dist.p2, cutoff);
        if (lo < hi) {
            gauss_integral_into(eval, lo, hi, acc, buf);
            for (double& v : acc) v /= dist.p2 - dist.p1;
        }
        break;
    }
    case JumpDistribution::Kind::Normal: {
        const double inv = 1.0 / (dist.p2 * std::sqrt(2.0 * std::acos(-1.0)));
        auto weighted = [&](double x, std::vector<double>& out) {
            out = F(y, x);
            const double z = (x - dist.p1) / dist.p2;
            const double w = inv * std::exp(-0.5 * z * z);
            for (double& v : out) v *= w;
        };
        gauss_integral_into(weighted, -cutoff, cutoff, acc, buf);
        break;
    }
    case JumpDistribution::Kind::Exponential: {
        auto weighted = [&](double x, std::vector<double>& out) {
            out = F(y, x);
            const double w = std::exp(-x / dist.p1) / dist.p1;
            for (double& v : out) v *= w;
        };
        gauss_integral_into(weighted, 0.0, cutoff, acc, buf);
        break;
    }
    }
    return acc;
}

} // namespace detail

// Jump-adapted Euler-Maruyama over the realized noise: nodes are the grid
// nodes plus the noise's exact jump times; the continuous noise increment is
// read off the path between events and the jump increment is applied to the
// left-limit state at the event itself.
inline CadlagPath integrate_additive(const AdditiveSdeSpec& spec, const SimulationGrid& grid,
                                     std::vector<double> y0) {
    if (!spec.f) throw parameter_error("integrate: drift function is empty");
    if (spec.noise == nullptr) throw parameter_error("integrate: noise path is missing");
    const CadlagPath& L = *spec.noise;
    const int d = L.dim();
    if (static_cast<int>(y0.size()) != d || static_cast<int>(spec.noise_coeff.size()) != d)
        throw parameter_error("integrate: state, coefficient and noise dimensions must agree");
    if (L.t_begin() > grid.t_start() || L.t_end() < grid.t_end())
        throw path_domain_error("integrate: noise does not cover the integration window");

    std::vector<std::pair<double, double>> jumps;
    for (std::size_t i = 0; i < L.size(); ++i) {
        const double t = L.time(i);
        if (L.is_jump(i) && t > grid.t_start() && t <= grid.t_end()) jumps.emplace_back(t, 0.0);
    }
    const detail::EventLine ev = detail::merge_events(grid, jumps);

    CadlagPath out(d);
    out.reserve(ev.times.size());
    std::vector<double> y = std::move(y0);
    std::vector<double> la(d), lb(d), pre(d);
    out.push_knot(ev.times.front(), y);

    for (std::size_t e = 1; e < ev.times.size(); ++e) {
        const double u = ev.times[e - 1];
        const double v = ev.times[e];
        const bool jump_at_v = ev.jump_index[e] != static_cast<std::size_t>(-1);
        const int n_sub = spec.max_step > 0.0 ? std::max(1, static_cast<int>(std::ceil((v - u) / spec.max_step))) : 1;
        for (int s = 0; s < n_sub; ++s) {
            const double a = u + (v - u) * s / n_sub;
            const double b = s + 1 == n_sub ? v : u + (v - u) * (s + 1) / n_sub;
            L.eval_into(a, la);
            if (b == v && jump_at_v)
                L.left_limit_into(v, lb);
            else
                L.eval_into(b, lb);
            const std::vector<double> drift = spec.f(y);
            for (int c = 0; c < d; ++c) y[c] += drift[c] * (b - a) + spec.noise_coeff[c] * (lb[c] - la[c]);
        }
        if (detail::sup_abs(y) > 1e12) detail::throw_divergence(v);
        if (jump_at_v) {
            pre = y;
            L.left_limit_into(v, la);
            L.eval_into(v, lb);
            for (int c = 0; c < d; ++c) y[c] += spec.noise_coeff[c] * (lb[c] - la[c]);
            out.push_knot(v, pre, y);
        } else {
            out.push_knot(v, y);
        }
    }
    return out;
}

// General-form Euler-Maruyama. Samples its own Brownian and jump inputs from
// the triplet (substreams mirror the noise sampler's layout) unless scripted
// jumps are supplied.
inline CadlagPath integrate_general(const GeneralSdeSpec& spec, const SimulationGrid& grid,
                                    std::vector<double> y0, std::uint64_t seed) {
    spec.triplet.validate();
    const int d = spec.dim;
    const int r = spec.noise_dim;
    if (d < 1 || r < 1) throw parameter_error("integrate: dimensions must be >= 1");
    if (static_cast<int>(y0.size()) != d) throw parameter_error("integrate: initial state has the wrong dimension");
    if (!(spec.cutoff > 0.0)) throw parameter_error("integrate: cutoff must be positive");
    if (spec.triplet.dim != r)
        throw parameter_error("integrate: triplet dimension must match noise_dim");

    const bool is_stable = spec.triplet.jumps.kind == JumpMeasureSpec::Kind::AlphaStable;
    const bool is_cp = spec.triplet.jumps.kind == JumpMeasureSpec::Kind::CompoundPoisson;
    if (is_stable && (spec.small_jump || spec.large_jump))
        throw capability_error("integrate: jump coefficients need a finite-activity measure");
    if (!spec.scripted_jumps.empty() && is_stable)
        throw capability_error("integrate: scripted jumps need a finite-activity measure");

    Stream gauss(split_seed(seed, 0));
    Stream jump_rng(split_seed(seed, 1));
    Stream stable_rng(split_seed(seed, 2));

    std::vector<std::pair<double, double>> jumps = spec.scripted_jumps;
    if (jumps.empty() && is_cp) {
        double t = grid.t_start();
        while (true) {
            double next = t + jump_rng.exponential(1.0 / spec.triplet.jumps.rate);
            if (next <= t) next = std::nextafter(t, grid.t_end() + 1.0);
            t = next;
            if (t > grid.t_end()) break;
            jumps.emplace_back(t, spec.triplet.jumps.dist.draw(jump_rng));
        }
    }
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        if (jumps[i].first <= grid.t_start() || jumps[i].first > grid.t_end())
            throw parameter_error("integrate: scripted jump outside the grid");
        if (i > 0 && jumps[i].first <= jumps[i - 1].first)
            throw parameter_error("integrate: scripted jumps must be strictly increasing");
    }
    for (const auto& [tau, x] : jumps) {
        (void)tau;
        if (std::abs(x) >= spec.cutoff && !spec.large_jump)
            throw capability_error("integrate: a large jump arrived but no large-jump coefficient is set");
        if (std::abs(x) < spec.cutoff && !spec.small_jump)
            throw capability_error("integrate: a small jump arrived but no small-jump coefficient is set");
    }

    const std::vector<double> chol = detail::psd_cholesky(spec.triplet.A, r);
    bool has_gauss = false;
    for (double v : chol)
        if (v != 0.0) has_gauss = true;
    const bool compensate = is_cp && static_cast<bool>(spec.small_jump);
    const double inv_alpha = is_stable ? 1.0 / spec.triplet.jumps.alpha : 0.0;

    const detail::EventLine ev = detail::merge_events(grid, jumps);
    CadlagPath out(d);
    out.reserve(ev.times.size());
    std::vector<double> y = std::move(y0);
    std::vector<double> z(r), dw(r), pre(d);
    out.push_knot(ev.times.front(), y);

    for (std::size_t e = 1; e < ev.times.size(); ++e) {
        const double u = ev.times[e - 1];
        const double v = ev.times[e];
        const double h = v - u;
        if (h > 0.0) {
            const std::vector<double> drift = spec.b ? spec.b(y) : std::vector<double>(d, 0.0);
            for (int c = 0; c < d; ++c) pre[c] = y[c] + drift[c] * h;
            for (int c = 0; c < r; ++c) {
                z[c] = has_gauss ? gauss.gaussian() : 0.0;
                dw[c] = 0.0;
            }
            if (has_gauss) {
                const double sq = std::sqrt(h);
                for (int i = 0; i < r; ++i) {
                    double s = 0.0;
                    for (int j = 0; j <= i; ++j) s += chol[i * r + j] * z[j];
                    dw[i] = sq * s;
                }
            }
            for (int c = 0; c < r; ++c) dw[c] += spec.triplet.gamma[c] * h;
            if (spec.sigma) {
                const std::vector<double> sig = spec.sigma(y);
                if (static_cast<int>(sig.size()) != d * r)
                    throw parameter_error("integrate: sigma must return a dim x noise_dim matrix");
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < r; ++j) pre[i] += sig[i * r + j] * dw[j];
            } else {
                for (int c = 0; c < std::min(d, r); ++c) pre[c] += dw[c];
            }
            if (is_stable)
                pre[0] += spec.triplet.jumps.scale * std::pow(h, inv_alpha) *
                          stable_rng.stable(spec.triplet.jumps.alpha, spec.triplet.jumps.skew);
            if (compensate) {
                const std::vector<double> mean =
                    detail::small_jump_mean(spec.small_jump, y, spec.triplet.jumps.dist, spec.cutoff, d);
                for (int c = 0; c < d; ++c) pre[c] -= spec.triplet.jumps.rate * mean[c] * h;
            }
            y = pre;
        }
        if (detail::sup_abs(y) > 1e12) detail::throw_divergence(v);
        const std::size_t ji = ev.jump_index[e];
        if (ji != static_cast<std::size_t>(-1)) {
            const double x = jumps[ji].second;
            pre = y;
            const std::vector<double> move =
                std::abs(x) >= spec.cutoff ? spec.large_jump(pre, x) : spec.small_jump(pre, x);
            if (static_cast<int>(move.size()) != d)
                throw parameter_error("integrate: jump coefficient returned the wrong dimension");
            for (int c = 0; c < d; ++c) y[c] += move[c];
            out.push_knot(v, pre, y);
        } else {
            out.push_knot(v, y);
        }
    }
    return out;
}

// l_hat = min over sampled pairs of -<x1 - x2, f(x1) - f(x2)> / |x1 - x2|^2
// in the ball of the given radius. violated flags l_hat <= l_min.
inline DissipativityEstimate estimate_dissipativity(const VectorField& f, double domain_radius, int n_samples,
                                                    std::uint64_t seed, int dim = 1, double l_min = 0.0) {
    if (!f) throw parameter_error("dissipativity: drift function is empty");
    if (n_samples < 2) throw parameter_error("dissipativity: need at least 2 samples");
    if (!(domain_radius > 0.0)) throw parameter_error("dissipativity: radius must be positive");
    if (dim < 1) throw parameter_error("dissipativity: dimension must be >= 1");

    Stream rng(seed);
    auto draw_in_ball = [&](std::vector<double>& p) {
        while (true) {
            double n2 = 0.0;
            for (int c = 0; c < dim; ++c) {
                p[c] = rng.uniform(-domain_radius, domain_radius);
                n2 += p[c] * p[c];
            }
            if (n2 <= domain_radius * domain_radius) return;
        }
    };

    DissipativityEstimate est;
    est.l_hat = std::numeric_limits<double>::infinity();
    est.domain_radius = domain_radius;
    std::vector<double> x1(dim), x2(dim);
    while (est.sample_count < n_samples) {
        draw_in_ball(x1);
        draw_in_ball(x2);
        double n2 = 0.0;
        for (int c = 0; c < dim; ++c) n2 += (x1[c] - x2[c]) * (x1[c] - x2[c]);
        if (n2 < 1e-24) continue; // degenerate pair, resample
        const std::vector<double> f1 = f(x1);
        const std::vector<double> f2 = f(x2);
        double inner = 0.0;
        for (int c = 0; c < dim; ++c) inner += (x1[c] - x2[c]) * (f1[c] - f2[c]);
        est.l_hat = std::min(est.l_hat, -inner / n2);
        ++est.sample_count;
    }
    est.violated = !(est.l_hat > l_min);
    return est;
}

// Worst sampled value of (|b(y)|^2 + trace a(y,y)) / (1 + |y|)^2, probed on
// doubling radii up to at least 1e3; bounded means no doubling grew the worst
// ratio by 1.5x or more.
inline GrowthCheck check_linear_growth(const VectorField& b, const VectorField& sigma_row_norms,
                                       double domain_radius, int n_samples, std::uint64_t seed, int dim = 1) {
    if (!b) throw parameter_error("growth: drift function is empty");
    if (n_samples < 1) throw parameter_error("growth: need at least 1 sample");
    if (!(domain_radius > 0.0)) throw parameter_error("growth: radius must be positive");

    Stream rng(seed);
    std::vector<double> y(dim);
    auto worst_at = [&](double radius) {
        double worst = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            double n2 = 0.0;
            for (int c = 0; c < dim; ++c) {
                y[c] = rng.uniform(-radius, radius);
                n2 += y[c] * y[c];
            }
            const std::vector<double> bv = b(y);
            double num = 0.0;
            for (double v : bv) num += v * v;
            if (sigma_row_norms) {
                for (double v : sigma_row_norms(y)) num += v * v;
            }
            const double den = (1.0 + std::sqrt(n2)) * (1.0 + std::sqrt(n2));
            worst = std::max(worst, num / den);
        }
        return worst;
    };

    GrowthCheck check;
    check.bounded = true;
    double prev = worst_at(domain_radius);
    check.worst_ratio = prev;
    for (double radius = 2.0 * domain_radius; radius <= std::max(1024.0 * domain_radius, 1e3); radius *= 2.0) {
        const double cur = worst_at(radius);
        check.worst_ratio = std::max(check.worst_ratio, cur);
        if (cur >= 1.5 * std::max(prev, 1e-12)) check.bounded = false;
        prev = cur;
        if (radius > 1e3) break;
    }
    return check;
}

} // namespace levysync
