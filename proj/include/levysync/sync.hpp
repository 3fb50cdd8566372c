#pragma once

// Synchronization experiments on a pair of dissipative systems tied by a
// linear restoring force: the coupled pair, its averaged limit, and the
// gap / metric / contraction / absorption diagnostics, plus a seeded sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "levysync/integrate.hpp"
#include "levysync/levy.hpp"
#include "levysync/skorohod.hpp"
#include "levysync/stationary.hpp"

namespace levysync {

// Two d-dimensional systems dx = f(x)dt + alpha dL1, dy = g(y)dt + beta dL2
// coupled through lambda (y - x) and lambda (x - y). Noise realizations are
// non-owning and must outlive every call that uses the spec.
struct CoupledSpec {
    VectorField f;
    VectorField g;
    std::vector<double> alpha;
    std::vector<double> beta;
    double lambda = 0.0;
    const NoiseRealization* noise1 = nullptr;
    const NoiseRealization* noise2 = nullptr;
};

namespace detail {

inline void validate_coupled(const CoupledSpec& cs) {
    if (!cs.f || !cs.g) throw parameter_error("coupled: both drift functions must be set");
    if (!cs.noise1 || !cs.noise2) throw parameter_error("coupled: both noise realizations must be set");
    if (!(cs.lambda >= 0.0)) throw parameter_error("coupled: lambda must be nonnegative");
    const std::size_t d = cs.alpha.size();
    if (d == 0 || cs.beta.size() != d) throw parameter_error("coupled: intensity dimensions disagree");
    if (cs.noise1->path.dim() != static_cast<int>(d) || cs.noise2->path.dim() != static_cast<int>(d))
        throw parameter_error("coupled: noise dimension does not match the intensities");
}

// Components [lo, hi) of a multi-component path as a path of their own.
inline CadlagPath slice_components(const CadlagPath& p, int lo, int hi) {
    if (lo < 0 || hi <= lo || hi > p.dim()) throw parameter_error("slice: component range out of bounds");
    CadlagPath out(hi - lo);
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out.push_knot(p.time(i), p.left(i).subspan(lo, hi - lo), p.right(i).subspan(lo, hi - lo));
    return out;
}

inline double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// A self-contained additive system: drift, intensities, and an owned noise
// path that sde() views. Keep the object alive while the view is in use.
struct AssembledSystem {
    VectorField drift;
    std::vector<double> coeff;
    CadlagPath noise;
    double max_step = 0.0;

    AdditiveSdeSpec sde() const { return {drift, coeff, &noise, max_step}; }
};

// Stacked 2d-state realization of the coupled pair. The step cap tracks the
// fast coupling rate so explicit stepping stays stable at large lambda.
inline AssembledSystem coupled_system(const CoupledSpec& cs) {
    detail::validate_coupled(cs);
    const int d = static_cast<int>(cs.alpha.size());
    AssembledSystem sys;
    sys.noise = stack_paths({&cs.noise1->path, &cs.noise2->path});
    sys.coeff = cs.alpha;
    sys.coeff.insert(sys.coeff.end(), cs.beta.begin(), cs.beta.end());
    const double lam = cs.lambda;
    const VectorField f = cs.f;
    const VectorField g = cs.g;
    sys.drift = [f, g, lam, d](const std::vector<double>& y) {
        const std::vector<double> x1(y.begin(), y.begin() + d);
        const std::vector<double> x2(y.begin() + d, y.end());
        const std::vector<double> fx = f(x1);
        const std::vector<double> gy = g(x2);
        std::vector<double> out(2 * d);
        for (int c = 0; c < d; ++c) {
            out[c] = fx[c] + lam * (y[d + c] - y[c]);
            out[d + c] = gy[c] + lam * (y[c] - y[d + c]);
        }
        return out;
    };
    sys.max_step = 0.5 / (1.0 + 2.0 * lam);
    return sys;
}

// The lambda -> infinity limit: dZ = (f(Z)+g(Z))/2 dt + alpha/2 dL1 + beta/2 dL2,
// realized with the two noises premixed into one path (exact for additive noise).
inline AssembledSystem averaged_system(const CoupledSpec& cs) {
    detail::validate_coupled(cs);
    const int d = static_cast<int>(cs.alpha.size());
    AssembledSystem sys;
    const CadlagPath sa = scale_components(cs.noise1->path, cs.alpha);
    const CadlagPath sb = scale_components(cs.noise2->path, cs.beta);
    sys.noise = combine_paths({{0.5, &sa}, {0.5, &sb}});
    sys.coeff.assign(d, 1.0);
    const VectorField f = cs.f;
    const VectorField g = cs.g;
    sys.drift = [f, g, d](const std::vector<double>& z) {
        const std::vector<double> fz = f(z);
        const std::vector<double> gz = g(z);
        std::vector<double> out(d);
        for (int c = 0; c < d; ++c) out[c] = 0.5 * (fz[c] + gz[c]);
        return out;
    };
    sys.max_step = 0.5;
    return sys;
}

namespace detail {

inline DissipativityEstimate require_dissipative(const VectorField& f, int dim, const char* which) {
    const DissipativityEstimate e = estimate_dissipativity(f, 10.0, 256, 0x0dd5ba11, dim);
    if (e.violated || !(e.l_hat > 0.0))
        throw parameter_error(std::string("coupled: drift ") + which + " is not dissipative on the probe ball");
    return e;
}

} // namespace detail

// Stationary pair of the coupled system via pullback on the stacked state.
// Default horizons come from the weaker of the two dissipativity estimates,
// clamped to the available noise history.
inline std::pair<StationaryOrbit, StationaryOrbit> coupled_stationary_pair(
    const CoupledSpec& cs, const SimulationGrid& grid, std::span<const double> horizons = {}) {
    detail::validate_coupled(cs);
    const int d = static_cast<int>(cs.alpha.size());
    const DissipativityEstimate ef = detail::require_dissipative(cs.f, d, "f");
    const DissipativityEstimate eg = detail::require_dissipative(cs.g, d, "g");
    const AssembledSystem sys = coupled_system(cs);

    std::vector<double> h(horizons.begin(), horizons.end());
    if (h.empty()) {
        const double l = std::min(ef.l_hat, eg.l_hat);
        double base = std::max(40.0 / l, 40.0);
        const double avail = grid.t_start() - sys.noise.t_begin();
        base = std::min(base, avail);
        if (!(base > 0.0)) throw path_domain_error("coupled: no noise history before the grid start");
        h = {0.5 * base, 0.75 * base, base};
    }
    const StationaryOrbit joint = pullback_stationary(sys.sde(), grid, h);
    StationaryOrbit x{detail::slice_components(joint.path, 0, d), joint.lambda, joint.pullback_horizon,
                      joint.truncation_bound};
    StationaryOrbit y{detail::slice_components(joint.path, d, 2 * d), joint.lambda, joint.pullback_horizon,
                      joint.truncation_bound};
    return {std::move(x), std::move(y)};
}

// sup over [t1, t2] of |x(t) - y(t)|, left limits included.
inline double sync_gap(const CadlagPath& x, const CadlagPath& y, double t1, double t2) {
    if (x.dim() != y.dim()) throw parameter_error("sync_gap: component dimensions differ");
    if (!(t2 > t1)) throw parameter_error("sync_gap: window must have positive length");
    const CadlagPath diff = combine_paths({{1.0, &x}, {-1.0, &y}});
    if (diff.t_begin() > t1 || diff.t_end() < t2)
        throw path_domain_error("sync_gap: window outside the common domain");
    return diff.restrict(t1, t2).sup_norm();
}

// Integrates the coupled system from two starts over the same noise and
// returns the worst of |delta(t)|^2 e^{2 l (t - t0)} / |delta(0)|^2. The
// one-sided dissipativity bound makes this at most 1 up to stepping error.
inline double contraction_check(const CoupledSpec& cs, const std::vector<double>& a0,
                                const std::vector<double>& b0, const SimulationGrid& grid, double l) {
    detail::validate_coupled(cs);
    if (!(l > 0.0)) throw parameter_error("contraction: decay rate must be positive");
    const std::size_t n = 2 * cs.alpha.size();
    if (a0.size() != n || b0.size() != n)
        throw parameter_error("contraction: initial points must have the stacked dimension");
    if (a0 == b0) throw parameter_error("contraction: initial points must differ");

    const AssembledSystem sys = coupled_system(cs);
    const AdditiveSdeSpec sde = sys.sde();
    const CadlagPath pa = integrate_additive(sde, grid, a0);
    const CadlagPath pb = integrate_additive(sde, grid, b0);

    double d0 = 0.0;
    for (std::size_t c = 0; c < n; ++c) d0 += (a0[c] - b0[c]) * (a0[c] - b0[c]);
    double worst = 0.0;
    const double t0 = grid.t_start();
    const std::size_t count = std::min(pa.size(), pb.size());
    for (std::size_t i = 0; i < count; ++i) {
        double dr = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double dv = pa.right(i)[c] - pb.right(i)[c];
            dr += dv * dv;
        }
        worst = std::max(worst, dr * std::exp(2.0 * l * (pa.time(i) - t0)) / d0);
    }
    return worst;
}

// Sampled absorbing-ball radius at time t from a stationary pair:
// R^2 = 1 + (4/l) int e^{-l(t-s)/2} (|f(x)+lambda y|^2 + |g(y)+lambda x|^2) ds,
// quadrature over the pair's available window.
inline double absorption_radius(const CoupledSpec& cs, const CadlagPath& x, const CadlagPath& y, double t,
                                double l) {
    detail::validate_coupled(cs);
    if (!(l > 0.0)) throw parameter_error("absorption: decay rate must be positive");
    const int d = static_cast<int>(cs.alpha.size());
    if (x.dim() != d || y.dim() != d) throw parameter_error("absorption: orbit dimensions disagree");
    const double a = std::max(x.t_begin(), y.t_begin());
    if (!(t > a) || t > x.t_end() || t > y.t_end())
        throw path_domain_error("absorption: time outside the orbit window");

    const CadlagPath* parts[] = {&x, &y};
    const std::vector<double> ts = detail::merged_knot_times(parts, a, t);
    std::vector<double> xv(d), yv(d), arg(d);
    const auto integrand = [&](double s) {
        x.eval_into(s, xv);
        y.eval_into(s, yv);
        double q = 0.0;
        const std::vector<double> fx = cs.f(xv);
        for (int c = 0; c < d; ++c) arg[c] = fx[c] + cs.lambda * yv[c];
        for (int c = 0; c < d; ++c) q += arg[c] * arg[c];
        const std::vector<double> gy = cs.g(yv);
        for (int c = 0; c < d; ++c) arg[c] = gy[c] + cs.lambda * xv[c];
        for (int c = 0; c < d; ++c) q += arg[c] * arg[c];
        return q * std::exp(-0.5 * l * (t - s));
    };
    double integral = 0.0;
    double prev_s = ts.front();
    double prev_q = integrand(prev_s);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double q = integrand(ts[i]);
        integral += 0.5 * (prev_q + q) * (ts[i] - prev_s);
        prev_s = ts[i];
        prev_q = q;
    }
    return std::sqrt(1.0 + 4.0 * integral / l);
}

// Convenience form: computes the stationary pair on the grid first.
inline double absorption_radius(const CoupledSpec& cs, double t, const SimulationGrid& grid) {
    if (t < grid.t_start() || t > grid.t_end())
        throw parameter_error("absorption: time must lie inside the grid");
    const auto [x, y] = coupled_stationary_pair(cs, grid);
    return absorption_radius(cs, x.path, y.path, t, x.lambda);
}

// One-sided set distance: max over a in A of the distance from a to B.
inline double hausdorff_semidistance(const std::vector<std::vector<double>>& a,
                                     const std::vector<std::vector<double>>& b) {
    if (a.empty() || b.empty()) throw parameter_error("hausdorff: point sets must be nonempty");
    const std::size_t d = a.front().size();
    double worst = 0.0;
    for (const auto& p : a) {
        if (p.size() != d) throw parameter_error("hausdorff: point dimensions disagree");
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& q : b) {
            if (q.size() != d) throw parameter_error("hausdorff: point dimensions disagree");
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += (p[c] - q[c]) * (p[c] - q[c]);
            nearest = std::min(nearest, s);
        }
        worst = std::max(worst, nearest);
    }
    return std::sqrt(worst);
}

// Sweep inputs: the pair's drifts and intensities, the two noise laws, the
// coupling strengths to scan, the observation window, and the seed list.
struct SweepConfig {
    VectorField f;
    VectorField g;
    std::vector<double> alpha{1.0};
    std::vector<double> beta{1.0};
    GeneratingTriplet triplet1;
    GeneratingTriplet triplet2;
    std::vector<double> lambda_values{1.0, 10.0, 100.0, 1000.0};
    double t1 = 0.0;
    double t2 = 2.0;
    double dt = 1e-3;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double metric_tol = 1e-3;
    bool share_noise = false; // degenerate control: drive both systems with L1
    int threads = 1;
};

struct SyncRow {
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double gap = 0.0;
    double skorohod_x = 0.0;
    double skorohod_y = 0.0;
    double skorohod_pair = 0.0; // d((X,Y),(Z,Z)); feeds the aggregate only
    double contraction_margin = 0.0;
    double absorption_radius = 0.0;
};

// Per-cell rows plus per-lambda aggregates (medians, worst cases) over seeds.
struct SyncReport {
    std::vector<double> lambda_values;
    std::vector<std::uint64_t> seeds;
    std::vector<SyncRow> rows; // seed-major, lambda-minor
    std::vector<double> gap;
    std::vector<double> skorohod_to_avg; // pair distance d((X,Y),(Z,Z))
    std::vector<double> contraction_margin;
    std::vector<double> absorption_radius;
    std::vector<double> gap_max;
    std::vector<double> skorohod_max;
};

namespace detail {

struct SweepPlan {
    double l = 0.0;          // weaker one-sided rate of the two drifts
    double quad_window = 0.0;  // past retained for the absorption quadrature
    std::vector<double> horizons;
    double t_past = 0.0;
};

inline SweepPlan plan_sweep(const SweepConfig& cfg) {
    if (!cfg.f || !cfg.g) throw parameter_error("sweep: f and g must be set");
    if (cfg.alpha.empty() || cfg.alpha.size() != cfg.beta.size())
        throw parameter_error("sweep: alpha and beta dimensions disagree");
    if (cfg.lambda_values.empty()) throw parameter_error("sweep: lambda_values must be nonempty");
    for (std::size_t i = 0; i + 1 < cfg.lambda_values.size(); ++i)
        if (!(cfg.lambda_values[i] < cfg.lambda_values[i + 1]))
            throw parameter_error("sweep: lambda_values must be strictly ascending");
    for (double lam : cfg.lambda_values)
        if (!(lam >= 0.0)) throw parameter_error("sweep: lambda_values must be nonnegative");
    if (cfg.seeds.empty()) throw parameter_error("sweep: seeds must be nonempty");
    if (!(cfg.t2 > cfg.t1)) throw parameter_error("sweep: window must have positive length");
    if (!(cfg.dt > 0.0)) throw parameter_error("sweep: dt must be positive");

    const int d = static_cast<int>(cfg.alpha.size());
    const DissipativityEstimate ef = require_dissipative(cfg.f, d, "f");
    const DissipativityEstimate eg = require_dissipative(cfg.g, d, "g");

    SweepPlan plan;
    plan.l = std::min(ef.l_hat, eg.l_hat);
    const auto snap = [&](double v) { return std::llround(v / cfg.dt) * cfg.dt; };
    const double base = snap(std::max(40.0 / plan.l, 40.0));
    plan.quad_window = snap(std::min(30.0 / plan.l, base));
    plan.horizons = {snap(0.5 * base), snap(0.75 * base), base};
    plan.t_past = base + plan.quad_window - cfg.t1 + 1.0;
    return plan;
}

} // namespace detail

// Full experiment: per seed realize the pair of noises once, then per lambda
// measure the synchronization diagnostics against the averaged orbit built
// from the same realizations. Deterministic for a fixed config regardless of
// the thread count.
inline SyncReport run_sync_sweep(const SweepConfig& cfg) {
    const detail::SweepPlan plan = detail::plan_sweep(cfg);
    const int d = static_cast<int>(cfg.alpha.size());
    const std::size_t n_seed = cfg.seeds.size();
    const std::size_t n_lam = cfg.lambda_values.size();
    const double mid = 0.5 * (cfg.t1 + cfg.t2);
    const double m = 0.5 * (cfg.t2 - cfg.t1);

    SyncReport rep;
    rep.lambda_values = cfg.lambda_values;
    rep.seeds = cfg.seeds;
    rep.rows.resize(n_seed * n_lam);

    const SimulationGrid obs_grid(cfg.t1, cfg.t2, cfg.dt);
    const SimulationGrid pair_grid(cfg.t1 - plan.quad_window, cfg.t2, cfg.dt);

    const auto run_seed = [&](std::size_t si) {
        const std::uint64_t seed = cfg.seeds[si];
        const NoiseRealization n1 =
            build_two_sided(cfg.triplet1, plan.t_past, cfg.t2, cfg.dt, split_seed(seed, 1));
        const NoiseRealization n2 =
            cfg.share_noise ? n1
                            : build_two_sided(cfg.triplet2, plan.t_past, cfg.t2, cfg.dt, split_seed(seed, 2));

        CoupledSpec cs{cfg.f, cfg.g, cfg.alpha, cfg.beta, 0.0, &n1, &n2};
        const AssembledSystem avg = averaged_system(cs);
        const StationaryOrbit z = pullback_stationary(avg.sde(), obs_grid, plan.horizons);
        const CadlagPath zc = translate_time(z.path, mid);
        const CadlagPath zzc = stack_paths({&zc, &zc});

        for (std::size_t li = 0; li < n_lam; ++li) {
            cs.lambda = cfg.lambda_values[li];
            const auto [x, y] = coupled_stationary_pair(cs, pair_grid, plan.horizons);

            SyncRow row;
            row.seed = seed;
            row.lambda = cs.lambda;
            row.gap = sync_gap(x.path, y.path, cfg.t1, cfg.t2);

            const CadlagPath xc = translate_time(x.path, mid);
            const CadlagPath yc = translate_time(y.path, mid);
            row.skorohod_x = skorohod_bounded(xc, zc, m, cfg.metric_tol).value;
            row.skorohod_y = skorohod_bounded(yc, zc, m, cfg.metric_tol).value;

            const CadlagPath pc = stack_paths({&xc, &yc});
            row.skorohod_pair = skorohod_bounded(pc, zzc, m, cfg.metric_tol).value;

            const std::vector<double> a0(2 * d, 0.0);
            const std::vector<double> b0(2 * d, 1.0);
            row.contraction_margin = contraction_check(cs, a0, b0, obs_grid, plan.l);
            row.absorption_radius = absorption_radius(cs, x.path, y.path, cfg.t2, plan.l);

            rep.rows[si * n_lam + li] = row;
        }
    };

    const int n_threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(n_seed)));
    if (n_threads == 1) {
        for (std::size_t si = 0; si < n_seed; ++si) run_seed(si);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex err_lock;
        std::vector<std::thread> pool;
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t si = next.fetch_add(1);
                    if (si >= n_seed) return;
                    try {
                        run_seed(si);
                    } catch (...) {
                        const std::lock_guard<std::mutex> hold(err_lock);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (std::size_t li = 0; li < n_lam; ++li) {
        std::vector<double> gaps, pair_d, margins, radii;
        double gmax = 0.0, smax = 0.0;
        for (std::size_t si = 0; si < n_seed; ++si) {
            const SyncRow& row = rep.rows[si * n_lam + li];
            gaps.push_back(row.gap);
            pair_d.push_back(row.skorohod_pair);
            margins.push_back(row.contraction_margin);
            radii.push_back(row.absorption_radius);
            gmax = std::max(gmax, row.gap);
            smax = std::max(smax, row.skorohod_pair);
        }
        rep.gap.push_back(detail::median(gaps));
        rep.skorohod_to_avg.push_back(detail::median(pair_d));
        rep.contraction_margin.push_back(detail::median(margins));
        rep.absorption_radius.push_back(detail::median(radii));
        rep.gap_max.push_back(gmax);
        rep.skorohod_max.push_back(smax);
    }
    return rep;
}

// Representative paths for one sweep cell, built exactly as run_sync_sweep
// builds them (same split seeds, grids, and horizons), in window-centered
// time so half-window metrics apply directly.
struct SweepSnapshot {
    CadlagPath x{1}, y{1}, z{1};
    double lambda = 0.0;
    std::uint64_t seed = 0;
};

inline SweepSnapshot sweep_snapshot(const SweepConfig& cfg, double lambda, std::uint64_t seed) {
    const detail::SweepPlan plan = detail::plan_sweep(cfg);
    const double mid = 0.5 * (cfg.t1 + cfg.t2);
    const SimulationGrid obs_grid(cfg.t1, cfg.t2, cfg.dt);
    const SimulationGrid pair_grid(cfg.t1 - plan.quad_window, cfg.t2, cfg.dt);

    const NoiseRealization n1 = build_two_sided(cfg.triplet1, plan.t_past, cfg.t2, cfg.dt, split_seed(seed, 1));
    const NoiseRealization n2 =
        cfg.share_noise ? n1 : build_two_sided(cfg.triplet2, plan.t_past, cfg.t2, cfg.dt, split_seed(seed, 2));

    CoupledSpec cs{cfg.f, cfg.g, cfg.alpha, cfg.beta, 0.0, &n1, &n2};
    const AssembledSystem avg = averaged_system(cs);
    const StationaryOrbit z = pullback_stationary(avg.sde(), obs_grid, plan.horizons);
    cs.lambda = lambda;
    const auto [x, y] = coupled_stationary_pair(cs, pair_grid, plan.horizons);

    SweepSnapshot snap;
    snap.x = translate_time(x.path, mid);
    snap.y = translate_time(y.path, mid);
    snap.z = translate_time(z.path, mid);
    snap.lambda = lambda;
    snap.seed = seed;
    return snap;
}

// Per-cell detail rows.
inline void write_sync_rows_csv(std::ostream& os, const SyncReport& rep) {
    os << "seed,lambda,gap,skorohod_x,skorohod_y,contraction_margin,absorption_radius\n";
    for (const SyncRow& r : rep.rows) {
        os << r.seed << ',' << detail::csv_number(r.lambda) << ',' << detail::csv_number(r.gap) << ','
           << detail::csv_number(r.skorohod_x) << ',' << detail::csv_number(r.skorohod_y) << ','
           << detail::csv_number(r.contraction_margin) << ',' << detail::csv_number(r.absorption_radius)
           << '\n';
    }
}

// Per-lambda aggregates: medians plus worst cases.
inline void write_sync_summary_csv(std::ostream& os, const SyncReport& rep) {
    os << "lambda,gap,skorohod_to_avg,contraction_margin,absorption_radius,gap_max,skorohod_max\n";
    for (std::size_t li = 0; li < rep.lambda_values.size(); ++li) {
        os << detail::csv_number(rep.lambda_values[li]) << ',' << detail::csv_number(rep.gap[li]) << ','
           << detail::csv_number(rep.skorohod_to_avg[li]) << ','
           << detail::csv_number(rep.contraction_margin[li]) << ','
           << detail::csv_number(rep.absorption_radius[li]) << ',' << detail::csv_number(rep.gap_max[li])
           << ',' << detail::csv_number(rep.skorohod_max[li]) << '\n';
    }
}

} // namespace levysync
