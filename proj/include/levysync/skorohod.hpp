#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "levysync/cadlag_path.hpp"
#include "levysync/errors.hpp"

namespace levysync {

// Piecewise-affine strictly increasing map of [-m, m] onto itself, the
// reparameterizations over which the Skorohod metric takes its infimum.
class TimeChange {
public:
    TimeChange(std::vector<double> knots, std::vector<double> images)
        : s_(std::move(knots)), u_(std::move(images)) {
        if (s_.size() != u_.size() || s_.size() < 2)
            throw parameter_error("time change: need matching knot/image lists with at least two entries");
        for (std::size_t i = 1; i < s_.size(); ++i)
            if (!(s_[i] > s_[i - 1]) || !(u_[i] > u_[i - 1]))
                throw parameter_error("time change: knots and images must be strictly increasing");
        if (s_.front() != u_.front() || s_.back() != u_.back())
            throw parameter_error("time change: must map the window onto itself");
    }

    static TimeChange identity(double m) {
        if (!(m > 0.0)) throw parameter_error("time change: horizon must be positive");
        return TimeChange({-m, m}, {-m, m});
    }

    std::size_t size() const { return s_.size(); }
    double knot(std::size_t i) const { return s_[i]; }
    double image(std::size_t i) const { return u_[i]; }
    const std::vector<double>& knots() const { return s_; }
    const std::vector<double>& images() const { return u_; }
    double t_begin() const { return s_.front(); }
    double t_end() const { return s_.back(); }

    double operator()(double t) const {
        if (t < s_.front() || t > s_.back())
            throw path_domain_error("time change: argument outside the window");
        const auto it = std::upper_bound(s_.begin(), s_.end(), t);
        const std::size_t i = std::min<std::size_t>(s_.size() - 1, static_cast<std::size_t>(it - s_.begin()));
        const double w = (t - s_[i - 1]) / (s_[i] - s_[i - 1]);
        return u_[i - 1] + w * (u_[i] - u_[i - 1]);
    }

    double inverse(double v) const {
        if (v < u_.front() || v > u_.back())
            throw path_domain_error("time change: image outside the window");
        const auto it = std::upper_bound(u_.begin(), u_.end(), v);
        const std::size_t i = std::min<std::size_t>(u_.size() - 1, static_cast<std::size_t>(it - u_.begin()));
        const double w = (v - u_[i - 1]) / (u_[i] - u_[i - 1]);
        return s_[i - 1] + w * (s_[i] - s_[i - 1]);
    }

    // Piecewise-affine maps attain the slope-ratio supremum on a segment.
    double max_log_slope() const {
        double worst = 0.0;
        for (std::size_t i = 1; i < s_.size(); ++i)
            worst = std::max(worst, std::abs(std::log((u_[i] - u_[i - 1]) / (s_[i] - s_[i - 1]))));
        return worst;
    }

private:
    std::vector<double> s_, u_;
};

inline void write_time_change_csv(std::ostream& os, const TimeChange& tc) {
    os << "s,lambda_s\n";
    char buf[64];
    for (std::size_t i = 0; i < tc.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", tc.knot(i), tc.image(i));
        os << buf;
    }
}

struct MetricResult {
    double value = 0.0;
    TimeChange witness = TimeChange::identity(1.0);
    double certified_gap = 0.0;
};

struct GlobalMetric {
    double value = 0.0;
    double uncertainty = 0.0;
};

namespace detail {

inline double diff_norm(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    return std::sqrt(s);
}

// Interpolated image coordinates land ulps away from knot times they should
// hit exactly, flipping which side of a jump gets sampled. Snap within a few
// ulps back onto the grid.
inline double snap_to_grid(double v, const std::vector<double>& grid) {
    const double tol = 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v));
    auto it = std::lower_bound(grid.begin(), grid.end(), v);
    if (it != grid.end() && std::abs(*it - v) <= tol) return *it;
    if (it != grid.begin() && std::abs(*std::prev(it) - v) <= tol) return *std::prev(it);
    return v;
}

// |x(t) - y(u)| and its left-limit twin, with the image coordinate supplied
// exactly so jumps of y are never misclassified by round-off.
class PairEvaluator {
public:
    PairEvaluator(const CadlagPath& x, const CadlagPath& y) : x_(x), y_(y), d_(x.dim()), bx_(d_), by_(d_) {
        if (x.dim() != y.dim()) throw parameter_error("skorohod: paths must share a dimension");
    }

    double at(double t, double u) {
        x_.eval_into(t, bx_);
        y_.eval_into(u, by_);
        return diff_norm(bx_.data(), by_.data(), d_);
    }

    double at_left(double t, double u) {
        x_.left_limit_into(t, bx_);
        y_.left_limit_into(u, by_);
        return diff_norm(bx_.data(), by_.data(), d_);
    }

private:
    const CadlagPath& x_;
    const CadlagPath& y_;
    int d_;
    std::vector<double> bx_, by_;
};

// Exact cost of the affine bridge (s1,u1) -> (s2,u2): the segment's
// |log slope| joined with sup |x(t) - y(lam(t))| over [s1, s2), where the sup
// needs only the bridge ends, the knots of x inside, and the preimages of the
// knots of y inside. Returns early once the running cost reaches cap.
inline double bridge_cost(const CadlagPath& x, const CadlagPath& y, PairEvaluator& ev,
                          double s1, double u1, double s2, double u2, double cap) {
    const double slope = (u2 - u1) / (s2 - s1);
    double cost = std::abs(std::log(slope));
    if (cost >= cap) return cost;

    cost = std::max(cost, ev.at(s1, u1));
    if (cost >= cap) return cost;

    // merge x knots in (s1,s2) with preimages of y knots in (u1,u2)
    const auto& tx = x.times();
    const auto& ty = y.times();
    std::size_t ix = static_cast<std::size_t>(std::upper_bound(tx.begin(), tx.end(), s1) - tx.begin());
    std::size_t iy = static_cast<std::size_t>(std::upper_bound(ty.begin(), ty.end(), u1) - ty.begin());
    while (true) {
        const bool hx = ix < tx.size() && tx[ix] < s2;
        const bool hy = iy < ty.size() && ty[iy] < u2;
        if (!hx && !hy) break;
        double t, u;
        if (hx && hy) {
            const double t_of_y = s1 + (ty[iy] - u1) / slope;
            const double tol = 32.0 * std::numeric_limits<double>::epsilon() *
                               std::max({1.0, std::abs(tx[ix]), std::abs(t_of_y)});
            if (std::abs(tx[ix] - t_of_y) <= tol) {
                // the bridge maps this x knot onto this y knot: exact pair
                t = tx[ix];
                u = ty[iy];
                ++ix;
                ++iy;
            } else if (tx[ix] < t_of_y) {
                t = tx[ix];
                u = snap_to_grid(u1 + (t - s1) * slope, ty);
                ++ix;
            } else {
                t = t_of_y;
                u = ty[iy];
                ++iy;
            }
        } else if (hx) {
            t = tx[ix];
            u = snap_to_grid(u1 + (t - s1) * slope, ty);
            ++ix;
        } else {
            u = ty[iy];
            t = s1 + (u - u1) / slope;
            ++iy;
        }
        cost = std::max(cost, ev.at_left(t, u));
        if (cost >= cap) return cost;
        cost = std::max(cost, ev.at(t, u));
        if (cost >= cap) return cost;
    }
    cost = std::max(cost, ev.at_left(s2, u2));
    return cost;
}

// Candidate pin positions for one side of the alignment DP: window ends, the
// largest jumps with hair offsets around the very largest (constrained optima
// park a pin just beside an opposing jump), and a uniform grid of the
// requested resolution.
inline std::vector<double> pin_candidates(const CadlagPath& x, double m, int uniform_points) {
    std::vector<double> out{-m, m};
    std::vector<std::pair<double, double>> jumps; // (-magnitude, time)
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x.is_jump(i)) continue;
        const double t = x.time(i);
        if (!(t > -m && t < m)) continue;
        jumps.emplace_back(-diff_norm(x.left(i).data(), x.right(i).data(), x.dim()), t);
    }
    std::sort(jumps.begin(), jumps.end());
    if (jumps.size() > 40) jumps.resize(40);
    const double eta = 1e-6 * m;
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        const double t = jumps[k].second;
        out.push_back(t);
        if (k < 12) {
            if (t - eta > -m) out.push_back(t - eta);
            if (t + eta < m) out.push_back(t + eta);
        }
    }
    for (int i = 1; i < uniform_points; ++i) out.push_back(-m + 2.0 * m * i / uniform_points);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct AlignmentResult {
    double value;
    std::vector<double> knots, images;
};

// Min-max DP over monotone pin chains; every chain is a feasible time change,
// so the result is an upper bound on the infimum. cap prunes states that
// cannot beat the incumbent.
inline AlignmentResult align_dp(const CadlagPath& x, const CadlagPath& y, const std::vector<double>& cx,
                                const std::vector<double>& cy, double cap) {
    PairEvaluator ev(x, y);
    const std::size_t nx = cx.size();
    const std::size_t ny = cy.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(nx * ny, inf);
    std::vector<std::int64_t> parent(nx * ny, -1);
    best[0] = 0.0;

    for (std::size_t i = 1; i < nx; ++i) {
        for (std::size_t j = 1; j < ny; ++j) {
            const std::size_t id = i * ny + j;
            double acc = inf;
            std::int64_t from = -1;
            // nearest predecessors first: their short bridges set a tight
            // budget that prunes the long ones
            for (std::size_t pi = i; pi-- > 0;) {
                for (std::size_t pj = j; pj-- > 0;) {
                    const double b = best[pi * ny + pj];
                    const double budget = std::min(acc, cap);
                    if (b >= budget) continue;
                    const double c = bridge_cost(x, y, ev, cx[pi], cy[pj], cx[i], cy[j], budget);
                    if (c >= budget) continue; // early-terminated scan, cost incomplete
                    acc = std::max(b, c);
                    from = static_cast<std::int64_t>(pi * ny + pj);
                }
            }
            best[id] = acc;
            parent[id] = from;
        }
    }

    AlignmentResult r;
    // every feasible change fixes the endpoints, so the terminal mismatch is
    // part of the cost
    r.value = std::max(best[nx * ny - 1], ev.at(cx.back(), cy.back()));
    std::vector<std::size_t> chain;
    for (std::int64_t cur = static_cast<std::int64_t>(nx * ny - 1); cur >= 0; cur = parent[cur])
        chain.push_back(static_cast<std::size_t>(cur));
    std::reverse(chain.begin(), chain.end());
    for (std::size_t id : chain) {
        r.knots.push_back(cx[id / ny]);
        r.images.push_back(cy[id % ny]);
    }
    return r;
}

inline bool piecewise_constant(const CadlagPath& x) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        for (int c = 0; c < x.dim(); ++c)
            if (x.right(i)[c] != x.left(i + 1)[c]) return false;
    return true;
}

} // namespace detail

// max( sup |log slope|, sup_t |x(t) - y(lam(t))| ) over [-m, m]. The value
// supremum is evaluated at the knots of x, the preimages of the knots of y,
// the breakpoints of lam, and all their left limits, which is exhaustive for
// piecewise-affine data.
inline double time_change_cost(const CadlagPath& x, const CadlagPath& y, const TimeChange& lam, double m) {
    if (!(m > 0.0)) throw parameter_error("skorohod: window must be positive");
    if (lam.t_begin() != -m || lam.t_end() != m)
        throw parameter_error("skorohod: time change must map [-m, m] onto itself");
    if (x.t_begin() > -m || x.t_end() < m || y.t_begin() > -m || y.t_end() < m)
        throw parameter_error("skorohod: paths must cover the window");

    double cost = lam.max_log_slope();

    // evaluation set as (t, lam(t)) pairs, images exact where known
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < lam.size(); ++i) pts.emplace_back(lam.knot(i), lam.image(i));
    for (double t : x.times())
        if (t > -m && t < m) pts.emplace_back(t, detail::snap_to_grid(lam(t), y.times()));
    for (double u : y.times())
        if (u > -m && u < m) pts.emplace_back(detail::snap_to_grid(lam.inverse(u), x.times()), u);
    std::sort(pts.begin(), pts.end());

    detail::PairEvaluator ev(x, y);
    for (const auto& [t, u] : pts) {
        cost = std::max(cost, ev.at(t, u));
        if (t > -m) cost = std::max(cost, ev.at_left(t, u));
    }
    return cost;
}

// g_m * x on [-m, m]: weight 1 inside |t| <= m-1, tapering affinely to 0 at
// |t| = m. Affine cells crossing the taper turn quadratic, so they are
// subdivided until the chord error is negligible against the path scale.
inline CadlagPath weight_path(const CadlagPath& x, double m) {
    if (!(m > 0.0)) throw parameter_error("skorohod: weight order must be positive");
    if (x.t_begin() > -m || x.t_end() < m)
        throw parameter_error("skorohod: path does not cover the weight window");
    const CadlagPath xr = x.restrict(-m, m);
    const int d = xr.dim();
    auto g = [m](double t) { return std::clamp(m - std::abs(t), 0.0, 1.0); };

    std::vector<double> times;
    for (std::size_t i = 0; i < xr.size(); ++i) times.push_back(xr.time(i));
    for (double t : {-(m - 1.0), 0.0, m - 1.0})
        if (t > -m && t < m) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    const double split_tol = 1e-7 * (1.0 + xr.sup_norm());
    std::vector<double> refined;
    std::vector<double> va(d), vb(d);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        refined.push_back(times[i]);
        const double t0 = times[i];
        const double t1 = times[i + 1];
        if (std::max(std::abs(t0), std::abs(t1)) <= m - 1.0) continue; // flat weight, product stays affine
        xr.eval_into(t0, va);
        xr.left_limit_into(t1, vb);
        double amax = 0.0;
        for (int c = 0; c < d; ++c) amax = std::max(amax, std::abs(vb[c] - va[c]) / (t1 - t0));
        if (amax == 0.0) continue;
        const double w = std::sqrt(8.0 * split_tol / amax);
        const int k = std::min(4096, static_cast<int>(std::ceil((t1 - t0) / w)));
        for (int j = 1; j < k; ++j) refined.push_back(t0 + (t1 - t0) * j / k);
    }
    refined.push_back(times.back());

    CadlagPath out(d);
    out.reserve(refined.size());
    std::vector<double> l(d), r(d);
    for (double t : refined) {
        const double gt = g(t);
        xr.eval_into(t, r);
        if (t > xr.t_begin())
            xr.left_limit_into(t, l);
        else
            l = r;
        for (int c = 0; c < d; ++c) {
            l[c] *= gt;
            r[c] *= gt;
        }
        out.push_knot(t, l, r);
    }
    return out;
}

// Exhaustive minimum over jump-matching combinatorics for piecewise-constant
// paths with at most 3 jumps each. Pins are tried at exact jump pairings and
// at hair offsets on either side, which realize the boundary optima of
// side-constrained arrangements up to O(eta).
inline double skorohod_oracle_small(const CadlagPath& x, const CadlagPath& y, double m) {
    if (!(m > 0.0)) throw parameter_error("skorohod: window must be positive");
    if (x.t_begin() > -m || x.t_end() < m || y.t_begin() > -m || y.t_end() < m)
        throw parameter_error("skorohod: paths must cover the window");
    const CadlagPath xr = x.restrict(-m, m);
    const CadlagPath yr = y.restrict(-m, m);
    if (!detail::piecewise_constant(xr) || !detail::piecewise_constant(yr))
        throw capability_error("skorohod oracle: paths must be piecewise constant");
    const auto jx = xr.jump_times();
    const auto jy = yr.jump_times();
    if (jx.size() > 3 || jy.size() > 3)
        throw capability_error("skorohod oracle: at most 3 jumps per path");

    const double eta = 1e-6 * m;
    std::vector<std::pair<double, double>> pins;
    for (double a : jx)
        for (double b : jy) {
            pins.emplace_back(a, b);
            if (a - eta > -m) pins.emplace_back(a - eta, b);
            if (a + eta < m) pins.emplace_back(a + eta, b);
            if (b - eta > -m) pins.emplace_back(a, b - eta);
            if (b + eta < m) pins.emplace_back(a, b + eta);
        }
    std::sort(pins.begin(), pins.end());

    double best = time_change_cost(xr, yr, TimeChange::identity(m), m);

    // depth-first over monotone pin chains
    std::vector<std::pair<double, double>> chain;
    auto evaluate = [&]() {
        std::vector<double> s{-m}, u{-m};
        for (const auto& [a, b] : chain) {
            s.push_back(a);
            u.push_back(b);
        }
        s.push_back(m);
        u.push_back(m);
        best = std::min(best, time_change_cost(xr, yr, TimeChange(std::move(s), std::move(u)), m));
    };
    auto dfs = [&](auto&& self, std::size_t from) -> void {
        if (chain.size() == 6) return;
        for (std::size_t k = from; k < pins.size(); ++k) {
            const auto& [a, b] = pins[k];
            if (!chain.empty() && (!(a > chain.back().first) || !(b > chain.back().second))) continue;
            chain.push_back(pins[k]);
            evaluate();
            self(self, k + 1);
            chain.pop_back();
        }
    };
    dfs(dfs, 0);
    return best;
}

// DP estimate of d_m°(x, y): an upper bound on the infimum (every alignment
// is a feasible time change) refined until successive grids agree within tol.
// On oracle-eligible instances the certified gap is the true distance to the
// oracle value; otherwise it reports the refinement tolerance reached.
inline MetricResult skorohod_bounded(const CadlagPath& x, const CadlagPath& y, double m, double tol) {
    if (!(tol > 0.0)) throw parameter_error("skorohod: tol must be positive");
    if (!(m > 0.0)) throw parameter_error("skorohod: window must be positive");
    if (x.t_begin() > -m || x.t_end() < m || y.t_begin() > -m || y.t_end() < m)
        throw parameter_error("skorohod: paths must cover the window");
    const CadlagPath xr = x.restrict(-m, m);
    const CadlagPath yr = y.restrict(-m, m);

    MetricResult r;
    r.witness = TimeChange::identity(m);
    r.value = time_change_cost(xr, yr, r.witness, m);

    double prev = std::numeric_limits<double>::infinity();
    double last_diff = std::numeric_limits<double>::infinity();
    for (int uniform = 16; uniform <= 128; uniform *= 2) {
        const auto cx = detail::pin_candidates(xr, m, uniform);
        const auto cy = detail::pin_candidates(yr, m, uniform);
        if (cx.size() * cy.size() > 40000 && r.value < std::numeric_limits<double>::infinity() && uniform > 16)
            break; // refinement priced out; the reported gap stays honest
        const auto dp = detail::align_dp(xr, yr, cx, cy, r.value);
        if (dp.value < r.value && dp.knots.size() >= 2) {
            r.value = dp.value;
            r.witness = TimeChange(dp.knots, dp.images);
        }
        last_diff = prev - r.value;
        if (last_diff < tol && uniform >= 32) break;
        prev = r.value;
    }

    bool oracle_ok = false;
    double oracle = 0.0;
    try {
        oracle = skorohod_oracle_small(xr, yr, m);
        oracle_ok = true;
    } catch (const capability_error&) {
    }
    if (oracle_ok)
        r.certified_gap = std::max(0.0, r.value - oracle);
    else
        r.certified_gap = std::max(tol, last_diff);
    return r;
}

// Weighted global metric: sum over m of 2^-m (1 ∧ d_m°(g_m x, g_m y)); the
// dropped tail is folded into the uncertainty together with the per-window
// certification gaps.
inline GlobalMetric skorohod_global(const CadlagPath& x, const CadlagPath& y, int m_max = 5, double tol = 1e-3) {
    if (m_max < 1) throw parameter_error("skorohod: m_max must be at least 1");
    if (x.t_begin() > -double(m_max) || x.t_end() < double(m_max) || y.t_begin() > -double(m_max) ||
        y.t_end() < double(m_max))
        throw parameter_error("skorohod: paths must cover the outermost window");

    GlobalMetric g;
    double w = 1.0;
    for (int m = 1; m <= m_max; ++m) {
        w *= 0.5;
        const CadlagPath xm = weight_path(x, m);
        const CadlagPath ym = weight_path(y, m);
        const MetricResult r = skorohod_bounded(xm, ym, m, tol);
        g.value += w * std::min(1.0, r.value);
        g.uncertainty += w * r.certified_gap;
    }
    g.uncertainty += w;
    return g;
}

} // namespace levysync
