#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace levysync {

inline double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Piecewise-affine cadlag path on a closed interval. Each knot stores the
// left limit and the value at its time; the two differ exactly at jumps.
// Between knots the path ramps affinely from the previous knot's value to the
// next knot's left limit, so eval and left_limit are total on the domain and
// jump sizes are represented exactly.
class CadlagPath {
public:
    explicit CadlagPath(int dim = 1) : dim_(dim) {
        if (dim < 1) throw parameter_error("path: dimension must be >= 1");
    }

    int dim() const { return dim_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    double t_begin() const {
        require_nonempty();
        return times_.front();
    }
    double t_end() const {
        require_nonempty();
        return times_.back();
    }

    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> left(std::size_t i) const { return {left_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
    std::span<const double> right(std::size_t i) const { return {right_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
    const std::vector<double>& times() const { return times_; }

    bool is_jump(std::size_t i) const {
        for (int c = 0; c < dim_; ++c)
            if (left_[i * dim_ + c] != right_[i * dim_ + c]) return true;
        return false;
    }

    std::vector<double> jump_times() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < times_.size(); ++i)
            if (is_jump(i)) out.push_back(times_[i]);
        return out;
    }

    // Appends a knot; times must be strictly increasing.
    void push_knot(double t, std::span<const double> left, std::span<const double> right) {
        if (left.size() != static_cast<std::size_t>(dim_) || right.size() != static_cast<std::size_t>(dim_))
            throw parameter_error("path: knot value dimension mismatch");
        if (!times_.empty() && !(t > times_.back()))
            throw parameter_error("path: knot times must be strictly increasing");
        if (!std::isfinite(t)) throw parameter_error("path: knot time must be finite");
        times_.push_back(t);
        left_.insert(left_.end(), left.begin(), left.end());
        right_.insert(right_.end(), right.begin(), right.end());
    }

    void push_knot(double t, std::span<const double> value) { push_knot(t, value, value); }

    void push_knot(double t, double value) {
        push_knot(t, std::span<const double>(&value, 1));
    }

    void push_knot(double t, double left_value, double right_value) {
        push_knot(t, std::span<const double>(&left_value, 1), std::span<const double>(&right_value, 1));
    }

    void reserve(std::size_t n) {
        times_.reserve(n);
        left_.reserve(n * dim_);
        right_.reserve(n * dim_);
    }

    // Value at t (right-continuous representative).
    void eval_into(double t, std::span<double> out) const {
        const std::size_t i = segment_of(t);
        if (t == times_[i]) {
            copy_values(right_, i, out);
            return;
        }
        interpolate(i, t, out);
    }

    // Limit from the left at t; requires t > t_begin().
    void left_limit_into(double t, std::span<double> out) const {
        require_nonempty();
        if (!(t > times_.front()))
            throw path_domain_error("path: left limit requested at or before the domain start");
        const std::size_t i = segment_of(t);
        if (t == times_[i]) {
            copy_values(left_, i, out);
            return;
        }
        interpolate(i, t, out);
    }

    std::vector<double> eval(double t) const {
        std::vector<double> out(dim_);
        eval_into(t, out);
        return out;
    }

    std::vector<double> left_limit(double t) const {
        std::vector<double> out(dim_);
        left_limit_into(t, out);
        return out;
    }

    // Scalar conveniences for the common one-dimensional case.
    double value1(double t) const {
        require_scalar();
        double v;
        eval_into(t, {&v, 1});
        return v;
    }

    double left1(double t) const {
        require_scalar();
        double v;
        left_limit_into(t, {&v, 1});
        return v;
    }

    // Shifted path s -> x(h+s) - x(h) on [t_begin-h, t_end-h].
    CadlagPath shift(double h) const {
        std::vector<double> offset = eval(h);
        CadlagPath out(dim_);
        out.reserve(times_.size());
        out.times_.resize(times_.size());
        out.left_.resize(left_.size());
        out.right_.resize(right_.size());
        for (std::size_t i = 0; i < times_.size(); ++i) out.times_[i] = times_[i] - h;
        for (std::size_t i = 0; i < left_.size(); ++i) {
            out.left_[i] = left_[i] - offset[i % dim_];
            out.right_[i] = right_[i] - offset[i % dim_];
        }
        return out;
    }

    // Restriction to [a,b] within the domain. A jump exactly at a is dropped
    // (its left limit falls outside the window); a jump at b is kept.
    CadlagPath restrict(double a, double b) const {
        require_nonempty();
        if (!(a < b)) throw parameter_error("path: restrict needs a < b");
        check_inside(a);
        check_inside(b);
        CadlagPath out(dim_);
        std::vector<double> va = eval(a);
        out.push_knot(a, va, va);
        for (std::size_t i = upper_knot(a); i < times_.size() && times_[i] < b; ++i)
            out.push_knot(times_[i], left(i), right(i));
        std::vector<double> lb = left_limit(b);
        std::vector<double> vb = eval(b);
        out.push_knot(b, lb, vb);
        return out;
    }

    // Extracts one component as a scalar path.
    CadlagPath component(int c) const {
        if (c < 0 || c >= dim_) throw parameter_error("path: component index out of range");
        CadlagPath out(1);
        out.reserve(times_.size());
        for (std::size_t i = 0; i < times_.size(); ++i)
            out.push_knot(times_[i], left_[i * dim_ + c], right_[i * dim_ + c]);
        return out;
    }

    // sup over the whole domain of |x(t)|, left limits included.
    double sup_norm() const {
        require_nonempty();
        double best = 0.0;
        for (std::size_t i = 0; i < times_.size(); ++i) {
            best = std::max(best, euclidean_norm(left(i)));
            best = std::max(best, euclidean_norm(right(i)));
        }
        return best;
    }

    // Oscillation sup_{s,t in S} |x(s)-x(t)| over S = [a,b] (closed_right) or
    // [a,b) (half-open); either way the left limit at b participates, because
    // it is approached by values inside the window.
    double oscillation(double a, double b, bool closed_right = true) const {
        std::vector<double> cand = oscillation_candidates(a, b, closed_right);
        const std::size_t k = cand.size() / dim_;
        if (dim_ == 1) {
            auto [mn, mx] = std::minmax_element(cand.begin(), cand.end());
            return *mx - *mn;
        }
        double best = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                double s = 0.0;
                for (int c = 0; c < dim_; ++c) {
                    const double d = cand[i * dim_ + c] - cand[j * dim_ + c];
                    s += d * d;
                }
                best = std::max(best, s);
            }
        return std::sqrt(best);
    }

private:
    void require_nonempty() const {
        if (times_.empty()) throw path_domain_error("path: empty");
    }
    void require_scalar() const {
        if (dim_ != 1) throw parameter_error("path: scalar accessor on multi-component path");
    }
    void check_inside(double t) const {
        require_nonempty();
        if (!(t >= times_.front() && t <= times_.back()))
            throw path_domain_error("path: time " + std::to_string(t) + " outside domain [" +
                                    std::to_string(times_.front()) + ", " + std::to_string(times_.back()) + "]");
    }

    // Index of the knot at or immediately before t.
    std::size_t segment_of(double t) const {
        check_inside(t);
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        return static_cast<std::size_t>(it - times_.begin()) - 1;
    }

    // Index of the first knot strictly after t.
    std::size_t upper_knot(double t) const {
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        return static_cast<std::size_t>(it - times_.begin());
    }

    void copy_values(const std::vector<double>& src, std::size_t i, std::span<double> out) const {
        for (int c = 0; c < dim_; ++c) out[c] = src[i * dim_ + c];
    }

    void interpolate(std::size_t i, double t, std::span<double> out) const {
        const double u = times_[i];
        const double v = times_[i + 1];
        const double w = (t - u) / (v - u);
        for (int c = 0; c < dim_; ++c)
            out[c] = right_[i * dim_ + c] + w * (left_[(i + 1) * dim_ + c] - right_[i * dim_ + c]);
    }

    // Flattened value samples whose pointwise extremes realize the sup of the
    // piecewise-affine path over the window.
    std::vector<double> oscillation_candidates(double a, double b, bool closed_right) const {
        if (!(a < b)) throw parameter_error("path: oscillation needs a < b");
        check_inside(a);
        check_inside(b);
        std::vector<double> cand;
        std::vector<double> buf(dim_);
        eval_into(a, buf);
        cand.insert(cand.end(), buf.begin(), buf.end());
        for (std::size_t i = upper_knot(a); i < times_.size() && times_[i] < b; ++i) {
            cand.insert(cand.end(), left_.begin() + i * dim_, left_.begin() + (i + 1) * dim_);
            cand.insert(cand.end(), right_.begin() + i * dim_, right_.begin() + (i + 1) * dim_);
        }
        left_limit_into(b, buf);
        cand.insert(cand.end(), buf.begin(), buf.end());
        if (closed_right) {
            eval_into(b, buf);
            cand.insert(cand.end(), buf.begin(), buf.end());
        }
        return cand;
    }

    int dim_;
    std::vector<double> times_;
    std::vector<double> left_;
    std::vector<double> right_;
};

// Value translation x(t) + c, knot times and jump sizes untouched.
inline CadlagPath shift_values(const CadlagPath& x, std::span<const double> offset) {
    if (offset.size() != static_cast<std::size_t>(x.dim()))
        throw parameter_error("shift_values: offset dimension mismatch");
    CadlagPath out(x.dim());
    out.reserve(x.size());
    std::vector<double> l(x.dim()), r(x.dim());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int c = 0; c < x.dim(); ++c) {
            l[c] = x.left(i)[c] + offset[c];
            r[c] = x.right(i)[c] + offset[c];
        }
        out.push_knot(x.time(i), l, r);
    }
    return out;
}

inline CadlagPath shift_values(const CadlagPath& x, double offset) {
    const std::vector<double> c(x.dim(), offset);
    return shift_values(x, c);
}

// Pure time translation: the point originally at time h moves to time zero.
// Unlike shift(), values are untouched.
inline CadlagPath translate_time(const CadlagPath& x, double h) {
    CadlagPath out(x.dim());
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.push_knot(x.time(i) - h, x.left(i), x.right(i));
    return out;
}

// Componentwise scaling x_c(t) * w_c; knot times untouched.
inline CadlagPath scale_components(const CadlagPath& x, std::span<const double> w) {
    if (w.size() != static_cast<std::size_t>(x.dim()))
        throw parameter_error("scale_components: weight dimension mismatch");
    CadlagPath out(x.dim());
    out.reserve(x.size());
    std::vector<double> l(x.dim()), r(x.dim());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int c = 0; c < x.dim(); ++c) {
            l[c] = x.left(i)[c] * w[c];
            r[c] = x.right(i)[c] * w[c];
        }
        out.push_knot(x.time(i), l, r);
    }
    return out;
}

namespace detail {

// Union of the paths' knot times inside [a, b], endpoints included.
inline std::vector<double> merged_knot_times(std::span<const CadlagPath* const> paths, double a, double b) {
    std::vector<double> ts{a, b};
    for (const CadlagPath* p : paths)
        for (double t : p->times())
            if (t > a && t < b) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

inline void common_window(std::span<const CadlagPath* const> paths, double& a, double& b) {
    a = -std::numeric_limits<double>::infinity();
    b = std::numeric_limits<double>::infinity();
    for (const CadlagPath* p : paths) {
        a = std::max(a, p->t_begin());
        b = std::min(b, p->t_end());
    }
    if (!(a < b)) throw path_domain_error("paths: domains do not overlap");
}

} // namespace detail

// Weighted sum of same-dimension paths on the union of their knot times over
// the common domain. Exact for piecewise-affine inputs: jumps add up
// componentwise at their exact times.
inline CadlagPath combine_paths(const std::vector<std::pair<double, const CadlagPath*>>& terms) {
    if (terms.empty()) throw parameter_error("combine_paths: no terms");
    std::vector<const CadlagPath*> paths;
    for (const auto& [w, p] : terms) {
        (void)w;
        paths.push_back(p);
    }
    const int d = paths.front()->dim();
    for (const CadlagPath* p : paths)
        if (p->dim() != d) throw parameter_error("combine_paths: dimension mismatch");
    double a, b;
    detail::common_window(paths, a, b);
    const std::vector<double> ts = detail::merged_knot_times(paths, a, b);

    CadlagPath out(d);
    out.reserve(ts.size());
    std::vector<double> l(d), r(d), buf(d);
    for (double t : ts) {
        std::fill(l.begin(), l.end(), 0.0);
        std::fill(r.begin(), r.end(), 0.0);
        for (const auto& [w, p] : terms) {
            if (t > a)
                p->left_limit_into(t, buf);
            else
                p->eval_into(t, buf);
            for (int c = 0; c < d; ++c) l[c] += w * buf[c];
            p->eval_into(t, buf);
            for (int c = 0; c < d; ++c) r[c] += w * buf[c];
        }
        out.push_knot(t, l, r);
    }
    return out;
}

// Concatenates paths into one multi-component path on the union of their knot
// times over the common domain; the inverse of component().
inline CadlagPath stack_paths(const std::vector<const CadlagPath*>& parts) {
    if (parts.empty()) throw parameter_error("stack_paths: no parts");
    int d = 0;
    for (const CadlagPath* p : parts) d += p->dim();
    double a, b;
    detail::common_window(parts, a, b);
    const std::vector<double> ts = detail::merged_knot_times(parts, a, b);

    CadlagPath out(d);
    out.reserve(ts.size());
    std::vector<double> l(d), r(d);
    for (double t : ts) {
        int at = 0;
        for (const CadlagPath* p : parts) {
            std::span<double> lc(l.data() + at, static_cast<std::size_t>(p->dim()));
            std::span<double> rc(r.data() + at, static_cast<std::size_t>(p->dim()));
            if (t > a)
                p->left_limit_into(t, lc);
            else
                p->eval_into(t, lc);
            p->eval_into(t, rc);
            at += p->dim();
        }
        out.push_knot(t, l, r);
    }
    return out;
}

// sup over the common domain of |x(t)-y(t)|, left limits included. Both paths
// must share dimension; the sup runs over the intersection of the domains.
inline double sup_distance(const CadlagPath& x, const CadlagPath& y) {
    if (x.dim() != y.dim()) throw parameter_error("sup_distance: dimension mismatch");
    const double a = std::max(x.t_begin(), y.t_begin());
    const double b = std::min(x.t_end(), y.t_end());
    if (!(a <= b)) throw path_domain_error("sup_distance: disjoint domains");
    std::vector<double> ts;
    for (double t : x.times())
        if (t >= a && t <= b) ts.push_back(t);
    for (double t : y.times())
        if (t >= a && t <= b) ts.push_back(t);
    ts.push_back(a);
    ts.push_back(b);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const int d = x.dim();
    std::vector<double> bx(d), by(d);
    double best = 0.0;
    for (double t : ts) {
        x.eval_into(t, bx);
        y.eval_into(t, by);
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += (bx[c] - by[c]) * (bx[c] - by[c]);
        best = std::max(best, s);
        if (t > a) {
            x.left_limit_into(t, bx);
            y.left_limit_into(t, by);
            s = 0.0;
            for (int c = 0; c < d; ++c) s += (bx[c] - by[c]) * (bx[c] - by[c]);
            best = std::max(best, s);
        }
    }
    return std::sqrt(best);
}

namespace detail {

// Largest even subdivision of [p,q] whose cells stay strictly longer than
// delta; assumes q - p > delta.
inline int max_cells_over(double p, double q, double delta) {
    int k = static_cast<int>(std::floor((q - p) / delta));
    if (k > 1 && (q - p) <= static_cast<double>(k) * delta) --k;
    return std::max(k, 1);
}

inline double partition_cost(const CadlagPath& x, const std::vector<double>& pins, double delta) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < pins.size(); ++i) {
        const double p = pins[i];
        const double q = pins[i + 1];
        const int k = max_cells_over(p, q, delta);
        for (int j = 0; j < k; ++j) {
            const double c0 = p + (q - p) * static_cast<double>(j) / k;
            const double c1 = (j + 1 == k) ? q : p + (q - p) * static_cast<double>(j + 1) / k;
            worst = std::max(worst, x.oscillation(c0, c1, false));
        }
    }
    return worst;
}

// Min-max partition value over a fixed breakpoint candidate set, scalar paths
// only. best[j] = smallest achievable worst-cell oscillation for partitions
// of [pts[0], pts[j]] using candidate breakpoints, every cell strictly longer
// than delta and half-open on the right.
inline double modulus_over_candidates(const CadlagPath& x, const std::vector<double>& pts, double delta) {
    const std::size_t n = pts.size();

    // Merge candidate and knot times into an event table. Slot 2k is the left
    // limit at event k, slot 2k+1 the value; the oscillation of [pts[i],
    // pts[j]) is a range scan from slot 2*ev(i)+1 through slot 2*ev(j).
    std::vector<double> ev = pts;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = x.time(k);
        if (t > pts.front() && t < pts.back()) ev.push_back(t);
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    const std::size_t ne = ev.size();

    std::vector<double> slot(2 * ne);
    std::vector<double> buf(1);
    for (std::size_t k = 0; k < ne; ++k) {
        if (k == 0) {
            x.eval_into(ev[k], buf);
            slot[0] = buf[0];
        } else {
            x.left_limit_into(ev[k], buf);
            slot[2 * k] = buf[0];
        }
        x.eval_into(ev[k], buf);
        slot[2 * k + 1] = buf[0];
    }

    std::vector<std::size_t> cand_ev(n);
    for (std::size_t i = 0; i < n; ++i)
        cand_ev[i] = static_cast<std::size_t>(std::lower_bound(ev.begin(), ev.end(), pts[i]) - ev.begin());

    // Sparse tables for O(1) range max and min over the slots.
    const std::size_t m = slot.size();
    int levels = 1;
    while ((std::size_t(1) << levels) <= m) ++levels;
    std::vector<std::vector<double>> mx(levels), mn(levels);
    mx[0] = slot;
    mn[0] = slot;
    for (int l = 1; l < levels; ++l) {
        const std::size_t w = std::size_t(1) << l;
        if (m + 1 < w) break;
        mx[l].resize(m + 1 - w);
        mn[l].resize(m + 1 - w);
        for (std::size_t i = 0; i + w <= m; ++i) {
            mx[l][i] = std::max(mx[l - 1][i], mx[l - 1][i + w / 2]);
            mn[l][i] = std::min(mn[l - 1][i], mn[l - 1][i + w / 2]);
        }
    }
    auto range_osc = [&](std::size_t i, std::size_t j) {
        const std::size_t lo = 2 * cand_ev[i] + 1;
        const std::size_t hi = 2 * cand_ev[j];
        const std::size_t len = hi - lo + 1;
        int l = 0;
        while ((std::size_t(2) << l) <= len) ++l;
        const std::size_t w = std::size_t(1) << l;
        return std::max(mx[l][lo], mx[l][hi + 1 - w]) - std::min(mn[l][lo], mn[l][hi + 1 - w]);
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n, inf);
    best[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        // Cells grow as i recedes, so once the oscillation alone reaches the
        // incumbent no earlier start can help.
        for (std::size_t i = j; i-- > 0;) {
            if (!(pts[j] - pts[i] > delta)) continue;
            const double osc = range_osc(i, j);
            if (osc >= best[j]) break;
            if (best[i] < best[j]) best[j] = std::max(best[i], osc);
        }
    }
    return best[n - 1];
}

} // namespace detail

// Billingsley's modulus w'_x(delta) on [a,b]: infimum over finite partitions
// a = t_0 < ... < t_r = b with every cell strictly longer than delta of the
// largest half-open cell oscillation w_x([t_{i-1}, t_i)). Scalar paths get a
// min-max DP over an adaptively refined breakpoint grid seeded with the knot
// times and the delta offsets where constrained optima sit; the result is an
// upper approximation that converges with the grid. Vector paths fall back to
// pinning jump subsets with even refinement in between.
inline double cadlag_modulus(const CadlagPath& x, double delta, double a, double b) {
    if (!(delta > 0.0)) throw parameter_error("cadlag_modulus: delta must be positive");
    if (!(b - a > delta))
        throw parameter_error("cadlag_modulus: window must be longer than delta");

    std::vector<double> jumps;
    for (double t : x.jump_times())
        if (t > a && t < b) jumps.push_back(t);

    if (x.dim() == 1) {
        std::vector<double> base{a, b};
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double t = x.time(k);
            if (t > a && t < b) base.push_back(t);
        }
        auto offer = [&](double t) {
            if (t > a && t < b) base.push_back(t);
        };
        offer(a + delta);
        offer(b - delta);
        for (double t : jumps) {
            offer(t - delta);
            offer(t + delta);
        }
        if (base.size() > 4096) {
            // Long paths: keep endpoints, jump-related points and an even
            // sample of the remaining knots.
            std::vector<double> keep{a, b};
            for (double t : jumps) {
                keep.push_back(t);
                if (t - delta > a) keep.push_back(t - delta);
                if (t + delta < b) keep.push_back(t + delta);
            }
            std::sort(base.begin(), base.end());
            const std::size_t stride = base.size() / 2048 + 1;
            for (std::size_t i = 0; i < base.size(); i += stride) keep.push_back(base[i]);
            base = std::move(keep);
        }

        double prev = std::numeric_limits<double>::infinity();
        double val = prev;
        for (int cells = 16; cells <= 2048; cells *= 2) {
            std::vector<double> pts = base;
            for (int i = 1; i < cells; ++i) pts.push_back(a + (b - a) * i / cells);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            val = std::min(val, detail::modulus_over_candidates(x, pts, delta));
            if (cells >= 64 && prev - val <= 1e-9 + 1e-6 * val) break;
            prev = val;
        }
        return val;
    }

    auto valid = [&](const std::vector<double>& pins) {
        for (std::size_t i = 0; i + 1 < pins.size(); ++i)
            if (!(pins[i + 1] - pins[i] > delta)) return false;
        return true;
    };

    double best = std::numeric_limits<double>::infinity();
    const std::size_t j = jumps.size();
    if (j <= 12) {
        for (std::size_t mask = 0; mask < (1ULL << j); ++mask) {
            std::vector<double> pins{a};
            for (std::size_t i = 0; i < j; ++i)
                if (mask & (1ULL << i)) pins.push_back(jumps[i]);
            pins.push_back(b);
            if (!valid(pins)) continue;
            best = std::min(best, detail::partition_cost(x, pins, delta));
        }
    } else {
        // Too many jumps for subset search: keep the largest ones greedily.
        std::vector<std::size_t> order(j);
        for (std::size_t i = 0; i < j; ++i) order[i] = i;
        std::vector<double> mags(j);
        for (std::size_t i = 0; i < j; ++i) {
            auto it = std::lower_bound(x.times().begin(), x.times().end(), jumps[i]);
            const std::size_t idx = static_cast<std::size_t>(it - x.times().begin());
            double s = 0.0;
            for (int c = 0; c < x.dim(); ++c) {
                const double d = x.right(idx)[c] - x.left(idx)[c];
                s += d * d;
            }
            mags[i] = s;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return mags[p] > mags[q]; });
        std::vector<double> pins{a, b};
        for (std::size_t oi : order) {
            std::vector<double> trial = pins;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), jumps[oi]), jumps[oi]);
            if (valid(trial)) pins = std::move(trial);
        }
        best = detail::partition_cost(x, pins, delta);
    }
    return best;
}

inline double cadlag_modulus(const CadlagPath& x, double delta) {
    return cadlag_modulus(x, delta, x.t_begin(), x.t_end());
}

// --- CSV -------------------------------------------------------------------
//
// Knot table, one row per stored side: "t,is_jump,v0[,v1,...]". Continuity
// knots emit a single row with is_jump=0; a jump knot emits its left values
// (is_jump=0) followed by its right values (is_jump=1) at the same t. Values
// are printed with enough digits to round-trip bit-exactly.

inline void write_path_csv(std::ostream& os, const CadlagPath& x) {
    os << "t,is_jump";
    for (int c = 0; c < x.dim(); ++c) os << ",v" << c;
    os << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    auto row = [&](double t, int flag, std::span<const double> vals) {
        put(t);
        os << ',' << flag;
        for (double v : vals) {
            os << ',';
            put(v);
        }
        os << "\n";
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.is_jump(i)) {
            row(x.time(i), 0, x.left(i));
            row(x.time(i), 1, x.right(i));
        } else {
            row(x.time(i), 0, x.right(i));
        }
    }
}

inline void split_csv_line(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline CadlagPath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw config_error("path csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    split_csv_line(line, fields);
    if (fields.size() < 3 || fields[0] != "t" || fields[1] != "is_jump")
        throw config_error("path csv: expected header t,is_jump,v0,...");
    const int dim = static_cast<int>(fields.size()) - 2;
    CadlagPath out(dim);
    std::vector<double> pending_left;
    double pending_t = 0.0;
    bool have_pending = false;
    std::vector<double> vals(dim);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        split_csv_line(line, fields);
        if (fields.size() != static_cast<std::size_t>(dim) + 2)
            throw config_error("path csv: wrong field count on line " + std::to_string(lineno));
        char* end = nullptr;
        const double t = std::strtod(fields[0].c_str(), &end);
        if (end == fields[0].c_str()) throw config_error("path csv: bad time on line " + std::to_string(lineno));
        const long flag = std::strtol(fields[1].c_str(), nullptr, 10);
        for (int c = 0; c < dim; ++c) {
            vals[c] = std::strtod(fields[c + 2].c_str(), &end);
            if (end == fields[c + 2].c_str())
                throw config_error("path csv: bad value on line " + std::to_string(lineno));
        }
        if (flag == 1) {
            if (!have_pending || pending_t != t)
                throw config_error("path csv: is_jump row without matching left row at line " +
                                   std::to_string(lineno));
            out.push_knot(t, pending_left, vals);
            have_pending = false;
        } else {
            if (have_pending) out.push_knot(pending_t, pending_left, pending_left);
            pending_left.assign(vals.begin(), vals.end());
            pending_t = t;
            have_pending = true;
        }
    }
    if (have_pending) out.push_knot(pending_t, pending_left, pending_left);
    if (out.empty()) throw config_error("path csv: no knots");
    return out;
}

// Jump table: "t_jump,size" with one row per jump (componentwise sizes for
// multi-component paths).
inline void write_jump_table_csv(std::ostream& os, const CadlagPath& x) {
    if (x.dim() == 1) {
        os << "t_jump,size\n";
    } else {
        os << "t_jump";
        for (int c = 0; c < x.dim(); ++c) os << ",size" << c;
        os << "\n";
    }
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x.is_jump(i)) continue;
        put(x.time(i));
        for (int c = 0; c < x.dim(); ++c) {
            os << ',';
            put(x.right(i)[c] - x.left(i)[c]);
        }
        os << "\n";
    }
}

} // namespace levysync
