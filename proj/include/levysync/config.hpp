#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levysync/errors.hpp"
#include "levysync/levy.hpp"
#include "levysync/registry.hpp"
#include "levysync/sync.hpp"

// Flat line-oriented config: `[section]` headers followed by `key = value`
// lines. `#` starts a full-line comment; blank lines are skipped. Keys are
// addressed as section.key everywhere (errors, manifest).

namespace levysync {

struct ConfigDoc {
    std::string source = "config";
    std::vector<std::pair<std::string, std::string>> items; // file order
    std::map<std::string, std::size_t> index;
    std::map<std::string, int> lines;

    bool has(const std::string& key) const { return index.count(key) != 0; }
    const std::string& get(const std::string& key) const { return items[index.at(key)].second; }
    int line(const std::string& key) const {
        const auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline bool valid_token(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-')) return false;
    return true;
}

} // namespace detail

inline ConfigDoc parse_config_text(std::string_view text, const std::string& source = "config") {
    ConfigDoc doc;
    doc.source = source;
    const auto fail = [&source](int line, const std::string& what) -> void {
        throw config_error(source + " line " + std::to_string(line) + ": " + what);
    };

    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        const std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const std::string_view name = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::valid_token(name)) fail(line_no, "section names use [a-z0-9_-]");
            section = std::string(name);
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (!detail::valid_token(key)) fail(line_no, "keys use [a-z0-9_-]");
        if (value.empty()) fail(line_no, "value for '" + std::string(key) + "' is empty");
        if (section.empty()) fail(line_no, "key '" + std::string(key) + "' appears before any [section]");

        const std::string full = section + "." + std::string(key);
        if (doc.has(full)) fail(line_no, "duplicate key '" + full + "'");
        doc.index[full] = doc.items.size();
        doc.items.emplace_back(full, std::string(value));
        doc.lines[full] = line_no;
    }
    return doc;
}

enum class ExperimentKind { Sample, Integrate, Stationary, Metric, Sweep };

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Sample: return "sample";
    case ExperimentKind::Integrate: return "integrate";
    case ExperimentKind::Stationary: return "stationary";
    case ExperimentKind::Metric: return "metric";
    case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

// Fully resolved experiment: every default filled in, drifts constructed,
// and the manifest echo (`resolved`) listing each effective parameter.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Sample;
    std::string output_dir;
    std::uint64_t seed = 1;
    int threads = 1;

    double t1 = 0.0, t2 = 2.0, dt = 1e-3;

    std::string noise1_family = "brownian", noise2_family = "brownian";
    GeneratingTriplet noise1, noise2;

    std::string preset;
    std::string f_name, g_name;
    std::vector<double> f_params, g_params;
    std::vector<double> alpha{1.0}, beta{1.0};
    VectorField f, g;
    double y0 = 0.0;

    std::vector<double> lambda_values{1.0, 10.0, 100.0, 1000.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double metric_tol = 1e-3;
    bool share_noise = false;

    std::string metric_path1, metric_path2;
    double metric_m = 1.0;

    std::vector<std::pair<std::string, std::string>> resolved;
};

namespace detail {

// Typed access over a ConfigDoc with consumption tracking; leftover keys are
// reported as unknown so typos cannot silently fall back to defaults.
class ConfigReader {
  public:
    explicit ConfigReader(const ConfigDoc& doc) : doc_(doc) {}

    bool has(const std::string& key) {
        if (doc_.has(key)) used_.insert(key);
        return doc_.has(key);
    }

    std::string str(const std::string& key, const std::string& fallback) {
        return doc_.has(key) ? take(key) : fallback;
    }

    std::string required(const std::string& key) {
        if (!doc_.has(key)) throw config_error(doc_.source + ": missing required key '" + key + "'");
        return take(key);
    }

    double num(const std::string& key, double fallback) {
        return doc_.has(key) ? to_num(key, take(key)) : fallback;
    }

    double required_num(const std::string& key) { return to_num(key, required(key)); }

    long long integer(const std::string& key, long long fallback) {
        if (!doc_.has(key)) return fallback;
        return to_int(key, take(key));
    }

    bool flag(const std::string& key, bool fallback) {
        if (!doc_.has(key)) return fallback;
        const std::string v = take(key);
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw bad(key, "must be true or false");
    }

    std::vector<double> num_list(const std::string& key, std::vector<double> fallback) {
        if (!doc_.has(key)) return fallback;
        std::vector<double> out;
        for (const std::string& piece : split(take(key))) out.push_back(to_num(key, piece));
        if (out.empty()) throw bad(key, "list is empty");
        return out;
    }

    std::vector<std::uint64_t> seed_list(const std::string& key, std::vector<std::uint64_t> fallback) {
        if (!doc_.has(key)) return fallback;
        std::vector<std::uint64_t> out;
        for (const std::string& piece : split(take(key))) {
            const long long v = to_int(key, piece);
            if (v < 0) throw bad(key, "seeds must be nonnegative");
            out.push_back(static_cast<std::uint64_t>(v));
        }
        if (out.empty()) throw bad(key, "list is empty");
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : doc_.items)
            if (!used_.count(key))
                throw config_error(doc_.source + " line " + std::to_string(doc_.line(key)) +
                                      ": unknown key '" + key + "'");
    }

    config_error bad(const std::string& key, const std::string& what) const {
        return config_error(doc_.source + ": " + key + " " + what);
    }

  private:
    std::string take(const std::string& key) {
        used_.insert(key);
        return doc_.get(key);
    }

    double to_num(const std::string& key, const std::string& v) const {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') throw bad(key, "expects a number, got '" + v + "'");
        return x;
    }

    long long to_int(const std::string& key, const std::string& v) const {
        char* end = nullptr;
        const long long x = std::strtoll(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0') throw bad(key, "expects an integer, got '" + v + "'");
        return x;
    }

    static std::vector<std::string> split(const std::string& v) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= v.size()) {
            std::size_t comma = v.find(',', start);
            if (comma == std::string::npos) comma = v.size();
            const std::string_view piece = trim(std::string_view(v).substr(start, comma - start));
            if (!piece.empty()) out.emplace_back(piece);
            start = comma + 1;
        }
        return out;
    }

    const ConfigDoc& doc_;
    std::set<std::string> used_;
};

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_num_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt_num(v[i]);
    }
    return out;
}

inline std::string fmt_seed_list(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

// Resolve one [noiseN] section into a generating triplet and record the
// effective parameters.
inline GeneratingTriplet read_noise(ConfigReader& r, const std::string& sec, std::string& family_out,
                                    std::vector<std::pair<std::string, std::string>>& resolved) {
    const std::string family = r.str(sec + ".family", "brownian");
    family_out = family;
    resolved.emplace_back(sec + ".family", family);
    const auto note = [&](const std::string& key, double v) {
        resolved.emplace_back(sec + "." + key, fmt_num(v));
    };

    if (family == "none") {
        note("a", 0.0);
        note("gamma", 0.0);
        return GeneratingTriplet::scalar(0.0, 0.0);
    }
    if (family == "drift") {
        const double gamma = r.required_num(sec + ".gamma");
        note("a", 0.0);
        note("gamma", gamma);
        return GeneratingTriplet::scalar(0.0, gamma);
    }
    if (family == "brownian") {
        const double a = r.num(sec + ".a", 1.0);
        const double gamma = r.num(sec + ".gamma", 0.0);
        if (!(a >= 0.0)) throw r.bad(sec + ".a", "must be >= 0");
        note("a", a);
        note("gamma", gamma);
        return GeneratingTriplet::scalar(a, gamma);
    }
    if (family == "compound-poisson") {
        const double a = r.num(sec + ".a", 0.0);
        const double gamma = r.num(sec + ".gamma", 0.0);
        const double rate = r.required_num(sec + ".rate");
        const std::string jump = r.required(sec + ".jump");
        note("a", a);
        note("gamma", gamma);
        note("rate", rate);
        resolved.emplace_back(sec + ".jump", jump);
        JumpDistribution dist;
        if (jump == "constant") {
            dist = JumpDistribution::constant(r.required_num(sec + ".jump_value"));
            note("jump_value", dist.p1);
        } else if (jump == "pm1") {
            dist = JumpDistribution::plus_minus_one();
        } else if (jump == "normal") {
            dist = JumpDistribution::normal(r.required_num(sec + ".jump_mean"), r.required_num(sec + ".jump_sd"));
            note("jump_mean", dist.p1);
            note("jump_sd", dist.p2);
        } else if (jump == "uniform") {
            dist = JumpDistribution::uniform(r.required_num(sec + ".jump_lo"), r.required_num(sec + ".jump_hi"));
            note("jump_lo", dist.p1);
            note("jump_hi", dist.p2);
        } else if (jump == "exponential") {
            dist = JumpDistribution::exponential(r.required_num(sec + ".jump_mean"));
            note("jump_mean", dist.p1);
        } else {
            throw r.bad(sec + ".jump", "must be one of constant, pm1, normal, uniform, exponential");
        }
        return GeneratingTriplet::scalar(a, gamma, JumpMeasureSpec::compound_poisson(rate, dist));
    }
    if (family == "stable") {
        const double a = r.num(sec + ".a", 0.0);
        const double gamma = r.num(sec + ".gamma", 0.0);
        const double alpha = r.required_num(sec + ".alpha");
        const double scale = r.required_num(sec + ".scale");
        const double skew = r.num(sec + ".skew", 0.0);
        note("a", a);
        note("gamma", gamma);
        note("alpha", alpha);
        note("scale", scale);
        note("skew", skew);
        return GeneratingTriplet::scalar(a, gamma, JumpMeasureSpec::alpha_stable(alpha, scale, skew));
    }
    throw r.bad(sec + ".family", "unknown noise family '" + family + "'");
}

} // namespace detail

inline ExperimentConfig load_experiment(const ConfigDoc& doc) {
    detail::ConfigReader r(doc);
    ExperimentConfig ec;

    const std::string kind = r.required("experiment.kind");
    if (kind == "sample") ec.kind = ExperimentKind::Sample;
    else if (kind == "integrate") ec.kind = ExperimentKind::Integrate;
    else if (kind == "stationary") ec.kind = ExperimentKind::Stationary;
    else if (kind == "metric") ec.kind = ExperimentKind::Metric;
    else if (kind == "sweep") ec.kind = ExperimentKind::Sweep;
    else throw r.bad("experiment.kind", "must be one of sample, integrate, stationary, metric, sweep");
    ec.resolved.emplace_back("experiment.kind", kind);

    ec.output_dir = r.str("experiment.output", "");
    if (!ec.output_dir.empty()) ec.resolved.emplace_back("experiment.output", ec.output_dir);

    const bool single_run = ec.kind == ExperimentKind::Sample || ec.kind == ExperimentKind::Integrate ||
                            ec.kind == ExperimentKind::Stationary;
    if (single_run) {
        const long long seed = r.integer("experiment.seed", 1);
        if (seed < 0) throw r.bad("experiment.seed", "must be nonnegative");
        ec.seed = static_cast<std::uint64_t>(seed);
        ec.resolved.emplace_back("experiment.seed", std::to_string(ec.seed));
    }
    if (ec.kind == ExperimentKind::Sweep) {
        const long long threads = r.integer("experiment.threads", 1);
        if (threads < 1) throw r.bad("experiment.threads", "must be >= 1");
        ec.threads = static_cast<int>(threads);
        ec.resolved.emplace_back("experiment.threads", std::to_string(ec.threads));
    }

    if (ec.kind != ExperimentKind::Metric) {
        ec.t1 = r.num("grid.t1", 0.0);
        ec.t2 = r.num("grid.t2", 2.0);
        ec.dt = r.num("grid.dt", 1e-3);
        if (!(ec.t2 > ec.t1)) throw r.bad("grid.t2", "must exceed grid.t1");
        if (!(ec.dt > 0.0) || !(ec.dt <= ec.t2 - ec.t1)) throw r.bad("grid.dt", "must lie in (0, t2 - t1]");
        ec.resolved.emplace_back("grid.t1", detail::fmt_num(ec.t1));
        ec.resolved.emplace_back("grid.t2", detail::fmt_num(ec.t2));
        ec.resolved.emplace_back("grid.dt", detail::fmt_num(ec.dt));

        ec.noise1 = detail::read_noise(r, "noise1", ec.noise1_family, ec.resolved);
    }

    const bool needs_system = ec.kind == ExperimentKind::Integrate || ec.kind == ExperimentKind::Stationary ||
                              ec.kind == ExperimentKind::Sweep;
    if (needs_system) {
        if (r.has("system.preset")) {
            if (ec.kind != ExperimentKind::Sweep) throw r.bad("system.preset", "applies to sweep configs only");
            ec.preset = r.str("system.preset", "");
            const PresetSystem ps = preset_system(ec.preset);
            ec.f_name = ps.f_name;
            ec.g_name = ps.g_name;
            ec.f_params = ps.f_params;
            ec.g_params = ps.g_params;
            ec.alpha = ps.alpha;
            ec.beta = ps.beta;
            ec.resolved.emplace_back("system.preset", ec.preset);
        } else {
            ec.f_name = r.required("system.f");
            ec.f_params = r.num_list("system.f_params", {});
            ec.alpha = r.num_list("system.alpha", {1.0});
            if (ec.kind == ExperimentKind::Sweep) {
                ec.g_name = r.required("system.g");
                ec.g_params = r.num_list("system.g_params", {});
                ec.beta = r.num_list("system.beta", {1.0});
            }
        }
        ec.f = make_drift(ec.f_name, ec.f_params);
        if (ec.preset.empty()) {
            ec.resolved.emplace_back("system.f", ec.f_name);
            ec.resolved.emplace_back("system.f_params", detail::fmt_num_list(ec.f_params));
            ec.resolved.emplace_back("system.alpha", detail::fmt_num_list(ec.alpha));
        }
        if (ec.kind == ExperimentKind::Sweep) {
            ec.g = make_drift(ec.g_name, ec.g_params);
            if (ec.preset.empty()) {
                ec.resolved.emplace_back("system.g", ec.g_name);
                ec.resolved.emplace_back("system.g_params", detail::fmt_num_list(ec.g_params));
                ec.resolved.emplace_back("system.beta", detail::fmt_num_list(ec.beta));
            }
        }
        if (ec.alpha.size() != 1 || ec.beta.size() != 1)
            throw r.bad("system.alpha", "and system.beta must be scalar in configs");
    }
    if (ec.kind == ExperimentKind::Integrate) {
        ec.y0 = r.num("system.y0", 0.0);
        ec.resolved.emplace_back("system.y0", detail::fmt_num(ec.y0));
    }

    if (ec.kind == ExperimentKind::Sweep) {
        ec.noise2 = detail::read_noise(r, "noise2", ec.noise2_family, ec.resolved);
        ec.lambda_values = r.num_list("sweep.lambda_values", ec.lambda_values);
        ec.seeds = r.seed_list("sweep.seeds", ec.seeds);
        ec.metric_tol = r.num("sweep.metric_tol", 1e-3);
        ec.share_noise = r.flag("sweep.share_noise", false);
        for (std::size_t i = 0; i + 1 < ec.lambda_values.size(); ++i)
            if (!(ec.lambda_values[i] < ec.lambda_values[i + 1]))
                throw r.bad("sweep.lambda_values", "must be strictly ascending");
        for (double lam : ec.lambda_values)
            if (!(lam >= 0.0)) throw r.bad("sweep.lambda_values", "must be nonnegative");
        if (!(ec.metric_tol > 0.0)) throw r.bad("sweep.metric_tol", "must be positive");
        ec.resolved.emplace_back("sweep.lambda_values", detail::fmt_num_list(ec.lambda_values));
        ec.resolved.emplace_back("sweep.seeds", detail::fmt_seed_list(ec.seeds));
        ec.resolved.emplace_back("sweep.metric_tol", detail::fmt_num(ec.metric_tol));
        ec.resolved.emplace_back("sweep.share_noise", ec.share_noise ? "true" : "false");
    }

    if (ec.kind == ExperimentKind::Metric) {
        ec.metric_path1 = r.required("metric.path1");
        ec.metric_path2 = r.required("metric.path2");
        ec.metric_m = r.num("metric.m", 1.0);
        ec.metric_tol = r.num("metric.tol", 1e-3);
        if (!(ec.metric_m > 0.0)) throw r.bad("metric.m", "must be positive");
        if (!(ec.metric_tol > 0.0)) throw r.bad("metric.tol", "must be positive");
        ec.resolved.emplace_back("metric.path1", ec.metric_path1);
        ec.resolved.emplace_back("metric.path2", ec.metric_path2);
        ec.resolved.emplace_back("metric.m", detail::fmt_num(ec.metric_m));
        ec.resolved.emplace_back("metric.tol", detail::fmt_num(ec.metric_tol));
    }

    r.finish();
    return ec;
}

// Maps a loaded sweep experiment onto the sweep driver's inputs.
inline SweepConfig to_sweep_config(const ExperimentConfig& ec) {
    if (ec.kind != ExperimentKind::Sweep)
        throw config_error("experiment.kind: expected sweep, got " + std::string(kind_name(ec.kind)));
    SweepConfig sc;
    sc.f = ec.f;
    sc.g = ec.g;
    sc.alpha = ec.alpha;
    sc.beta = ec.beta;
    sc.triplet1 = ec.noise1;
    sc.triplet2 = ec.noise2;
    sc.lambda_values = ec.lambda_values;
    sc.t1 = ec.t1;
    sc.t2 = ec.t2;
    sc.dt = ec.dt;
    sc.seeds = ec.seeds;
    sc.metric_tol = ec.metric_tol;
    sc.share_noise = ec.share_noise;
    sc.threads = ec.threads;
    return sc;
}

} // namespace levysync
