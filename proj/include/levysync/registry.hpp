#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "levysync/errors.hpp"
#include "levysync/integrate.hpp"

// Named drift functions and noise families selectable from configs. Drifts
// apply componentwise so the same entry works at any state dimension.

namespace levysync {

struct RegistryEntry {
    std::string name;
    std::string params;
    std::string note;
};

inline const std::vector<RegistryEntry>& drift_registry() {
    static const std::vector<RegistryEntry> entries{
        {"linear", "", "y -> -y"},
        {"affine", "a,b", "y -> -(a*y + b), a > 0"},
        {"cubic", "a", "y -> -(y + a*y^3), a >= 0"},
        {"poly", "c0,...,ck", "y -> c0 + c1*y + ... + ck*y^k, dissipativity probed at use"},
    };
    return entries;
}

inline const std::vector<RegistryEntry>& noise_registry() {
    static const std::vector<RegistryEntry> entries{
        {"none", "", "deterministic zero path"},
        {"drift", "gamma", "pure drift gamma*t"},
        {"brownian", "a=1, gamma=0", "gaussian variance a plus drift"},
        {"compound-poisson", "rate, jump, ...", "jump in {constant(v), pm1, normal(mu,sd), uniform(lo,hi), exponential(mean)}"},
        {"stable", "alpha, scale, skew=0", "alpha-stable channel, alpha in (1,2)"},
    };
    return entries;
}

inline VectorField make_drift(const std::string& name, std::span<const double> p) {
    const auto arity = [&](std::size_t want) {
        if (p.size() != want)
            throw parameter_error("registry: drift '" + name + "' takes " + std::to_string(want) +
                                  " parameter(s), got " + std::to_string(p.size()));
    };
    if (name == "linear") {
        arity(0);
        return [](const std::vector<double>& y) {
            std::vector<double> out(y.size());
            for (std::size_t c = 0; c < y.size(); ++c) out[c] = -y[c];
            return out;
        };
    }
    if (name == "affine") {
        arity(2);
        const double a = p[0], b = p[1];
        if (!(a > 0.0)) throw parameter_error("registry: affine needs a > 0");
        return [a, b](const std::vector<double>& y) {
            std::vector<double> out(y.size());
            for (std::size_t c = 0; c < y.size(); ++c) out[c] = -(a * y[c] + b);
            return out;
        };
    }
    if (name == "cubic") {
        arity(1);
        const double a = p[0];
        if (!(a >= 0.0)) throw parameter_error("registry: cubic needs a >= 0");
        return [a](const std::vector<double>& y) {
            std::vector<double> out(y.size());
            for (std::size_t c = 0; c < y.size(); ++c) out[c] = -(y[c] + a * y[c] * y[c] * y[c]);
            return out;
        };
    }
    if (name == "poly") {
        if (p.empty()) throw parameter_error("registry: poly needs at least one coefficient");
        const std::vector<double> coeff(p.begin(), p.end());
        return [coeff](const std::vector<double>& y) {
            std::vector<double> out(y.size());
            for (std::size_t c = 0; c < y.size(); ++c) {
                double acc = 0.0;
                for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * y[c] + coeff[k];
                out[c] = acc;
            }
            return out;
        };
    }
    throw parameter_error("registry: unknown drift '" + name + "'");
}

// The worked two-system example: f = affine(1,1), g = affine(1,3) with
// noise coefficients 1 and 2.
struct PresetSystem {
    std::string f_name, g_name;
    std::vector<double> f_params, g_params;
    std::vector<double> alpha, beta;
};

inline PresetSystem preset_system(const std::string& name) {
    if (name == "paper-example")
        return {"affine", "affine", {1.0, 1.0}, {1.0, 3.0}, {1.0}, {2.0}};
    throw parameter_error("registry: unknown preset '" + name + "'");
}

inline std::string registry_text() {
    std::string out;
    const auto block = [&out](const char* heading, const std::vector<RegistryEntry>& entries) {
        out += heading;
        out += '\n';
        for (const RegistryEntry& e : entries) {
            std::string head = "  " + e.name;
            if (!e.params.empty()) head += "(" + e.params + ")";
            head += "  ";
            while (head.size() < 36) head += ' ';
            out += head + e.note + '\n';
        }
    };
    block("drift functions", drift_registry());
    out += '\n';
    block("system presets",
          {{"paper-example", "", "f = affine(1,1), g = affine(1,3), alpha = 1, beta = 2"}});
    out += '\n';
    block("noise families", noise_registry());
    return out;
}

} // namespace levysync
