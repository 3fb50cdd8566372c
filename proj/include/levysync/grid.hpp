#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "errors.hpp"

namespace levysync {

// Uniform time grid on [t_start, t_end]. Nodes are always computed as
// t_start + k*dt (never accumulated) so two grids with the same parameters
// produce bit-identical node times.
class SimulationGrid {
public:
    SimulationGrid(double t_start, double t_end, double dt) : t_start_(t_start), dt_(dt) {
        if (!(dt > 0.0))
            throw parameter_error("grid: dt must be positive, got " + std::to_string(dt));
        if (!(t_end > t_start))
            throw parameter_error("grid: t_end must exceed t_start");
        const double span = t_end - t_start;
        n_cells_ = static_cast<std::int64_t>(std::llround(span / dt));
        if (n_cells_ < 1 ||
            std::abs(t_start + static_cast<double>(n_cells_) * dt - t_end) >
                1e-9 * std::max(1.0, std::abs(t_end)))
            throw parameter_error("grid: t_end - t_start must be a whole number of dt steps");
        t_end_ = node(n_cells_);
    }

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double dt() const { return dt_; }
    std::int64_t n_cells() const { return n_cells_; }
    std::int64_t n_nodes() const { return n_cells_ + 1; }

    double node(std::int64_t k) const { return t_start_ + static_cast<double>(k) * dt_; }

private:
    double t_start_;
    double t_end_;
    double dt_;
    std::int64_t n_cells_;
};

} // namespace levysync
