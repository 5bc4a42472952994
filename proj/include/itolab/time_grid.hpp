#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "itolab/errors.hpp"

namespace itolab {

/// Uniform grid t_k = k * dt on [0, T], with m nodes and dt = T / (m - 1).
/// Operators elsewhere take node indices; snap() is the one place where a
/// continuous time is rounded to a node.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t node_count)
        : horizon_(horizon), node_count_(node_count) {
        if (!(horizon > 0.0) || !std::isfinite(horizon)) {
            throw invalid_input("TimeGrid: horizon must be positive and finite");
        }
        if (node_count < 2) {
            throw invalid_input("TimeGrid: need at least 2 nodes");
        }
    }

    double horizon() const { return horizon_; }
    std::size_t node_count() const { return node_count_; }
    double dt() const { return horizon_ / static_cast<double>(node_count_ - 1); }
    double node(std::size_t k) const { return static_cast<double>(k) * dt(); }
    std::size_t last() const { return node_count_ - 1; }

    /// Nearest node to t; t must lie in [0, T] (up to a dt/2 overhang).
    std::size_t snap(double t) const {
        if (!std::isfinite(t) || t < -0.5 * dt() || t > horizon_ + 0.5 * dt()) {
            throw invalid_input("TimeGrid::snap: time " + std::to_string(t) +
                                " outside [0, " + std::to_string(horizon_) + "]");
        }
        const auto k = static_cast<long long>(std::llround(t / dt()));
        if (k < 0) return 0;
        if (static_cast<std::size_t>(k) > last()) return last();
        return static_cast<std::size_t>(k);
    }

    /// Index of t, requiring t to be (numerically) a grid node.
    std::size_t index_of(double t) const {
        const std::size_t k = snap(t);
        if (std::abs(t - node(k)) > 1e-9 * std::max(1.0, horizon_)) {
            throw invalid_input("TimeGrid::index_of: time " + std::to_string(t) +
                                " is not a grid node");
        }
        return k;
    }

    bool operator==(const TimeGrid& other) const {
        return horizon_ == other.horizon_ && node_count_ == other.node_count_;
    }
    bool operator!=(const TimeGrid& other) const { return !(*this == other); }

private:
    double horizon_;
    std::size_t node_count_;
};

}  // namespace itolab
