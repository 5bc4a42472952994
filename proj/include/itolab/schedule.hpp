#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "itolab/path.hpp"

namespace itolab {

/// Strictly decreasing regularization parameters, each an integer
/// multiple of dt and at least 2*dt. The default schedule is dyadic,
/// eps_k = 2^-k * T for k in [k_min, k_max], snapped to the grid and
/// clipped at 2*dt.
class EpsSchedule {
public:
    EpsSchedule(const TimeGrid& grid, std::vector<std::size_t> steps);

    static EpsSchedule dyadic(const TimeGrid& grid, int k_min = 3, int k_max = 9);
    static EpsSchedule from_eps_values(const TimeGrid& grid, std::span<const double> eps);

    std::size_t size() const { return steps_.size(); }
    std::size_t step(std::size_t i) const { return steps_[i]; }
    double eps(std::size_t i) const { return static_cast<double>(steps_[i]) * grid_.dt(); }
    std::size_t smallest_step() const { return steps_.back(); }
    const TimeGrid& grid() const { return grid_; }

private:
    TimeGrid grid_;
    std::vector<std::size_t> steps_;
};

/// Numerical surrogate for a u.c.p. statement: per-eps sup-over-t gaps,
/// a fitted log-log slope, and a converged flag (last gap below
/// tol * scale).
struct ConvergenceDiagnostic {
    std::vector<double> eps;
    std::vector<double> sup_gap;
    double slope = 0.0;
    double tolerance = 5e-2;
    double scale = 1.0;
    bool converged = false;

    /// Slope of log(gap) vs log(eps) fitted on the first n entries.
    double slope_so_far(std::size_t n) const;
};

/// If `reference` is given: gap_i = sup_t |family[i] - reference|.
/// Otherwise the Cauchy diagnostic gap_i = sup_t |family[i] - family[i+1]|.
/// `family` is indexed like the schedule (decreasing eps).
ConvergenceDiagnostic ucp_limit(std::span<const CadlagPath> family,
                                const EpsSchedule& schedule,
                                const CadlagPath* reference = nullptr,
                                double tolerance = 5e-2);

/// Median of per-path diagnostics: gap_i = median over paths.
ConvergenceDiagnostic median_diagnostic(std::span<const ConvergenceDiagnostic> diags,
                                        double tolerance = 5e-2);

}  // namespace itolab
