#include "itolab/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/errors.hpp"

namespace itolab {

EpsSchedule::EpsSchedule(const TimeGrid& grid, std::vector<std::size_t> steps)
    : grid_(grid), steps_(std::move(steps)) {
    if (steps_.empty()) throw invalid_input("EpsSchedule: empty");
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i] < 2) throw invalid_input("EpsSchedule: eps must be >= 2*dt");
        if (steps_[i] >= grid.node_count()) {
            throw invalid_input("EpsSchedule: eps exceeds the horizon");
        }
        if (i > 0 && steps_[i] >= steps_[i - 1]) {
            throw invalid_input("EpsSchedule: must be strictly decreasing");
        }
    }
}

EpsSchedule EpsSchedule::dyadic(const TimeGrid& grid, int k_min, int k_max) {
    if (k_min > k_max) throw invalid_input("EpsSchedule::dyadic: k_min > k_max");
    std::vector<std::size_t> steps;
    for (int k = k_min; k <= k_max; ++k) {
        const double eps = std::ldexp(grid.horizon(), -k);
        auto j = static_cast<long long>(std::llround(eps / grid.dt()));
        j = std::max<long long>(j, 2);  // clip at 2*dt
        if (!steps.empty() && static_cast<std::size_t>(j) >= steps.back()) continue;
        steps.push_back(static_cast<std::size_t>(j));
    }
    return EpsSchedule(grid, std::move(steps));
}

EpsSchedule EpsSchedule::from_eps_values(const TimeGrid& grid, std::span<const double> eps) {
    std::vector<std::size_t> steps;
    for (double e : eps) {
        auto j = static_cast<long long>(std::llround(e / grid.dt()));
        if (j < 2) throw invalid_input("EpsSchedule: eps below 2*dt");
        steps.push_back(static_cast<std::size_t>(j));
    }
    return EpsSchedule(grid, std::move(steps));
}

namespace {

double fit_loglog_slope(std::span<const double> eps, std::span<const double> gap,
                        std::size_t n, double scale) {
    // Least squares of log(gap) on log(eps); zero gaps are floored so the
    // slope stays finite (a constant-zero family then reports slope 0).
    if (n < 2) return 0.0;
    const double floor_val = 1e-16 * std::max(scale, 1e-300);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(eps[i]);
        const double y = std::log(std::max(gap[i], floor_val));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double num = static_cast<double>(n) * sxy - sx * sy;
    const double den = static_cast<double>(n) * sxx - sx * sx;
    return den != 0.0 ? num / den : 0.0;
}

double sup_abs_diff(const CadlagPath& a, const CadlagPath& b) {
    require_same_grid(a, b);
    double sup = 0.0;
    for (std::size_t k = 0; k < a.nodes(); ++k) {
        sup = std::max(sup, std::abs(a.value(k) - b.value(k)));
    }
    return sup;
}

}  // namespace

double ConvergenceDiagnostic::slope_so_far(std::size_t n) const {
    n = std::min(n, sup_gap.size());
    return fit_loglog_slope(eps, sup_gap, n, scale);
}

ConvergenceDiagnostic ucp_limit(std::span<const CadlagPath> family,
                                const EpsSchedule& schedule, const CadlagPath* reference,
                                double tolerance) {
    if (family.size() != schedule.size()) {
        throw invalid_input("ucp_limit: family and schedule sizes differ");
    }
    if (schedule.size() < 2) {
        throw invalid_input("ucp_limit: schedule shorter than 2");
    }
    ConvergenceDiagnostic diag;
    diag.tolerance = tolerance;
    diag.scale = reference ? std::max(1e-300, sup_norm(*reference)) : 1.0;
    if (reference && sup_norm(*reference) == 0.0) diag.scale = 1.0;

    if (reference) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            diag.eps.push_back(schedule.eps(i));
            diag.sup_gap.push_back(sup_abs_diff(family[i], *reference));
        }
    } else {
        for (std::size_t i = 0; i + 1 < family.size(); ++i) {
            diag.eps.push_back(schedule.eps(i));
            diag.sup_gap.push_back(sup_abs_diff(family[i], family[i + 1]));
        }
    }
    diag.slope = fit_loglog_slope(diag.eps, diag.sup_gap, diag.sup_gap.size(), diag.scale);
    diag.converged = !diag.sup_gap.empty() &&
                     diag.sup_gap.back() < tolerance * diag.scale;
    return diag;
}

ConvergenceDiagnostic median_diagnostic(std::span<const ConvergenceDiagnostic> diags,
                                        double tolerance) {
    if (diags.empty()) throw invalid_input("median_diagnostic: no diagnostics");
    ConvergenceDiagnostic out;
    out.tolerance = tolerance;
    out.scale = diags.front().scale;
    out.eps = diags.front().eps;
    const std::size_t n = out.eps.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> vals;
        vals.reserve(diags.size());
        for (const auto& d : diags) vals.push_back(d.sup_gap[i]);
        std::sort(vals.begin(), vals.end());
        const std::size_t half = vals.size() / 2;
        out.sup_gap.push_back(vals.size() % 2 == 1
                                  ? vals[half]
                                  : 0.5 * (vals[half - 1] + vals[half]));
    }
    out.slope = out.slope_so_far(n);
    out.converged = !out.sup_gap.empty() && out.sup_gap.back() < tolerance * out.scale;
    return out;
}

}  // namespace itolab
