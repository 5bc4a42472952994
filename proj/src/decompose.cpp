#include "itolab/decompose.hpp"

#include <cmath>

#include "itolab/errors.hpp"
#include "itolab/probes.hpp"
#include "itolab/regularization.hpp"

namespace itolab {

double DecompositionReport::ledger_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < f_path.nodes(); ++k) {
        const double lhs = f_path.value(k) - f_path.value(0);
        const double rhs = term_martingale.value(k) + term_bigjump.value(k) +
                           term_compensated.value(k) + gamma.value(k);
        worst = std::max(worst, std::abs(lhs - rhs) /
                                    std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
    return worst;
}

DecompositionReport ito_dupire_decompose(const PathFunctional& f, const SimulatedProcess& proc,
                                         double h, double cutoff) {
    if (!(h > 0.0)) throw invalid_input("ito_dupire_decompose: bump step must be > 0");
    if (proc.compensator.lambda > 0.0 && !proc.compensator.law.has_value()) {
        throw invalid_input("ito_dupire_decompose: model carries no closed-form compensator");
    }
    const TimeGrid& grid = proc.x.grid();
    const std::size_t m = grid.node_count();

    CadlagPath f_path(grid, 1);
    {
        const std::vector<double> values = f.eval_along(proc.x);
        for (std::size_t k = 0; k < m; ++k) {
            if (!std::isfinite(values[k])) {
                throw numeric_failure("ito_dupire_decompose: F non-finite at node " +
                                      std::to_string(k));
            }
            f_path.set_value(k, values[k]);
        }
    }

    // grad F at the predictable prefix, left-point integrand of the
    // martingale sum.
    std::vector<double> grads(m);
    for (std::size_t k = 0; k < m; ++k) {
        grads[k] = vertical_derivative_prebump(f, k, proc.x, h)[0];
        if (!std::isfinite(grads[k])) {
            throw numeric_failure("ito_dupire_decompose: grad F non-finite at node " +
                                  std::to_string(k));
        }
    }

    const auto grad_kernel = grad_times_x_kernel(f, h);
    const auto remainder_kernel = ito_remainder_kernel(f, h);

    CadlagPath term_martingale(grid, 1);
    {
        const CadlagPath small = compensated_jump_integral(*grad_kernel, proc,
                                                           JumpRegion::small, cutoff);
        const CadlagPath big = compensated_jump_integral(*grad_kernel, proc,
                                                         JumpRegion::big, cutoff);
        double mc_sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (k > 0) mc_sum += grads[k - 1] * (proc.mc.value(k) - proc.mc.value(k - 1));
            term_martingale.set_value(k, mc_sum + small.value(k) + big.value(k));
        }
    }

    CadlagPath term_bigjump =
        compensated_jump_integral(*remainder_kernel, proc, JumpRegion::big, cutoff);
    CadlagPath term_compensated =
        compensated_jump_integral(*remainder_kernel, proc, JumpRegion::small, cutoff);

    // Strip the registries: report paths are value-level diagnostics.
    CadlagPath gamma(grid, 1);
    CadlagPath big_clean(grid, 1), comp_clean(grid, 1);
    for (std::size_t k = 0; k < m; ++k) {
        big_clean.set_value(k, term_bigjump.value(k));
        comp_clean.set_value(k, term_compensated.value(k));
        gamma.set_value(k, (f_path.value(k) - f_path.value(0)) - term_martingale.value(k) -
                               term_bigjump.value(k) - term_compensated.value(k));
    }

    DecompositionReport report{std::move(f_path),
                               std::move(term_martingale),
                               std::move(big_clean),
                               std::move(comp_clean),
                               std::move(gamma),
                               h,
                               cutoff,
                               proc.seed,
                               f.name()};
    return report;
}

OrthoTestReport orthogonality_test(const DecompositionReport& report, const CadlagPath& n,
                                   const EpsSchedule& schedule, double tolerance) {
    if (!n.jump_nodes().empty()) {
        throw invalid_input("orthogonality_test: N must be continuous (no jumps)");
    }
    OrthoTestReport out;
    std::vector<CadlagPath> family;
    family.reserve(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        CadlagPath bracket = quadratic_covariation_eps(report.gamma, n, schedule.step(i));
        out.eps.push_back(schedule.eps(i));
        out.sup_bracket.push_back(sup_norm(bracket));
        family.push_back(std::move(bracket));
    }
    const CadlagPath zero(report.gamma.grid(), 1);
    out.diagnostic = ucp_limit(family, schedule, &zero, tolerance);
    return out;
}

PredictabilityReport predictability_proxy(const DecompositionReport& report,
                                          const SimulatedProcess& proc, double tol) {
    PredictabilityReport out;
    for (const auto& mark : proc.jump_marks) {
        if (mark.node == 0) continue;
        const double d =
            std::abs(report.gamma.value(mark.node) - report.gamma.value(mark.node - 1));
        out.max_abs_dgamma_at_marks = std::max(out.max_abs_dgamma_at_marks, d);
        ++out.mark_count;
    }
    for (std::uint32_t node : proc.a_used.jump_nodes()) {
        if (node == 0) continue;
        const double d = std::abs(report.gamma.value(node) - report.gamma.value(node - 1));
        out.max_abs_dgamma_at_atoms = std::max(out.max_abs_dgamma_at_atoms, d);
    }
    out.pass = out.mark_count == 0 || out.max_abs_dgamma_at_marks < tol;
    return out;
}

TruncationDecomposition decompose_via_truncation(const PathFunctional& f,
                                                 const SimulatedProcess& proc,
                                                 const EpsSchedule& schedule, double h,
                                                 double cutoff) {
    DecompositionReport direct = ito_dupire_decompose(f, proc, h, cutoff);
    TruncationDecomposition out;
    std::vector<CadlagPath> gammas;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        TruncationTriple triple = truncate_small_jumps(proc, schedule.eps(i));
        DecompositionReport rep = ito_dupire_decompose(f, triple.xn, h, cutoff);
        gammas.push_back(rep.gamma);
        out.reports.push_back(std::move(rep));
    }
    out.diagnostic = ucp_limit(gammas, schedule, &direct.gamma);
    return out;
}

}  // namespace itolab
