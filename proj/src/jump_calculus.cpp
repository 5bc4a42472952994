#include "itolab/jump_calculus.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "itolab/errors.hpp"
#include "itolab/probes.hpp"
#include "itolab/regularization.hpp"

namespace itolab {

namespace {

class IdentityKernel : public JumpKernel {
public:
    IdentityKernel() : JumpKernel("identity") {}
    std::function<double(std::size_t, double)> bind(const SimulatedProcess&) const override {
        return [](std::size_t, double y) { return y; };
    }
};

class UnitKernel : public JumpKernel {
public:
    UnitKernel() : JumpKernel("unit") {}
    std::function<double(std::size_t, double)> bind(const SimulatedProcess&) const override {
        return [](std::size_t, double) { return 1.0; };
    }
};

std::shared_ptr<std::vector<double>> prebump_values(const PathFunctional& f,
                                                    const CadlagPath& x) {
    auto out = std::make_shared<std::vector<double>>(x.nodes());
    for (std::size_t s = 0; s < x.nodes(); ++s) (*out)[s] = f.eval_prebump(s, x, 0.0);
    return out;
}

std::shared_ptr<std::vector<double>> prebump_grads(const PathFunctional& f,
                                                   const CadlagPath& x, double h) {
    auto out = std::make_shared<std::vector<double>>(x.nodes());
    for (std::size_t s = 0; s < x.nodes(); ++s) {
        (*out)[s] = vertical_derivative_prebump(f, s, x, h)[0];
    }
    return out;
}

class GradTimesXKernel : public JumpKernel {
public:
    GradTimesXKernel(const PathFunctional& f, double h)
        : JumpKernel("x_grad_" + f.name()), f_(f), h_(h) {}
    std::function<double(std::size_t, double)> bind(const SimulatedProcess& proc) const override {
        auto grads = prebump_grads(f_, proc.x, h_);
        return [grads](std::size_t s, double y) { return y * (*grads)[s]; };
    }

private:
    const PathFunctional& f_;
    double h_;
};

class FIncrementKernel : public JumpKernel {
public:
    explicit FIncrementKernel(const PathFunctional& f)
        : JumpKernel("df_" + f.name()), f_(f) {}
    std::function<double(std::size_t, double)> bind(const SimulatedProcess& proc) const override {
        auto base = prebump_values(f_, proc.x);
        const PathFunctional* f = &f_;
        const CadlagPath* x = &proc.x;
        return [base, f, x](std::size_t s, double y) {
            return f->eval_prebump(s, *x, y) - (*base)[s];
        };
    }

private:
    const PathFunctional& f_;
};

class ItoRemainderKernel : public JumpKernel {
public:
    ItoRemainderKernel(const PathFunctional& f, double h)
        : JumpKernel("ito_remainder_" + f.name()), f_(f), h_(h) {}
    std::function<double(std::size_t, double)> bind(const SimulatedProcess& proc) const override {
        auto base = prebump_values(f_, proc.x);
        auto grads = prebump_grads(f_, proc.x, h_);
        const PathFunctional* f = &f_;
        const CadlagPath* x = &proc.x;
        return [base, grads, f, x](std::size_t s, double y) {
            return f->eval_prebump(s, *x, y) - (*base)[s] - y * (*grads)[s];
        };
    }

private:
    const PathFunctional& f_;
    double h_;
};

}  // namespace

std::unique_ptr<JumpKernel> identity_kernel() { return std::make_unique<IdentityKernel>(); }
std::unique_ptr<JumpKernel> unit_kernel() { return std::make_unique<UnitKernel>(); }
std::unique_ptr<JumpKernel> grad_times_x_kernel(const PathFunctional& f, double h) {
    return std::make_unique<GradTimesXKernel>(f, h);
}
std::unique_ptr<JumpKernel> f_increment_kernel(const PathFunctional& f) {
    return std::make_unique<FIncrementKernel>(f);
}
std::unique_ptr<JumpKernel> ito_remainder_kernel(const PathFunctional& f, double h) {
    return std::make_unique<ItoRemainderKernel>(f, h);
}

CadlagPath compensated_jump_integral(const JumpKernel& kernel, const SimulatedProcess& proc,
                                     JumpRegion region, double cutoff) {
    if (!(cutoff > 0.0)) throw invalid_input("compensated_jump_integral: cutoff must be > 0");
    const TimeGrid& grid = proc.x.grid();
    const std::size_t m = grid.node_count();
    auto g = kernel.bind(proc);

    const double floor_abs = proc.compensator.min_abs_applied;
    const auto in_region = [&](double applied) {
        const double a = std::abs(applied);
        if (region == JumpRegion::big) return a > cutoff;
        return a >= floor_abs && a <= cutoff;
    };

    // Realized-jump sums, registered as jumps of the output path.
    CadlagPath out(grid, 1);
    std::vector<double> jump_sum(m, 0.0);
    for (const auto& mark : proc.jump_marks) {
        if (!in_region(mark.applied)) continue;
        const double val = g(mark.node, mark.applied);
        if (!std::isfinite(val)) {
            throw numeric_failure("jump kernel '" + kernel.name() +
                                  "' non-finite at node " + std::to_string(mark.node));
        }
        jump_sum[mark.node] += val;
        out.add_to_jump(mark.node, std::span<const double>(&val, 1));
    }

    if (region == JumpRegion::big) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            acc += jump_sum[k];
            out.set_value(k, acc);
        }
        return out;
    }

    // Compensator drift by law quadrature: the small region demands a
    // closed-form compensator.
    const auto& comp = proc.compensator;
    if (comp.lambda > 0.0 && !comp.law.has_value()) {
        throw invalid_input("compensated_jump_integral: process carries no compensator law");
    }
    std::vector<double> drift_rate(m, 0.0);
    if (comp.lambda > 0.0) {
        for (std::size_t s = 0; s < m; ++s) {
            const double gs = comp.gamma_at_node[s];
            drift_rate[s] = comp.lambda *
                            comp.law->expect_abs_band(
                                [&](double mark) { return g(s, gs * mark); }, gs,
                                floor_abs, cutoff);
        }
    }
    const double dt = grid.dt();
    double acc = 0.0;
    double drift = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (k > 0) drift += 0.5 * dt * (drift_rate[k - 1] + drift_rate[k]);
        acc += jump_sum[k];
        out.set_value(k, acc - drift);
    }
    return out;
}

TruncationTriple truncate_small_jumps(const SimulatedProcess& proc, double eps_n) {
    if (!(eps_n > 0.0)) throw invalid_input("truncate_small_jumps: eps_n must be > 0");
    const TimeGrid& grid = proc.x.grid();
    const std::size_t m = grid.node_count();
    const double dt = grid.dt();

    std::vector<std::size_t> small_mark_nodes;
    std::vector<std::size_t> small_atom_nodes;

    // Yn = (x 1_{|x| < eps_n}) * (mu - nu): small realized marks minus the
    // closed-form compensator drift.
    CadlagPath yn(grid, 1);
    std::vector<double> small_jump_at(m, 0.0);
    for (const auto& mark : proc.jump_marks) {
        if (std::abs(mark.applied) < eps_n &&
            std::abs(mark.applied) >= proc.compensator.min_abs_applied) {
            small_jump_at[mark.node] += mark.applied;
            small_mark_nodes.push_back(mark.node);
        }
    }
    std::vector<double> drift_rate(m, 0.0);
    if (proc.compensator.lambda > 0.0 && proc.compensator.law.has_value()) {
        for (std::size_t s = 0; s < m; ++s) {
            const double gs = proc.compensator.gamma_at_node[s];
            drift_rate[s] = proc.compensator.lambda *
                            proc.compensator.law->expect_abs_band(
                                [&](double mark) { return gs * mark; }, gs,
                                proc.compensator.min_abs_applied, eps_n);
        }
    }
    CadlagPath drift_path(grid, 1);
    double acc = 0.0;
    double drift = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (k > 0) drift += 0.5 * dt * (drift_rate[k - 1] + drift_rate[k]);
        acc += small_jump_at[k];
        yn.set_value(k, acc - drift);
        drift_path.set_value(k, drift);
    }
    for (std::size_t k = 1; k < m; ++k) {
        if (small_jump_at[k] != 0.0) {
            yn.add_to_jump(k, std::span<const double>(&small_jump_at[k], 1));
        }
    }

    // Zn = Yn + small drift atoms.
    CadlagPath zn = yn;
    for (std::uint32_t node : proc.a_used.jump_nodes()) {
        const double da = proc.a_used.jump(node);
        if (std::abs(da) < eps_n && da != 0.0) {
            for (std::size_t k = node; k < m; ++k) zn.set_value(k, zn.value(k) + da);
            zn.add_to_jump(node, std::span<const double>(&da, 1));
            small_atom_nodes.push_back(node);
        }
    }

    // Xn = X - Zn, carried with its own decomposition ingredients: same
    // Mc, retained marks only, drift adjusted by the small atoms and the
    // compensator drift, and the law expectation floored at eps_n.
    SimulatedProcess xn{subtract(proc.x, zn),
                        proc.mc,
                        add(proc.a_used, drift_path),
                        {},
                        proc.compensator,
                        proc.seed,
                        proc.t0_node,
                        proc.deterministic_coefficients};
    for (std::size_t node : small_atom_nodes) {
        const double da = proc.a_used.jump(node);
        for (std::size_t k = node; k < m; ++k) {
            xn.a_used.set_value(k, xn.a_used.value(k) - da);
        }
        const double neg = -da;
        xn.a_used.add_to_jump(node, std::span<const double>(&neg, 1));
    }
    for (const auto& mark : proc.jump_marks) {
        if (std::abs(mark.applied) >= eps_n) xn.jump_marks.push_back(mark);
    }
    xn.compensator.min_abs_applied = std::max(proc.compensator.min_abs_applied, eps_n);

    return TruncationTriple{std::move(xn), std::move(zn),     std::move(yn),
                            eps_n,         small_mark_nodes, small_atom_nodes};
}

std::vector<TruncationStudyRow> truncation_vanishing_study(const SimulatedProcess& proc,
                                                           const EpsSchedule& schedule) {
    std::vector<TruncationStudyRow> rows;
    rows.reserve(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double eps_n = schedule.eps(i);
        TruncationTriple triple = truncate_small_jumps(proc, eps_n);
        TruncationStudyRow row;
        row.eps_n = eps_n;
        row.sup_zn = sup_norm(triple.zn);
        double jump_sq = 0.0;
        for (std::uint32_t node : triple.zn.jump_nodes()) {
            jump_sq += triple.zn.jump(node) * triple.zn.jump(node);
        }
        // Drift contribution to the bracket via the eps-bracket of the
        // continuous part of Zn at the smallest schedule step.
        CadlagPath cont = triple.zn;
        for (std::uint32_t node : triple.zn.jump_nodes()) {
            const double j = triple.zn.jump(node);
            for (std::size_t k = node; k < cont.nodes(); ++k) {
                cont.set_value(k, cont.value(k) - j);
            }
            cont.clear_jump(node);
        }
        row.bracket_zn =
            jump_sq + quadratic_covariation_eps(cont, cont, schedule.smallest_step())
                          .value(proc.x.grid().last());
        row.retained_jumps = triple.small_mark_nodes.size() + triple.small_atom_nodes.size();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace itolab
