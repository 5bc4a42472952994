#include "itolab/regularization.hpp"

#include <cmath>
#include <vector>

#include "itolab/errors.hpp"

namespace itolab {

namespace {

void check_step(const CadlagPath& x, std::size_t step) {
    if (step < 2) throw invalid_input("regularization: eps must be >= 2*dt");
    if (step >= x.nodes()) throw invalid_input("regularization: eps exceeds the horizon");
}

/// Shared windowed-quadrature kernel. psi_r/psi_l sample the integrand of
/// the prefix part (s + eps uncapped) with right values / left limits;
/// win_r/win_l sample the window part where (s + eps) /\ t == t.
template <typename PsiR, typename PsiL, typename WinR, typename WinL>
CadlagPath eps_integral(const TimeGrid& grid, std::size_t step, PsiR psi_r, PsiL psi_l,
                        WinR win_r, WinL win_l) {
    const std::size_t m = grid.node_count();
    const double dt = grid.dt();
    const double eps = static_cast<double>(step) * dt;

    // Prefix cumulative of psi over [0, t_i] for i <= m-1-step.
    std::vector<double> prefix(m - step, 0.0);
    for (std::size_t i = 1; i + step < m; ++i) {
        prefix[i] = prefix[i - 1] + 0.5 * dt * (psi_r(i - 1) + psi_l(i));
    }

    CadlagPath out(grid, 1);
    for (std::size_t i = 1; i < m; ++i) {
        const std::size_t lo = (i > step) ? i - step : 0;
        double window = 0.0;
        for (std::size_t k = lo; k < i; ++k) {
            window += 0.5 * dt * (win_r(k, i) + win_l(k + 1, i));
        }
        const double pre = (i > step) ? prefix[i - step] : 0.0;
        out.set_value(i, (pre + window) / eps);
    }
    return out;
}

}  // namespace

CadlagPath forward_integral_eps(const CadlagPath& h, const CadlagPath& x, std::size_t step) {
    require_same_grid(h, x);
    check_step(x, step);
    if (x.dim() == 1) {
        return eps_integral(
            x.grid(), step,
            [&](std::size_t k) { return h.value(k) * (x.value(k + step) - x.value(k)); },
            [&](std::size_t k) {
                return h.left_limit(k) * (x.left_limit(k + step) - x.left_limit(k));
            },
            [&](std::size_t k, std::size_t i) {
                return h.value(k) * (x.value(i) - x.value(k));
            },
            [&](std::size_t k, std::size_t i) {
                return h.left_limit(k) * (x.value(i) - x.left_limit(k));
            });
    }
    // d-dimensional: sum of componentwise integrals.
    CadlagPath acc(x.grid(), 1);
    for (std::size_t c = 0; c < x.dim(); ++c) {
        acc = add(acc, forward_integral_eps(component(h, c), component(x, c), step));
    }
    return acc;
}

CadlagPath quadratic_covariation_eps(const CadlagPath& x, const CadlagPath& y,
                                     std::size_t step) {
    require_same_grid(x, y);
    check_step(x, step);
    if (x.dim() != 1) {
        throw invalid_input("quadratic_covariation_eps: scalar paths; loop components");
    }
    return eps_integral(
        x.grid(), step,
        [&](std::size_t k) {
            return (x.value(k + step) - x.value(k)) * (y.value(k + step) - y.value(k));
        },
        [&](std::size_t k) {
            return (x.left_limit(k + step) - x.left_limit(k)) *
                   (y.left_limit(k + step) - y.left_limit(k));
        },
        [&](std::size_t k, std::size_t i) {
            return (x.value(i) - x.value(k)) * (y.value(i) - y.value(k));
        },
        [&](std::size_t k, std::size_t i) {
            return (x.value(i) - x.left_limit(k)) * (y.value(i) - y.left_limit(k));
        });
}

CadlagPath assumption_a_statistic(const PathFunctional& f, const CadlagPath& y,
                                  const CadlagPath& n, std::size_t step) {
    require_same_grid(y, n);
    check_step(y, step);
    if (!n.jump_nodes().empty()) {
        throw invalid_input("assumption_a_statistic: N must be continuous (no jumps)");
    }
    if (y.dim() != 1) throw invalid_input("assumption_a_statistic: scalar paths only");

    const std::size_t m = y.nodes();
    const double dt = y.grid().dt();
    const double eps = static_cast<double>(step) * dt;
    const std::size_t kmax = m - 1 - step;  // last node where s + eps stays on the grid

    const std::vector<double> f_on_y = f.eval_along(y);

    // Modified path buffer: Y on [0, k), Y_k on [k, k+step), Y_{k+step} at
    // k+step. Values beyond k+step are stale, which a non-anticipative F
    // never reads at time k+step.
    CadlagPath mod = y;
    std::vector<double> integrand(kmax + 1, 0.0);
    for (std::size_t k = 0; k <= kmax; ++k) {
        if (k > 0) {
            // Restore node k to Y and re-register Y's jump there.
            mod.set_value(k, y.value(k));
            mod.set_jump(k, y.jump(k));
        }
        for (std::size_t l = k + 1; l < k + step; ++l) {
            mod.set_value(l, y.value(k));
            if (mod.has_jump(l)) mod.clear_jump(l);
        }
        mod.set_value(k + step, y.value(k + step));
        mod.set_jump(k + step, y.value(k + step) - y.value(k));

        const double df = f_on_y[k + step] - f.eval(k + step, mod);
        integrand[k] = df * (n.value(k + step) - n.value(k));
    }

    CadlagPath out(y.grid(), 1);
    double acc = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        if (i <= kmax) {
            acc += 0.5 * dt * (integrand[i - 1] + integrand[i]);
        }
        out.set_value(i, acc / eps);
    }
    return out;
}

CadlagPath left_point_ito_sum(const CadlagPath& h, const CadlagPath& x) {
    require_same_grid(h, x);
    if (x.dim() != 1) throw invalid_input("left_point_ito_sum: scalar paths only");
    CadlagPath out(x.grid(), 1);
    double acc = 0.0;
    for (std::size_t k = 1; k < x.nodes(); ++k) {
        acc += h.value(k - 1) * (x.value(k) - x.value(k - 1));
        out.set_value(k, acc);
    }
    return out;
}

}  // namespace itolab
