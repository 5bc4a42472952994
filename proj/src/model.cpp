#include "itolab/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itolab/errors.hpp"
#include "itolab/parallel.hpp"

namespace itolab {

double Coefficient::bound(double horizon) const {
    return std::max(std::abs(c0), std::abs(c0 + c1 * horizon));
}

CadlagPath DriftSpec::build(const TimeGrid& grid) const {
    CadlagPath a(grid, 1);
    const std::size_t m = grid.node_count();
    for (std::size_t k = 0; k < m; ++k) {
        double v = slope * grid.node(k);
        if (weierstrass_amplitude != 0.0) {
            double w = 0.0;
            double amp = 1.0;
            double freq = 1.0;
            for (std::size_t j = 0; j < weierstrass_terms; ++j) {
                w += amp * std::cos(freq * 3.14159265358979323846 * grid.node(k));
                amp *= weierstrass_a;
                freq *= weierstrass_b;
            }
            v += weierstrass_amplitude * w;
        }
        a.set_value(k, v);
    }
    for (const auto& [time, size] : atoms) {
        const std::size_t node = grid.snap(time);
        if (node == 0) throw invalid_input("drift atom at time 0 is not allowed");
        for (std::size_t k = node; k < m; ++k) a.set_value(k, a.value(k) + size);
        a.add_to_jump(node, std::span<const double>(&size, 1));
    }
    return a;
}

void JumpDiffusionSpec::validate(const TimeGrid& grid) const {
    if (lambda < 0.0) throw invalid_input("model: lambda must be >= 0");
    if (lambda > 0.0 && !law.has_value()) {
        throw invalid_input("model: a jump law is required when lambda > 0");
    }
    if (lambda * grid.dt() > 0.1) {
        throw invalid_input(
            "model: lambda * dt = " + std::to_string(lambda * grid.dt()) +
            " > 0.1; grid too coarse for the at-most-one-jump-per-node convention");
    }
}

double SimulatedProcess::decomposition_defect() const {
    const std::size_t m = x.nodes();
    double jumps_so_far = 0.0;
    std::size_t mark_idx = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        while (mark_idx < jump_marks.size() && jump_marks[mark_idx].node <= k) {
            jumps_so_far += jump_marks[mark_idx].applied;
            ++mark_idx;
        }
        const double lhs = x.value(k);
        const double rhs = x.value(0) + mc.value(k) + jumps_so_far + a_used.value(k);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

CadlagPath SimulatedProcess::jump_sum_path() const {
    CadlagPath out(x.grid(), 1);
    double acc = 0.0;
    std::size_t mark_idx = 0;
    for (std::size_t k = 0; k < x.nodes(); ++k) {
        while (mark_idx < jump_marks.size() && jump_marks[mark_idx].node <= k) {
            acc += jump_marks[mark_idx].applied;
            ++mark_idx;
        }
        out.set_value(k, acc);
    }
    for (const auto& mark : jump_marks) {
        out.add_to_jump(mark.node, std::span<const double>(&mark.applied, 1));
    }
    return out;
}

namespace {

/// Snapped Poisson jump nodes with at-most-one-per-node enforced: a
/// colliding event moves to the nearest free node (alternating +-1, +-2,
/// ...). Collisions have probability O((lambda dt)^2) under the
/// lambda*dt <= 0.1 precondition.
std::vector<std::size_t> draw_jump_nodes(const TimeGrid& grid, std::size_t t0, double lambda,
                                         Rng& rng) {
    std::vector<std::size_t> nodes;
    if (lambda <= 0.0) return nodes;
    const double t_start = grid.node(t0);
    std::vector<char> occupied(grid.node_count(), 0);
    double t = t_start + rng.next_exponential(lambda);
    while (t <= grid.horizon()) {
        std::size_t node = grid.snap(t);
        if (node <= t0) node = t0 + 1;
        if (node < grid.node_count()) {
            if (occupied[node]) {
                bool placed = false;
                for (std::size_t off = 1; off < grid.node_count() && !placed; ++off) {
                    if (node + off < grid.node_count() && !occupied[node + off]) {
                        node = node + off;
                        placed = true;
                    } else if (node >= off && node - off > t0 && !occupied[node - off]) {
                        node = node - off;
                        placed = true;
                    }
                }
                if (!placed) break;  // grid saturated; cannot happen under the precondition
            }
            occupied[node] = 1;
            nodes.push_back(node);
        }
        t += rng.next_exponential(lambda);
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

}  // namespace

SimulatedProcess simulate(const JumpDiffusionSpec& spec, const TimeGrid& grid,
                          std::size_t t0, const CadlagPath& x0, std::uint64_t seed) {
    spec.validate(grid);
    if (x0.grid() != grid) throw invalid_input("simulate: x0 lives on a different grid");
    if (x0.dim() != 1) throw invalid_input("simulate: scalar models only");
    if (t0 >= grid.node_count()) throw invalid_input("simulate: t0 outside grid");

    const std::size_t m = grid.node_count();
    const double dt = grid.dt();
    const double sqrt_dt = std::sqrt(dt);

    SimulatedProcess proc{CadlagPath(grid, 1), CadlagPath(grid, 1), CadlagPath(grid, 1),
                          {},       CompensatorInfo{},  seed,
                          t0,       spec.deterministic_coefficients()};

    Rng rng(seed);

    // Jump times and marks first, then the Euler sweep; one fixed draw
    // order keeps paths reproducible.
    const std::vector<std::size_t> jump_nodes = draw_jump_nodes(grid, t0, spec.lambda, rng);
    proc.jump_marks.reserve(jump_nodes.size());
    for (std::size_t node : jump_nodes) {
        const double mark = spec.law->sample(rng);
        const double applied = spec.gamma(grid.node(node)) * mark;
        proc.jump_marks.push_back(JumpMark{node, mark, applied});
    }

    const CadlagPath drift = spec.drift.build(grid);

    // A_used soaks up the x0 prefix before t0 and the drift after it, so
    // the ledger identity X = X_0 + Mc + jumps + A_used holds everywhere.
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t kp = std::min(k, t0);
        double v = x0.value(kp) - x0.value(0);
        if (k > t0) v += drift.value(k) - drift.value(t0);
        proc.a_used.set_value(k, v);
    }
    for (std::uint32_t node : x0.jump_nodes()) {
        if (node > t0) break;
        const double j = x0.jump(node);
        proc.a_used.add_to_jump(node, std::span<const double>(&j, 1));
    }
    for (std::uint32_t node : drift.jump_nodes()) {
        if (node <= t0) continue;
        const double j = drift.jump(node);
        proc.a_used.add_to_jump(node, std::span<const double>(&j, 1));
    }

    // Euler sweep for the continuous martingale part; sigma may feed back
    // on the running value (left node, so the integrand stays adapted).
    // The prefix up to t0 is copied verbatim from x0.
    std::size_t mark_idx = 0;
    double jumps_so_far = 0.0;
    double mc = 0.0;
    double cur = x0.value(0);
    for (std::size_t k = 0; k < m; ++k) {
        if (k > t0) {
            const double t_prev = grid.node(k - 1);
            const double sig = spec.sigma(t_prev) + spec.sigma_feedback * std::tanh(cur);
            mc += sig * sqrt_dt * rng.next_normal();
        }
        proc.mc.set_value(k, mc);
        while (mark_idx < proc.jump_marks.size() && proc.jump_marks[mark_idx].node == k) {
            jumps_so_far += proc.jump_marks[mark_idx].applied;
            ++mark_idx;
        }
        if (k <= t0) {
            cur = x0.value(std::min(k, t0));
        } else {
            cur = x0.value(t0) + mc + jumps_so_far + (drift.value(k) - drift.value(t0));
        }
        proc.x.set_value(k, cur);
    }

    // Jump registry of X: x0 prefix jumps, drift atoms, Poisson marks.
    for (std::uint32_t node : proc.a_used.jump_nodes()) {
        const double j = proc.a_used.jump(node);
        proc.x.add_to_jump(node, std::span<const double>(&j, 1));
    }
    for (const auto& mark : proc.jump_marks) {
        proc.x.add_to_jump(mark.node, std::span<const double>(&mark.applied, 1));
    }

    proc.compensator.lambda = spec.lambda;
    proc.compensator.law = spec.law;
    proc.compensator.gamma_at_node.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        proc.compensator.gamma_at_node[k] = spec.gamma(grid.node(k));
    }
    return proc;
}

std::vector<SimulatedProcess> ensemble(const JumpDiffusionSpec& spec, const TimeGrid& grid,
                                       std::size_t t0, const CadlagPath& x0,
                                       std::size_t count, std::uint64_t seed,
                                       unsigned threads, std::size_t first_index) {
    if (count < 1) throw invalid_input("ensemble: count must be >= 1");
    std::vector<SimulatedProcess> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(SimulatedProcess{CadlagPath(grid, 1), CadlagPath(grid, 1),
                                       CadlagPath(grid, 1), {}, CompensatorInfo{}, 0, 0, true});
    }
    parallel_for(count, threads, [&](std::size_t i) {
        out[i] = simulate(spec, grid, t0, x0, derive_seed(seed, first_index + i));
    });
    return out;
}

RefinedPair simulate_refined_pair(const JumpDiffusionSpec& spec, const TimeGrid& coarse_grid,
                                  std::size_t factor, std::uint64_t seed) {
    if (factor < 2) throw invalid_input("simulate_refined_pair: factor must be >= 2");
    const std::size_t mc_nodes = coarse_grid.node_count();
    TimeGrid fine_grid(coarse_grid.horizon(), (mc_nodes - 1) * factor + 1);
    CadlagPath x0_fine(fine_grid, 1);
    SimulatedProcess fine = simulate(spec, fine_grid, 0, x0_fine, seed);

    // Coarse restriction sharing the fine realization: Mc sampled at the
    // shared nodes, jumps moved to the nearest coarse node.
    SimulatedProcess coarse{CadlagPath(coarse_grid, 1), CadlagPath(coarse_grid, 1),
                            CadlagPath(coarse_grid, 1), {}, CompensatorInfo{}, seed, 0,
                            fine.deterministic_coefficients};
    for (std::size_t k = 0; k < mc_nodes; ++k) {
        coarse.mc.set_value(k, fine.mc.value(k * factor));
    }
    const CadlagPath drift_coarse = spec.drift.build(coarse_grid);
    for (std::size_t k = 0; k < mc_nodes; ++k) {
        coarse.a_used.set_value(k, drift_coarse.value(k));
    }
    for (std::uint32_t node : drift_coarse.jump_nodes()) {
        const double j = drift_coarse.jump(node);
        coarse.a_used.add_to_jump(node, std::span<const double>(&j, 1));
    }

    std::vector<char> occupied(mc_nodes, 0);
    for (const auto& mark : fine.jump_marks) {
        std::size_t node = (mark.node + factor / 2) / factor;
        if (node == 0) node = 1;
        if (node >= mc_nodes) node = mc_nodes - 1;
        if (occupied[node]) {
            bool placed = false;
            for (std::size_t off = 1; off < mc_nodes && !placed; ++off) {
                if (node + off < mc_nodes && !occupied[node + off]) {
                    node += off;
                    placed = true;
                } else if (node > off && !occupied[node - off]) {
                    node -= off;
                    placed = true;
                }
            }
            if (!placed) continue;
        }
        occupied[node] = 1;
        coarse.jump_marks.push_back(
            JumpMark{node, mark.mark,
                     spec.gamma(coarse_grid.node(node)) * mark.mark});
    }
    std::sort(coarse.jump_marks.begin(), coarse.jump_marks.end(),
              [](const JumpMark& a, const JumpMark& b) { return a.node < b.node; });

    double jumps_so_far = 0.0;
    std::size_t mark_idx = 0;
    for (std::size_t k = 0; k < mc_nodes; ++k) {
        while (mark_idx < coarse.jump_marks.size() && coarse.jump_marks[mark_idx].node <= k) {
            jumps_so_far += coarse.jump_marks[mark_idx].applied;
            ++mark_idx;
        }
        coarse.x.set_value(k, coarse.mc.value(k) + jumps_so_far + coarse.a_used.value(k));
    }
    for (std::uint32_t node : coarse.a_used.jump_nodes()) {
        const double j = coarse.a_used.jump(node);
        coarse.x.add_to_jump(node, std::span<const double>(&j, 1));
    }
    for (const auto& mark : coarse.jump_marks) {
        coarse.x.add_to_jump(mark.node, std::span<const double>(&mark.applied, 1));
    }

    coarse.compensator.lambda = spec.lambda;
    coarse.compensator.law = spec.law;
    coarse.compensator.gamma_at_node.resize(mc_nodes);
    for (std::size_t k = 0; k < mc_nodes; ++k) {
        coarse.compensator.gamma_at_node[k] = spec.gamma(coarse_grid.node(k));
    }
    return RefinedPair{std::move(coarse), std::move(fine)};
}

}  // namespace itolab
