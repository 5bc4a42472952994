#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itolab/jump_law.hpp"
#include "itolab/path.hpp"

namespace itolab {

/// Deterministic coefficient of time: affine in t. The optional feedback
/// gain makes sigma(t, x) = base(t) + gain * tanh(x), which stays bounded
/// but voids the closed-form oracles (used only for the non-martingale
/// demonstrations).
struct Coefficient {
    double c0 = 0.0;
    double c1 = 0.0;

    double operator()(double t) const { return c0 + c1 * t; }
    double bound(double horizon) const;
};

/// Deterministic bounded-variation drift path: slope plus node-aligned
/// atoms, optionally with a truncated Weierstrass-type series added (an
/// irregular but deterministic path, orthogonal by determinism).
struct DriftSpec {
    double slope = 0.0;
    std::vector<std::pair<double, double>> atoms;  // (time, size), snapped to nodes

    // OrthogonalExtraSpec: amplitude * sum_j a^j cos(b^j pi t).
    double weierstrass_amplitude = 0.0;
    double weierstrass_a = 0.5;
    double weierstrass_b = 3.0;
    std::size_t weierstrass_terms = 12;

    CadlagPath build(const TimeGrid& grid) const;
};

struct JumpDiffusionSpec {
    Coefficient sigma;                 // diffusion, deterministic in t
    double sigma_feedback = 0.0;       // optional path feedback gain
    double lambda = 0.0;               // jump intensity per unit time
    std::optional<JumpLaw> law;        // jump-size law (required if lambda > 0)
    Coefficient gamma{1.0, 0.0};       // deterministic jump scaling
    DriftSpec drift;

    bool deterministic_coefficients() const { return sigma_feedback == 0.0; }
    void validate(const TimeGrid& grid) const;
};

struct JumpMark {
    std::size_t node;
    double mark;     // draw from the law
    double applied;  // gamma(t_node) * mark, the actual jump of X
};

/// Closed-form compensator descriptor: intensity, law, and the sampled
/// jump scaling. min_abs_applied > 0 restricts the driving measure to
/// marks with |gamma x| >= min_abs_applied (used by the small-jump
/// truncation).
struct CompensatorInfo {
    double lambda = 0.0;
    std::optional<JumpLaw> law;
    std::vector<double> gamma_at_node;
    double min_abs_applied = 0.0;
};

/// A simulated path bundled with its decomposition ingredients:
/// X = X_0 + Mc + (sum of applied jumps) + A_used, node by node.
struct SimulatedProcess {
    CadlagPath x;
    CadlagPath mc;          // continuous martingale part, Mc_0 = 0
    CadlagPath a_used;      // bounded-variation part (plus the x0 prefix)
    std::vector<JumpMark> jump_marks;
    CompensatorInfo compensator;
    std::uint64_t seed = 0;
    std::size_t t0_node = 0;
    bool deterministic_coefficients = true;

    /// Max relative defect of the decomposition identity over nodes.
    double decomposition_defect() const;
    /// Sum of applied Poisson jumps with node <= k... as a path.
    CadlagPath jump_sum_path() const;
};

/// Euler simulation from (t0, x0): X_s = x0_{t0/\s} up to t0, then
/// Brownian increments with per-step variance sigma^2 dt, Poisson jump
/// times snapped to nodes (at most one per node), marks from the law
/// scaled by gamma, plus the deterministic drift.
/// Refuses grids with lambda * dt > 0.1.
SimulatedProcess simulate(const JumpDiffusionSpec& spec, const TimeGrid& grid,
                          std::size_t t0, const CadlagPath& x0, std::uint64_t seed);

/// `count` independent processes; per-path seeds derive from
/// (seed, first_index + i), so disjoint ranges merge into the full run and
/// results do not depend on scheduling.
std::vector<SimulatedProcess> ensemble(const JumpDiffusionSpec& spec, const TimeGrid& grid,
                                       std::size_t t0, const CadlagPath& x0,
                                       std::size_t count, std::uint64_t seed,
                                       unsigned threads = 1, std::size_t first_index = 0);

/// Same realization on a coarse grid and a `factor`-times finer one:
/// the fine path is simulated, the coarse one is its restriction (Brownian
/// increments aggregated, jump nodes divided by `factor`).
struct RefinedPair {
    SimulatedProcess coarse;
    SimulatedProcess fine;
};
RefinedPair simulate_refined_pair(const JumpDiffusionSpec& spec, const TimeGrid& coarse_grid,
                                  std::size_t factor, std::uint64_t seed);

}  // namespace itolab
