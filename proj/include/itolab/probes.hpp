#pragma once

#include <optional>
#include <vector>

#include "itolab/functional.hpp"
#include "itolab/path.hpp"

namespace itolab {

/// Default central-difference step: 1e-5 * max(1, ||x||_inf). Balances
/// truncation against round-off on binary64.
double default_bump_step(const CadlagPath& x);

/// Dupire vertical derivative at (t, x): the analytic gradient when the
/// functional carries one, otherwise a central difference per component.
/// Throws numeric_failure if an evaluation is non-finite, naming the
/// offending bump.
std::vector<double> vertical_derivative(const PathFunctional& f, std::size_t t,
                                        const CadlagPath& x, double h);

/// Gradient at the predictable prefix, nabla F(t, x^-_{t/\}).
std::vector<double> vertical_derivative_prebump(const PathFunctional& f, std::size_t t,
                                                const CadlagPath& x, double h);

struct NonAnticipativityReport {
    std::size_t samples = 0;
    /// Undefined (flagged) when samples == 0.
    std::optional<double> max_discrepancy;
    std::size_t worst_time_node = 0;
};

/// Samples random paths and times and compares eval(t, x) against
/// eval(t, stop(x, t)).
NonAnticipativityReport check_non_anticipative(const PathFunctional& f, const TimeGrid& grid,
                                               std::size_t sample_count, std::uint64_t seed);

struct ModulusBucket {
    double upper_edge = 0.0;
    double max_abs_df = 0.0;
    std::size_t count = 0;
};

/// Sampled modulus-of-continuity table: max |F(t,x) - F(t',x')| per
/// d_Theta-distance bucket, over pairs with sup norms <= K. The table is
/// made non-decreasing by a running max.
struct ModulusProbe {
    double radius = 0.0;
    std::size_t pairs = 0;
    std::vector<ModulusBucket> table;
};

ModulusProbe modulus_probe(const PathFunctional& f, const TimeGrid& grid, double radius,
                           std::size_t pairs, std::uint64_t seed, std::size_t buckets = 16);

}  // namespace itolab
