#include "itolab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itolab/errors.hpp"
#include "itolab/path_sampling.hpp"
#include "itolab/rng.hpp"

namespace itolab {

double default_bump_step(const CadlagPath& x) {
    return 1e-5 * std::max(1.0, sup_norm(x));
}

std::vector<double> vertical_derivative(const PathFunctional& f, std::size_t t,
                                        const CadlagPath& x, double h) {
    if (!(h > 0.0)) throw invalid_input("vertical_derivative: step must be positive");
    if (t >= x.nodes()) throw invalid_input("vertical_derivative: node outside grid");
    if (f.has_analytic_gradient()) return f.analytic_gradient(t, x);

    const std::size_t d = x.dim();
    std::vector<double> grad(d);
    std::vector<double> e(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        e[c] = h;
        const double up = f.eval(t, bump(x, t, e));
        e[c] = -h;
        const double down = f.eval(t, bump(x, t, e));
        e[c] = 0.0;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw numeric_failure("vertical_derivative: non-finite evaluation of '" +
                                  f.name() + "' bumped at node " + std::to_string(t) +
                                  ", component " + std::to_string(c) + ", step " +
                                  std::to_string(h));
        }
        grad[c] = (up - down) / (2.0 * h);
    }
    return grad;
}

std::vector<double> vertical_derivative_prebump(const PathFunctional& f, std::size_t t,
                                                const CadlagPath& x, double h) {
    if (!(h > 0.0)) throw invalid_input("vertical_derivative: step must be positive");
    if (f.has_analytic_gradient()) return f.analytic_gradient_prebump(t, x);
    if (x.dim() == 1) {
        const double up = f.eval_prebump(t, x, h);
        const double down = f.eval_prebump(t, x, -h);
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw numeric_failure("vertical_derivative: non-finite evaluation of '" +
                                  f.name() + "' at predictable prefix, node " +
                                  std::to_string(t));
        }
        return {(up - down) / (2.0 * h)};
    }
    return vertical_derivative(f, t, predictable_stop(x, t), h);
}

NonAnticipativityReport check_non_anticipative(const PathFunctional& f, const TimeGrid& grid,
                                               std::size_t sample_count, std::uint64_t seed) {
    NonAnticipativityReport report;
    report.samples = sample_count;
    if (sample_count == 0) return report;

    Rng rng(derive_seed(seed, 0xA11CE));
    double worst = 0.0;
    std::size_t worst_t = 0;
    for (std::size_t i = 0; i < sample_count; ++i) {
        CadlagPath x = random_test_path(grid, 1, rng);
        const std::size_t t = rng.next_u64() % grid.node_count();
        const double direct = f.eval(t, x);
        const double stopped = f.eval(t, stop(x, t));
        const double gap = std::abs(direct - stopped);
        if (gap > worst) {
            worst = gap;
            worst_t = t;
        }
    }
    report.max_discrepancy = worst;
    report.worst_time_node = worst_t;
    return report;
}

ModulusProbe modulus_probe(const PathFunctional& f, const TimeGrid& grid, double radius,
                           std::size_t pairs, std::uint64_t seed, std::size_t buckets) {
    if (!(radius > 0.0)) throw invalid_input("modulus_probe: radius must be positive");
    if (buckets == 0) buckets = 1;

    ModulusProbe probe;
    probe.radius = radius;
    probe.pairs = pairs;

    Rng rng(derive_seed(seed, 0x440D));
    std::vector<std::pair<double, double>> samples;  // (distance, |dF|)
    samples.reserve(pairs);
    double max_dist = 0.0;

    auto clip_to_radius = [&](CadlagPath& x) {
        const double norm = sup_norm(x);
        if (norm > radius) {
            x = scale(x, radius / (norm * (1.0 + 1e-12)));
        }
    };

    for (std::size_t i = 0; i < pairs; ++i) {
        CadlagPath x = random_test_path(grid, 1, rng);
        clip_to_radius(x);
        const std::size_t t = rng.next_u64() % grid.node_count();

        CadlagPath x2(grid, 1);
        std::size_t t2 = t;
        if (i % 2 == 0) {
            // Independent pair: populates the large-distance buckets.
            x2 = random_test_path(grid, 1, rng);
            clip_to_radius(x2);
            t2 = rng.next_u64() % grid.node_count();
        } else {
            // Perturbed pair with a log-uniform amplitude: populates the
            // small-distance buckets.
            const double amp = radius * std::pow(10.0, -4.0 * rng.next_uniform());
            Rng prng(rng.next_u64());
            CadlagPath noise = random_test_path(grid, 1, prng,
                                                {.diffusion = amp,
                                                 .jump_scale = 0.2 * amp,
                                                 .mean_jumps = 1.0,
                                                 .start_scale = amp});
            x2 = add(x, noise);
            clip_to_radius(x2);
        }
        const double dist = dtheta(t, x, t2, x2);
        const double df = std::abs(f.eval(t, x) - f.eval(t2, x2));
        samples.emplace_back(dist, df);
        max_dist = std::max(max_dist, dist);
    }

    probe.table.assign(buckets, ModulusBucket{});
    const double width = (max_dist > 0.0 ? max_dist : 1.0) / static_cast<double>(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        probe.table[b].upper_edge = width * static_cast<double>(b + 1);
    }
    for (const auto& [dist, df] : samples) {
        std::size_t b = (width > 0.0) ? static_cast<std::size_t>(dist / width) : 0;
        if (b >= buckets) b = buckets - 1;
        probe.table[b].max_abs_df = std::max(probe.table[b].max_abs_df, df);
        probe.table[b].count += 1;
    }
    // Running max keeps the table monotone in distance.
    for (std::size_t b = 1; b < buckets; ++b) {
        probe.table[b].max_abs_df =
            std::max(probe.table[b].max_abs_df, probe.table[b - 1].max_abs_df);
    }
    return probe;
}

}  // namespace itolab
