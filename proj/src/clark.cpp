#include "itolab/clark.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/errors.hpp"
#include "itolab/parallel.hpp"
#include "itolab/path_sampling.hpp"
#include "itolab/quadrature.hpp"

namespace itolab {

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    bool all_equal = true;
    for (double x : v) {
        if (x != v.front()) {
            all_equal = false;
            break;
        }
    }
    if (all_equal) return 0.0;  // genuinely deterministic estimate
    const double m = mean_of(v);
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= static_cast<double>(v.size() - 1);
    return std::sqrt(s2 / static_cast<double>(v.size()));
}

/// Precomputed discrete structure of I(x) = int x dmu on the grid:
/// I(X) = c_k + sum_{l >= k} dMc-and-drift increments * mtilde_l
///            + sum_{marks p > k} applied_p * mass[p],
/// where c_k = I(stop(X, k)). Everything the conditional law of I(X)
/// given the path up to node k needs is a suffix array.
class ClarkEngine {
public:
    ClarkEngine(const ClarkSpec& spec)
        : spec_(spec),
          grid_(spec.mu.grid()),
          g_(scalar_fn(spec.payoff)),
          gp_(scalar_fn_derivative(spec.payoff)),
          tanh_payoff_(spec.payoff == "tanh") {
        spec_.model.validate(grid_);
        const std::size_t m = grid_.node_count();
        const double dt = grid_.dt();

        mass_.resize(m);
        for (std::size_t k = 0; k < m; ++k) mass_[k] = spec_.mu.mass_from(k);
        mtilde_.assign(m, 0.0);
        for (std::size_t l = 0; l + 1 < m; ++l) {
            mtilde_[l] = mass_[l + 1] + 0.5 * dt * spec_.mu.density_at(l + 1);
        }

        gamma_at_.resize(m);
        sigma_at_.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            gamma_at_[k] = spec_.model.gamma(grid_.node(k));
            sigma_at_[k] = spec_.model.sigma(grid_.node(k));
        }

        // Gaussian suffix variance: sum_{l >= k} sigma_l^2 dt mtilde_l^2.
        gauss_var_.assign(m, 0.0);
        for (std::size_t k = m - 1; k-- > 0;) {
            gauss_var_[k] =
                gauss_var_[k + 1] + sigma_at_[k] * sigma_at_[k] * dt * mtilde_[k] * mtilde_[k];
        }

        // Deterministic drift contribution to the conditional tail.
        const CadlagPath a = spec_.model.drift.build(grid_);
        det_tail_.assign(m, 0.0);
        for (std::size_t k = m - 1; k-- > 0;) {
            const double da_cont =
                (a.value(k + 1) - a.jump(k + 1)) - a.value(k);
            double inc = da_cont * mtilde_[k];
            if (a.has_jump(k + 1)) inc += a.jump(k + 1) * mass_[k + 1];
            det_tail_[k] = det_tail_[k + 1] + inc;
        }
    }

    const TimeGrid& grid() const { return grid_; }
    double payoff(double u) const { return g_(u); }
    double payoff_prime(double u) const { return gp_(u); }
    /// g and g' in one evaluation (tanh dominates the inner loops).
    void payoff_pair(double u, double& g, double& gp) const {
        if (tanh_payoff_) {
            const double th = std::tanh(u);
            g = th;
            gp = 1.0 - th * th;
        } else {
            g = g_(u);
            gp = gp_(u);
        }
    }
    double mass(std::size_t k) const { return mass_[k]; }

    /// c_k = I(stop(x, k)) for an arbitrary prefix path.
    double stopped_integral(std::size_t t, const CadlagPath& x) const {
        const double dt = grid_.dt();
        double prefix = 0.0;
        for (std::size_t k = 0; k < t; ++k) {
            prefix += 0.5 * dt *
                      (spec_.mu.density_at(k) * x.value(k) +
                       spec_.mu.density_at(k + 1) * x.left_limit(k + 1));
        }
        for (const auto& [node, m] : spec_.mu.atoms()) {
            if (node < t) prefix += m * x.value(node);
        }
        return prefix + x.value(t) * mass_[t];
    }

    /// One draw of the random tail of I(X) beyond node k (Gaussian part
    /// plus compound-Poisson part; the deterministic part is added by the
    /// caller via det_tail).
    double sample_tail(std::size_t k, Rng& rng) const {
        double z = std::sqrt(gauss_var_[k]) * rng.next_normal();
        if (spec_.model.lambda > 0.0) {
            // Clock starts half a step past t_k: events snapping to node k
            // itself are already part of the conditioning. Mirrors the
            // outer simulation, which accepts events up to the horizon.
            double t = grid_.node(k) + 0.5 * grid_.dt();
            for (;;) {
                t += rng.next_exponential(spec_.model.lambda);
                if (t > grid_.horizon()) break;
                std::size_t node = grid_.snap(t);
                if (node <= k) node = k + 1;
                if (node >= grid_.node_count()) break;
                z += gamma_at_[node] * spec_.model.law->sample(rng) * mass_[node];
            }
        }
        return z;
    }

    double det_tail(std::size_t k) const { return det_tail_[k]; }

    void require_deterministic(const char* op) const {
        if (!spec_.model.deterministic_coefficients()) {
            throw invalid_input(std::string(op) +
                                ": requires deterministic model coefficients");
        }
    }

    const ClarkSpec& spec() const { return spec_; }

private:
    ClarkSpec spec_;
    TimeGrid grid_;
    ScalarFn g_;
    ScalarFn gp_;
    bool tanh_payoff_ = false;
    std::vector<double> mass_;
    std::vector<double> mtilde_;
    std::vector<double> gamma_at_;
    std::vector<double> sigma_at_;
    std::vector<double> gauss_var_;
    std::vector<double> det_tail_;
};

}  // namespace

ClarkValue v_estimate(const ClarkSpec& spec, std::size_t t, const CadlagPath& x,
                      std::uint64_t seed) {
    ClarkEngine engine(spec);
    if (x.grid() != engine.grid()) throw invalid_input("v_estimate: grid mismatch");
    if (t >= x.nodes()) throw invalid_input("v_estimate: node outside grid");

    if (!spec.model.deterministic_coefficients()) {
        // Smoke-grade fallback: full inner simulations.
        std::vector<double> samples(spec.inner_samples);
        for (std::size_t i = 0; i < spec.inner_samples; ++i) {
            SimulatedProcess inner =
                simulate(spec.model, engine.grid(), t, x, derive_seed(seed, i));
            samples[i] = engine.payoff(spec.mu.integrate(inner.x));
        }
        ClarkValue out{mean_of(samples), se_of(samples)};
        if (!std::isfinite(out.value)) throw numeric_failure("v_estimate: non-finite payoff");
        return out;
    }

    const double u = engine.stopped_integral(t, x) + engine.det_tail(t);
    Rng rng(derive_seed(seed, t));
    std::vector<double> samples(spec.inner_samples);
    for (std::size_t i = 0; i < spec.inner_samples; ++i) {
        samples[i] = engine.payoff(u + engine.sample_tail(t, rng));
    }
    ClarkValue out{mean_of(samples), se_of(samples)};
    if (!std::isfinite(out.value)) throw numeric_failure("v_estimate: non-finite payoff");
    return out;
}

ClarkValue grad_v_estimate(const ClarkSpec& spec, std::size_t t, const CadlagPath& x,
                           std::uint64_t seed) {
    ClarkEngine engine(spec);
    engine.require_deterministic("grad_v_estimate");
    if (x.grid() != engine.grid()) throw invalid_input("grad_v_estimate: grid mismatch");
    if (t >= x.nodes()) throw invalid_input("grad_v_estimate: node outside grid");

    const double u = engine.stopped_integral(t, x) + engine.det_tail(t);
    const double mass = engine.mass(t);
    Rng rng(derive_seed(seed, t));  // same stream as v_estimate: CRN
    std::vector<double> samples(spec.inner_samples);
    for (std::size_t i = 0; i < spec.inner_samples; ++i) {
        samples[i] = engine.payoff_prime(u + engine.sample_tail(t, rng)) * mass;
    }
    ClarkValue out{mean_of(samples), se_of(samples)};
    if (!std::isfinite(out.value)) {
        throw numeric_failure("grad_v_estimate: non-finite payoff derivative");
    }
    return out;
}

ClarkReport clark_representation_residual(const ClarkSpec& spec, std::uint64_t seed,
                                          unsigned threads, std::size_t drift_buckets,
                                          std::size_t lattice_points,
                                          std::size_t lattice_prefixes) {
    ClarkEngine engine(spec);
    engine.require_deterministic("clark_representation_residual");
    const TimeGrid& grid = engine.grid();
    const std::size_t m = grid.node_count();
    const double dt = grid.dt();

    const auto budget = static_cast<std::uint64_t>(spec.inner_samples) *
                        static_cast<std::uint64_t>(spec.outer_samples) *
                        static_cast<std::uint64_t>(m);
    if (budget > spec.nested_cap) {
        throw budget_exceeded(
            "clark_representation_residual: inner*outer*nodes = " + std::to_string(budget) +
            " exceeds cap " + std::to_string(spec.nested_cap) +
            " (inner samples across the run; lower the budgets or raise the cap)");
    }

    const std::size_t n_outer = spec.outer_samples;
    const std::size_t n_inner = spec.inner_samples;
    const std::size_t n_sub =
        std::max<std::size_t>(1, std::min(spec.compensator_subsample, n_inner));
    const double lambda = spec.model.lambda;
    if (lambda > 0.0) gauss_legendre(64);  // warm the cache before threading

    std::vector<double> residuals(n_outer, 0.0);
    drift_buckets = std::max<std::size_t>(1, drift_buckets);
    std::vector<std::vector<double>> bucket_sum(n_outer);
    std::vector<std::vector<double>> bucket_cnt(n_outer);

    parallel_for(n_outer, threads, [&](std::size_t p) {
        const std::uint64_t path_seed = derive_seed(seed, p);
        SimulatedProcess proc =
            simulate(spec.model, grid, 0, CadlagPath(grid, 1), path_seed);

        bucket_sum[p].assign(drift_buckets, 0.0);
        bucket_cnt[p].assign(drift_buckets, 0.0);

        // c_k along the path, incremental.
        std::vector<double> c(m);
        {
            double prefix = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                c[k] = prefix + proc.x.value(k) * engine.mass(k);
                if (k + 1 < m) {
                    prefix += 0.5 * dt *
                              (spec.mu.density_at(k) * proc.x.value(k) +
                               spec.mu.density_at(k + 1) * proc.x.left_limit(k + 1));
                    for (const auto& [node, mass] : spec.mu.atoms()) {
                        if (node == k) prefix += mass * proc.x.value(k);
                    }
                }
            }
        }

        std::vector<double> tails(n_inner);
        double stoch_integral = 0.0;
        double jump_term = 0.0;
        double compensator_term = 0.0;
        double v_prev = 0.0;
        double v0 = 0.0;

        for (std::size_t k = 0; k < m; ++k) {
            Rng rng(derive_seed(path_seed, k, 0x1771));
            const double det = engine.det_tail(k);
            const double base = c[k] + det;
            double v_sum = 0.0;
            double gp_sum = 0.0;
            for (std::size_t i = 0; i < n_inner; ++i) {
                tails[i] = engine.sample_tail(k, rng);
                double g = 0.0, gp = 0.0;
                engine.payoff_pair(base + tails[i], g, gp);
                v_sum += g;
                gp_sum += gp;
            }
            const double v_here = v_sum / static_cast<double>(n_inner);
            const double grad_here =
                (gp_sum / static_cast<double>(n_inner)) * engine.mass(k);
            if (k == 0) v0 = v_here;

            if (k > 0) {
                const std::size_t b = ((k - 1) * drift_buckets) / (m - 1);
                bucket_sum[p][b] += v_here - v_prev;
                bucket_cnt[p][b] += 1.0;
            }
            v_prev = v_here;

            if (k + 1 < m) {
                stoch_integral += grad_here * (proc.mc.value(k + 1) - proc.mc.value(k));
            }

            // Jump increment of v at realized marks (CRN inner draws).
            if (proc.x.has_jump(k)) {
                const double dc = proc.x.jump(k) * engine.mass(k);
                double dv = 0.0;
                for (std::size_t i = 0; i < n_inner; ++i) {
                    dv += engine.payoff(base + tails[i]) -
                          engine.payoff(base - dc + tails[i]);
                }
                jump_term += dv / static_cast<double>(n_inner);
            }

            // Compensator integral: left rule in time, the law expectation
            // by Gauss-Legendre in the mark, inner draws sub-sampled with
            // the baseline hoisted out (the law has total mass one).
            if (lambda > 0.0 && k + 1 < m) {
                const double gs = proc.compensator.gamma_at_node[k];
                const double base_pred = base - proc.x.jump(k) * engine.mass(k);
                double v_pred = 0.0;
                for (std::size_t i = 0; i < n_sub; ++i) {
                    v_pred += engine.payoff(base_pred + tails[i]);
                }
                v_pred /= static_cast<double>(n_sub);
                const double expectation = spec.model.law->expect([&](double mark) {
                    const double dy = gs * mark * engine.mass(k);
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n_sub; ++i) {
                        acc += engine.payoff(base_pred + dy + tails[i]);
                    }
                    return acc / static_cast<double>(n_sub);
                });
                compensator_term += lambda * dt * (expectation - v_pred);
            }
        }

        const double terminal = engine.payoff(c[m - 1] + engine.det_tail(m - 1));
        residuals[p] = terminal - v0 - stoch_integral - jump_term + compensator_term;
    });

    ClarkReport report;
    report.residuals = std::move(residuals);
    report.residual_mean = mean_of(report.residuals);
    report.residual_se = se_of(report.residuals);

    report.drift.assign(drift_buckets, DriftBucket{});
    for (std::size_t b = 0; b < drift_buckets; ++b) {
        report.drift[b].t_lo = grid.horizon() * static_cast<double>(b) /
                               static_cast<double>(drift_buckets);
        report.drift[b].t_hi = grid.horizon() * static_cast<double>(b + 1) /
                               static_cast<double>(drift_buckets);
        std::vector<double> per_path;
        per_path.reserve(n_outer);
        for (std::size_t p = 0; p < n_outer; ++p) {
            if (bucket_cnt[p][b] > 0.0) {
                per_path.push_back(bucket_sum[p][b]);
            }
        }
        report.drift[b].count = per_path.size();
        report.drift[b].mean = mean_of(per_path);
        report.drift[b].se = se_of(per_path);
    }

    // Lattice of v / grad estimates on a few outer-path prefixes.
    lattice_prefixes = std::max<std::size_t>(1, std::min(lattice_prefixes, n_outer));
    for (std::size_t pid = 0; pid < lattice_prefixes; ++pid) {
        SimulatedProcess proc =
            simulate(spec.model, grid, 0, CadlagPath(grid, 1), derive_seed(seed, pid));
        for (std::size_t j = 0; j < lattice_points; ++j) {
            const std::size_t node =
                (j * (m - 1)) / std::max<std::size_t>(1, lattice_points - 1);
            ClarkLatticePoint pt;
            pt.t = grid.node(node);
            pt.prefix_id = pid;
            const std::uint64_t lattice_seed = derive_seed(seed, 0x7A77, pid);
            ClarkValue v = v_estimate(spec, node, proc.x, lattice_seed);
            ClarkValue g = grad_v_estimate(spec, node, proc.x, lattice_seed);
            pt.v = v.value;
            pt.v_se = v.stderr_of_mean;
            pt.grad_v = g.value;
            pt.grad_v_se = g.stderr_of_mean;
            report.lattice.push_back(pt);
        }
    }
    return report;
}

RegularityTable regularity_probe(const ClarkSpec& spec, std::size_t samples,
                                 std::uint64_t seed, double alpha) {
    ClarkEngine engine(spec);
    engine.require_deterministic("regularity_probe");
    const TimeGrid& grid = engine.grid();

    RegularityTable table;
    table.alpha = alpha;
    Rng rng(derive_seed(seed, 0x4E6));
    for (std::size_t s = 0; s < samples; ++s) {
        CadlagPath x = random_test_path(grid, 1, rng, {.diffusion = 0.6,
                                                       .jump_scale = 0.3,
                                                       .mean_jumps = 1.5,
                                                       .start_scale = 0.5});
        const std::size_t t = rng.next_u64() % grid.node_count();
        std::size_t t2 = t;
        CadlagPath x2 = x;
        if (s % 3 == 0) {
            // Same prefix, shifted value.
            const double shift = 0.2 * rng.next_normal();
            x2 = bump(x, t, shift);
            t2 = t;
        } else {
            Rng prng(rng.next_u64());
            CadlagPath noise = random_test_path(grid, 1, prng, {.diffusion = 0.2,
                                                                .jump_scale = 0.1,
                                                                .mean_jumps = 1.0,
                                                                .start_scale = 0.1});
            x2 = add(x, noise);
            t2 = std::min<std::size_t>(grid.node_count() - 1,
                                       t + rng.next_u64() % (grid.node_count() / 4 + 1));
        }

        const std::uint64_t vseed = derive_seed(seed, s);
        ClarkValue va = v_estimate(spec, t, x, vseed);
        ClarkValue vb = v_estimate(spec, t2, x2, vseed);
        ClarkValue ga = grad_v_estimate(spec, t, x, vseed);
        ClarkValue gb = grad_v_estimate(spec, t2, x2, vseed);

        RegularityRow row;
        row.time_gap = std::abs(grid.node(t2) - grid.node(t));
        row.prefix_gap = dtheta(t, x, t2, x2) - row.time_gap;
        const std::size_t lo = std::min(t, t2), hi = std::max(t, t2);
        row.mu_between = std::abs(spec.mu.mass_between(lo, hi));
        row.dv = std::abs(vb.value - va.value);
        row.dgrad = std::abs(gb.value - ga.value);
        table.rows.push_back(row);

        const double denom_v = row.prefix_gap + std::sqrt(row.time_gap);
        if (denom_v > 1e-9) table.c_v = std::max(table.c_v, row.dv / denom_v);
        const double denom_g = std::pow(row.prefix_gap, alpha) +
                               std::pow(row.time_gap, 0.5 * alpha) + row.mu_between;
        if (denom_g > 1e-9) table.c_grad = std::max(table.c_grad, row.dgrad / denom_g);
        const double denom_g2 =
            std::pow(row.prefix_gap, alpha) + std::pow(row.time_gap, 0.5 * alpha);
        if (denom_g2 > 1e-9) {
            table.c_grad_without_mu = std::max(table.c_grad_without_mu, row.dgrad / denom_g2);
        }
    }
    return table;
}

}  // namespace itolab
