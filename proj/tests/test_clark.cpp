#include <doctest.h>

#include <cmath>

#include "itolab/clark.hpp"
#include "itolab/path_sampling.hpp"
#include "test_support.hpp"

using namespace itolab;

TEST_SUITE_BEGIN("clark");

namespace {

ClarkSpec lebesgue_spec(const TimeGrid& grid, const std::string& payoff, double sigma,
                        double lambda = 0.0) {
    ClarkSpec spec(MuMeasure::lebesgue(grid));
    spec.payoff = payoff;
    spec.model.sigma = {sigma, 0.0};
    if (lambda > 0.0) {
        spec.model.lambda = lambda;
        spec.model.law = JumpLaw::uniform(-0.5, 0.5);
    }
    spec.inner_samples = 500;
    spec.outer_samples = 300;
    return spec;
}

}  // namespace

TEST_CASE("linear payoff value estimate matches the closed form") {
    TimeGrid grid(1.0, 257);
    ClarkSpec spec = lebesgue_spec(grid, "identity", 1.0);
    spec.inner_samples = 2000;

    // x == 0, t = 0.5: closed form int_0^t x ds + x_t (T - t) = 0.
    CadlagPath zero(grid, 1);
    ClarkValue v = v_estimate(spec, grid.index_of(0.5), zero, 42);
    CHECK(v.stderr_of_mean > 0.0);
    CHECK(std::abs(v.value) < 3.0 * v.stderr_of_mean + 1e-12);

    // Constant path 2: closed form 2*0.5 + 2*0.5 = 2.
    CadlagPath two = CadlagPath::constant(grid, 2.0);
    ClarkValue v2 = v_estimate(spec, grid.index_of(0.5), two, 43);
    CHECK(std::abs(v2.value - 2.0) < 3.0 * v2.stderr_of_mean + 1e-12);
}

TEST_CASE("value at the horizon is deterministic") {
    TimeGrid grid(1.0, 129);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 1.0, 2.0);
    Rng rng(7);
    CadlagPath x = random_test_path(grid, 1, rng);
    ClarkValue v = v_estimate(spec, grid.last(), x, 99);
    CHECK(v.stderr_of_mean == 0.0);
    CHECK(v.value == doctest::Approx(std::tanh(spec.mu.integrate(x))).epsilon(1e-12));
}

TEST_CASE("quadratic payoff at the origin recovers the brownian integral variance") {
    TimeGrid grid(1.0, 513);
    ClarkSpec spec = lebesgue_spec(grid, "square", 1.0);
    spec.inner_samples = 4000;
    CadlagPath zero(grid, 1);
    ClarkValue v = v_estimate(spec, 0, zero, 11);
    // Var(int_0^1 W ds) = 1/3.
    CHECK(std::abs(v.value - 1.0 / 3.0) < 3.0 * v.stderr_of_mean + 2e-3);
}

TEST_CASE("linear payoff gradient is exactly the measure suffix, zero variance") {
    TimeGrid grid(1.0, 257);
    ClarkSpec spec = lebesgue_spec(grid, "identity", 1.0, 2.0);
    Rng rng(3);
    CadlagPath x = random_test_path(grid, 1, rng);
    double previous = 2.0;
    for (double t : {0.0, 0.25, 0.75}) {
        const std::size_t node = grid.index_of(t);
        ClarkValue g = grad_v_estimate(spec, node, x, 5);
        CHECK(g.value == spec.mu.mass_from(node));
        CHECK(g.stderr_of_mean == 0.0);
        CHECK(g.value <= previous);  // t-monotone for mu >= 0
        previous = g.value;
    }
    // t = T with no atom at T: mu([T, T]) = 0.
    ClarkValue g = grad_v_estimate(spec, grid.last(), x, 5);
    CHECK(g.value == 0.0);
}

TEST_CASE("tanh gradient matches the bump finite difference under common random numbers") {
    TimeGrid grid(1.0, 257);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 0.8, 1.0);
    spec.inner_samples = 2000;
    Rng rng(5);
    CadlagPath x = random_test_path(grid, 1, rng);
    const double h = 1e-3;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const std::size_t node = grid.index_of(t);
        ClarkValue g = grad_v_estimate(spec, node, x, 77);
        ClarkValue up = v_estimate(spec, node, bump(x, node, h), 77);
        ClarkValue down = v_estimate(spec, node, bump(x, node, -h), 77);
        const double fd = (up.value - down.value) / (2.0 * h);
        const double combined =
            g.stderr_of_mean + (up.stderr_of_mean + down.stderr_of_mean) / (2.0 * h);
        CHECK(std::abs(fd - g.value) < 3.0 * combined + 1e-5);
    }
}

TEST_CASE("degenerate model: residual identically zero") {
    TimeGrid grid(1.0, 65);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 0.0);
    spec.inner_samples = 50;
    spec.outer_samples = 20;
    ClarkReport report = clark_representation_residual(spec, 9, 1);
    for (double r : report.residuals) CHECK(r == 0.0);
    CHECK(report.residual_se == 0.0);
}

TEST_CASE("linear payoff without jumps: residual telescopes to inner noise") {
    TimeGrid grid(1.0, 257);
    ClarkSpec spec = lebesgue_spec(grid, "identity", 1.0);
    spec.inner_samples = 200;
    spec.outer_samples = 400;
    ClarkReport report = clark_representation_residual(spec, 2024, 2);
    CHECK(report.residual_se > 0.0);
    CHECK(std::abs(report.residual_mean) < 2.0 * report.residual_se);
}

TEST_CASE("tanh payoff with jumps: residual is a statistical null") {
    TimeGrid grid(1.0, 257);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 1.0, 1.0);
    spec.inner_samples = 300;
    spec.outer_samples = 400;
    spec.compensator_subsample = 64;
    ClarkReport report = clark_representation_residual(spec, 31337, 2);
    CHECK(std::abs(report.residual_mean) < 3.0 * report.residual_se);
    // Martingale drift buckets within 3 standard errors of zero.
    std::size_t violations = 0;
    for (const auto& bucket : report.drift) {
        if (bucket.count < 2) continue;
        if (std::abs(bucket.mean) >= 3.0 * bucket.se) ++violations;
    }
    CHECK(violations == 0);
    CHECK(report.lattice.size() > 0);
}

TEST_CASE("nested budget cap refuses with a cost estimate") {
    TimeGrid grid(1.0, 1025);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 1.0);
    spec.inner_samples = 2000;
    spec.outer_samples = 2000;
    spec.nested_cap = 1000;
    CHECK_THROWS_AS(clark_representation_residual(spec, 1, 1), budget_exceeded);
    try {
        clark_representation_residual(spec, 1, 1);
    } catch (const budget_exceeded& e) {
        CHECK(std::string(e.what()).find("cap") != std::string::npos);
    }
}

TEST_CASE("feedback coefficients are refused by the closed-form routes") {
    TimeGrid grid(1.0, 65);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 1.0);
    spec.model.sigma_feedback = 0.5;
    CadlagPath zero(grid, 1);
    CHECK_THROWS_AS(grad_v_estimate(spec, 0, zero, 1), invalid_input);
    CHECK_THROWS_AS(clark_representation_residual(spec, 1, 1), invalid_input);
    // v still runs through the smoke-grade simulation fallback.
    spec.inner_samples = 20;
    ClarkValue v = v_estimate(spec, 32, zero, 4);
    CHECK(std::isfinite(v.value));
}

TEST_CASE("lipschitz chain bound: shifted path moves v by at most the shift") {
    TimeGrid grid(1.0, 257);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 1.0);  // |mu| = 1, g 1-Lipschitz
    spec.inner_samples = 1000;
    Rng rng(13);
    CadlagPath x = random_test_path(grid, 1, rng);
    CadlagPath shifted = add(x, CadlagPath::constant(grid, 0.1));
    const std::size_t t = grid.index_of(0.5);
    ClarkValue a = v_estimate(spec, t, x, 21);
    ClarkValue b = v_estimate(spec, t, shifted, 21);  // common random numbers
    CHECK(std::abs(b.value - a.value) <= 0.1 + 1e-9);
}

TEST_CASE("regularity probe: identical inputs give zero gaps, table is populated") {
    TimeGrid grid(1.0, 129);
    ClarkSpec spec = lebesgue_spec(grid, "tanh", 0.8);
    spec.inner_samples = 300;
    ClarkValue a = v_estimate(spec, 40, CadlagPath::constant(grid, 1.0), 5);
    ClarkValue b = v_estimate(spec, 40, CadlagPath::constant(grid, 1.0), 5);
    CHECK(a.value == b.value);

    RegularityTable table = regularity_probe(spec, 12, 77);
    CHECK(table.rows.size() == 12);
    CHECK(table.c_v > 0.0);
    CHECK(std::isfinite(table.c_grad));
}

TEST_CASE("gradient gap across a mu atom is dominated by the mu([t,t']) term") {
    TimeGrid grid(1.0, 129);
    const std::size_t atom_node = grid.index_of(0.5);
    ClarkSpec spec(MuMeasure::with_constant_density(grid, 1.0, {{atom_node, 0.5}}));
    spec.payoff = "identity";
    spec.model.sigma = {1.0, 0.0};
    spec.inner_samples = 200;
    CadlagPath zero(grid, 1);

    ClarkValue before = grad_v_estimate(spec, atom_node, zero, 3);
    ClarkValue after = grad_v_estimate(spec, atom_node + 1, zero, 3);
    const double dgrad = std::abs(before.value - after.value);
    const double dt_term = std::sqrt(grid.dt());
    // Without the mu term the fitted constant explodes; with it the bound
    // is order one.
    const double c_without = dgrad / dt_term;
    const double c_with = dgrad / (dt_term + 0.5);
    CHECK(dgrad > 0.5);  // the atom mass dominates
    CHECK(c_without > 5.0 * c_with);
}

TEST_SUITE_END();
