#include <doctest.h>

#include <cmath>

#include "itolab/functional.hpp"
#include "itolab/path_sampling.hpp"
#include "itolab/probes.hpp"
#include "test_support.hpp"

using namespace itolab;

TEST_SUITE_BEGIN("functional");

namespace {

/// Reads the terminal value regardless of t: deliberately anticipative.
class PeekAtHorizon : public PathFunctional {
public:
    PeekAtHorizon() : PathFunctional("peek_at_horizon") {}
    double eval(std::size_t, const CadlagPath& x) const override {
        return x.value(x.nodes() - 1);
    }
};

}  // namespace

TEST_CASE("markovian square: vertical derivative matches calculus") {
    TimeGrid grid(1.0, 33);
    auto f = make_markovian("square");
    CadlagPath x = CadlagPath::constant(grid, 3.0);

    // Analytic route.
    auto grad = vertical_derivative(*f, 16, x, 1e-5);
    CHECK(grad[0] == doctest::Approx(6.0).epsilon(1e-12));

    // Finite-difference route must agree within 1e-8 at h = 1e-5.
    MarkovianFunctional fd_only("square_no_grad", scalar_fn("square"));
    auto fd = vertical_derivative(fd_only, 16, x, 1e-5);
    CHECK(std::abs(fd[0] - 6.0) < 1e-8);
}

TEST_CASE("constant functional has zero gradient") {
    TimeGrid grid(1.0, 9);
    auto f = make_constant(4.2);
    CadlagPath x(grid, 1);
    auto grad = vertical_derivative(*f, 3, x, 1e-5);
    CHECK(grad[0] == 0.0);
}

TEST_CASE("linear-g integral functional: gradient is exactly mu([t,T])") {
    TimeGrid grid(1.0, 17);
    auto f = make_integral("identity", MuMeasure::lebesgue(grid));
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        CadlagPath x = random_test_path(grid, 1, rng);
        for (std::size_t t : {std::size_t(0), std::size_t(4), std::size_t(16)}) {
            auto grad = vertical_derivative(*f, t, x, 1e-5);
            CHECK(grad[0] == doctest::Approx(1.0 - grid.node(t)).epsilon(1e-14));
        }
    }
    // t = 0.25 on a grid where it is a node: mu([0.25, 1]) = 0.75.
    auto grad = vertical_derivative(*f, grid.index_of(0.25), CadlagPath(grid, 1), 1e-5);
    CHECK(grad[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("finite differences exhibit second-order convergence for C3 f") {
    TimeGrid grid(1.0, 17);
    MarkovianFunctional f("cubic_no_grad", scalar_fn("cubic"));
    auto fa = make_markovian("cubic");
    CadlagPath x = CadlagPath::constant(grid, 0.8);
    const std::size_t t = 8;
    const double exact = vertical_derivative(*fa, t, x, 1.0)[0];

    // Three h values; fitted slope of log(error) vs log(h) near 2.
    std::vector<double> hs = {1e-2, 1e-3, 1e-4};
    std::vector<double> errs;
    for (double h : hs) {
        errs.push_back(std::abs(vertical_derivative(f, t, x, h)[0] - exact));
    }
    const double slope = std::log(errs[0] / errs[2]) / std::log(hs[0] / hs[2]);
    CHECK(slope > 1.7);
    CHECK(slope < 2.3);
}

TEST_CASE("running sup: central difference at a strict interior max lies in [-1,1]") {
    TimeGrid grid(1.0, 17);
    CadlagPath x(grid, 1);
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        // Peak of 2 at node 8, decaying to the sides; value at t below peak.
        x.set_value(k, 2.0 - 0.1 * std::abs(8.0 - static_cast<double>(k)));
    }
    auto f = make_running_sup();
    // Smoothness diagnostic, not an identity: the one-sided derivatives
    // differ, the centered value just has to stay in [-1, 1].
    auto fd = vertical_derivative(*f, 12, x, 1e-6);
    CHECK(fd[0] >= -1.0);
    CHECK(fd[0] <= 1.0);
}

TEST_CASE("catalog functionals are exactly non-anticipative") {
    TimeGrid grid(1.0, 33);
    std::vector<std::unique_ptr<PathFunctional>> zoo;
    zoo.push_back(make_markovian("square"));
    zoo.push_back(make_markovian("tanh"));
    zoo.push_back(make_integral("tanh", MuMeasure::lebesgue(grid)));
    zoo.push_back(make_integral("identity",
                                MuMeasure::with_constant_density(grid, 0.5, {{16, 0.25}})));
    zoo.push_back(make_running_sup());
    zoo.push_back(make_constant(-1.0));
    for (const auto& f : zoo) {
        auto report = check_non_anticipative(*f, grid, 50, 99);
        REQUIRE(report.max_discrepancy.has_value());
        CHECK(*report.max_discrepancy == 0.0);
    }
}

TEST_CASE("anticipative functional is detected") {
    TimeGrid grid(1.0, 33);
    PeekAtHorizon f;
    auto report = check_non_anticipative(f, grid, 50, 99);
    REQUIRE(report.max_discrepancy.has_value());
    CHECK(*report.max_discrepancy > 0.0);
}

TEST_CASE("empty non-anticipativity check is flagged as undefined") {
    TimeGrid grid(1.0, 9);
    auto f = make_constant(0.0);
    auto report = check_non_anticipative(*f, grid, 0, 1);
    CHECK(report.samples == 0);
    CHECK_FALSE(report.max_discrepancy.has_value());
}

TEST_CASE("modulus probe: constant functional gives an all-zero table") {
    TimeGrid grid(1.0, 17);
    auto f = make_constant(3.0);
    auto probe = modulus_probe(*f, grid, 2.0, 100, 7);
    for (const auto& bucket : probe.table) CHECK(bucket.max_abs_df == 0.0);
}

TEST_CASE("modulus probe: 1-Lipschitz markovian stays under the bucket edge") {
    TimeGrid grid(1.0, 17);
    MarkovianFunctional f("ident", scalar_fn("identity"));
    auto probe = modulus_probe(f, grid, 2.0, 400, 11);
    for (const auto& bucket : probe.table) {
        // |f(x_t) - f(x'_t')| <= d_Theta for t = t'; time offsets only help.
        CHECK(bucket.max_abs_df <= bucket.upper_edge + 1e-12);
    }
    CHECK(probe.table.front().max_abs_df <= probe.table.back().max_abs_df);
}

TEST_CASE("modulus probe: integral functional bounded by twice the edge") {
    TimeGrid grid(1.0, 17);
    auto f = make_integral("tanh", MuMeasure::lebesgue(grid));  // |mu| = 1, g 1-Lipschitz
    auto probe = modulus_probe(*f, grid, 1.5, 400, 13);
    for (const auto& bucket : probe.table) {
        if (bucket.count == 0) continue;
        CHECK(bucket.max_abs_df <= 2.0 * bucket.upper_edge + 1e-9);
    }
}

TEST_CASE("integral functional matches a direct quadrature oracle") {
    // F(t, x) = g(int x_{t/\} dmu); oracle: integrate the stopped path.
    TimeGrid grid(1.0, 33);
    MuMeasure mu = MuMeasure::with_constant_density(grid, 2.0, {{8, -0.5}, {24, 1.0}});
    auto f = make_integral("tanh", mu);
    Rng rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        CadlagPath x = random_test_path(grid, 1, rng);
        const std::size_t t = rng.next_u64() % grid.node_count();
        const double direct = f->eval(t, x);
        const double oracle = std::tanh(mu.integrate(stop(x, t)));
        CHECK(direct == doctest::Approx(oracle).epsilon(1e-14));
    }
}

TEST_CASE("eval_along agrees with per-node eval") {
    TimeGrid grid(1.0, 33);
    auto f = make_integral("square", MuMeasure::with_constant_density(grid, 1.0, {{5, 0.5}}));
    Rng rng(17);
    CadlagPath x = random_test_path(grid, 1, rng);
    auto along = f->eval_along(x);
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        CHECK(along[k] == doctest::Approx(f->eval(k, x)).epsilon(1e-13));
    }
}

TEST_CASE("eval_prebump matches the materialized bumped prefix") {
    TimeGrid grid(1.0, 17);
    Rng rng(23);
    std::vector<std::unique_ptr<PathFunctional>> zoo;
    zoo.push_back(make_markovian("square"));
    zoo.push_back(make_integral("tanh", MuMeasure::with_constant_density(grid, 1.0, {{9, 0.3}})));
    for (const auto& f : zoo) {
        for (int rep = 0; rep < 5; ++rep) {
            CadlagPath x = random_test_path(grid, 1, rng);
            const std::size_t t = 1 + rng.next_u64() % (grid.node_count() - 1);
            const double y = rng.next_normal();
            const double fast = f->eval_prebump(t, x, y);
            const double slow = f->eval(t, bump(predictable_stop(x, t), t, y));
            CHECK(fast == doctest::Approx(slow).epsilon(1e-13));
        }
    }
}

TEST_SUITE_END();
