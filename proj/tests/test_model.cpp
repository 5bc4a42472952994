#include <doctest.h>

#include <cmath>

#include "itolab/model.hpp"
#include "itolab/path_sampling.hpp"
#include "test_support.hpp"

using namespace itolab;

TEST_SUITE_BEGIN("model");

namespace {

JumpDiffusionSpec brownian_spec(double sigma = 1.0) {
    JumpDiffusionSpec spec;
    spec.sigma = {sigma, 0.0};
    return spec;
}

JumpDiffusionSpec jumpy_spec(double lambda, JumpLaw law, double sigma = 1.0) {
    JumpDiffusionSpec spec;
    spec.sigma = {sigma, 0.0};
    spec.lambda = lambda;
    spec.law = law;
    return spec;
}

}  // namespace

TEST_CASE("degenerate dynamics reproduce the stopped initial path") {
    TimeGrid grid(1.0, 65);
    Rng rng(2);
    CadlagPath x0 = random_test_path(grid, 1, rng);
    JumpDiffusionSpec spec;  // sigma = 0, lambda = 0, drift = 0
    SimulatedProcess proc = simulate(spec, grid, 32, x0, 77);
    CHECK(proc.x.identical(stop(x0, 32)));
    CHECK(proc.decomposition_defect() < 1e-12);
}

TEST_CASE("poisson jump count matches its mean over an ensemble") {
    TimeGrid grid(1.0, 512);
    CadlagPath x0(grid, 1);
    auto spec = jumpy_spec(2.0, JumpLaw::uniform(-0.5, 0.5), 0.0);
    const std::size_t n = 10000;
    auto procs = ensemble(spec, grid, 0, x0, n, 4242, 2);
    std::vector<double> counts(n);
    for (std::size_t i = 0; i < n; ++i) counts[i] = static_cast<double>(procs[i].jump_marks.size());
    const double mean = testsup::mean(counts);
    const double se = testsup::stderr_of_mean(counts);
    CHECK(std::abs(mean - 2.0) < 3.0 * se + 1e-12);
}

TEST_CASE("brownian terminal variance equals the horizon") {
    TimeGrid grid(1.0, 256);
    CadlagPath x0(grid, 1);
    auto spec = brownian_spec();
    const std::size_t n = 10000;
    auto procs = ensemble(spec, grid, 0, x0, n, 99, 2);
    std::vector<double> sq(n);
    double mean_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_x += procs[i].x.value(grid.last());
    mean_x /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = procs[i].x.value(grid.last()) - mean_x;
        sq[i] = d * d;
    }
    const double var = testsup::mean(sq) * static_cast<double>(n) / static_cast<double>(n - 1);
    // SE of the sample variance of a Gaussian: T * sqrt(2/n).
    const double se = std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(var - 1.0) < 3.0 * se);
}

TEST_CASE("decomposition identity holds node by node") {
    TimeGrid grid(1.0, 257);
    CadlagPath x0(grid, 1);
    JumpDiffusionSpec spec = jumpy_spec(3.0, JumpLaw::gaussian_truncated(0.4, 1.2));
    spec.drift.slope = 0.35;
    spec.drift.atoms = {{0.5, -0.2}};
    spec.gamma = {1.0, -0.3};
    auto procs = ensemble(spec, grid, 0, x0, 20, 31337, 2);
    for (const auto& proc : procs) {
        CHECK(proc.decomposition_defect() < 1e-12);
        CHECK(proc.mc.value(0) == 0.0);
        CHECK_FALSE(proc.x.has_jump(0));
        for (const auto& mark : proc.jump_marks) {
            CHECK(mark.node >= 1);
            CHECK(mark.applied ==
                  doctest::Approx(spec.gamma(grid.node(mark.node)) * mark.mark));
        }
    }
}

TEST_CASE("mc increments are mean-zero within conditioning buckets") {
    TimeGrid grid(1.0, 65);
    CadlagPath x0(grid, 1);
    auto spec = brownian_spec(0.8);
    const std::size_t n = 4000;
    auto procs = ensemble(spec, grid, 0, x0, n, 555, 2);
    for (std::size_t k : {std::size_t(16), std::size_t(48)}) {
        std::vector<double> pos, neg;
        for (const auto& proc : procs) {
            const double inc = proc.mc.value(k + 1) - proc.mc.value(k);
            (proc.mc.value(k) >= 0.0 ? pos : neg).push_back(inc);
        }
        for (const auto& bucket : {pos, neg}) {
            REQUIRE(bucket.size() > 100);
            CHECK(std::abs(testsup::mean(bucket)) <
                  3.0 * testsup::stderr_of_mean(bucket) + 1e-12);
        }
    }
}

TEST_CASE("compensated jump count is mean-zero at quarter points") {
    TimeGrid grid(1.0, 512);
    CadlagPath x0(grid, 1);
    auto spec = jumpy_spec(2.0, JumpLaw::uniform(-0.5, 0.5), 0.0);
    const std::size_t n = 8000;
    auto procs = ensemble(spec, grid, 0, x0, n, 808, 2);
    for (double t : {0.25, 0.5, 1.0}) {
        const std::size_t node = grid.snap(t);
        std::vector<double> comp(n);
        for (std::size_t i = 0; i < n; ++i) {
            double count = 0.0;
            for (const auto& mark : procs[i].jump_marks) {
                if (mark.node <= node) count += 1.0;
            }
            comp[i] = count - spec.lambda * grid.node(node);
        }
        CHECK(std::abs(testsup::mean(comp)) < 3.0 * testsup::stderr_of_mean(comp) + 5e-3);
    }
}

TEST_CASE("ensembles are deterministic and splittable") {
    TimeGrid grid(1.0, 128);
    CadlagPath x0(grid, 1);
    JumpDiffusionSpec spec = jumpy_spec(2.0, JumpLaw::two_point(0.7));
    spec.drift.slope = -0.1;

    auto a = ensemble(spec, grid, 0, x0, 6, 2024, 1);
    auto b = ensemble(spec, grid, 0, x0, 6, 2024, 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x.identical(b[i].x));
        CHECK(a[i].mc.identical(b[i].mc));
    }

    // count = 1 reproduces simulate() with the derived seed.
    SimulatedProcess single = simulate(spec, grid, 0, x0, derive_seed(2024, 0));
    CHECK(a[0].x.identical(single.x));

    // Disjoint ranges merged equal the full range.
    auto lo = ensemble(spec, grid, 0, x0, 3, 2024, 1, 0);
    auto hi = ensemble(spec, grid, 0, x0, 3, 2024, 1, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(lo[i].x.identical(a[i].x));
        CHECK(hi[i].x.identical(a[i + 3].x));
    }
}

TEST_CASE("deterministic orthogonal extra is bit-identical across paths") {
    TimeGrid grid(1.0, 128);
    CadlagPath x0(grid, 1);
    JumpDiffusionSpec spec = brownian_spec();
    spec.drift.weierstrass_amplitude = 0.2;
    auto procs = ensemble(spec, grid, 0, x0, 4, 7, 2);
    for (std::size_t i = 1; i < procs.size(); ++i) {
        CHECK(procs[i].a_used.identical(procs[0].a_used));
    }
    CHECK(sup_norm(procs[0].a_used) > 0.0);
}

TEST_CASE("coarse grid refusal for dense jumps") {
    TimeGrid grid(1.0, 6);  // dt = 0.2
    CadlagPath x0(grid, 1);
    auto spec = jumpy_spec(1.0, JumpLaw::two_point(1.0));
    CHECK_THROWS_AS(simulate(spec, grid, 0, x0, 1), invalid_input);
}

TEST_CASE("refined pair shares the realization across grids") {
    TimeGrid coarse(1.0, 257);
    JumpDiffusionSpec spec = jumpy_spec(2.0, JumpLaw::uniform(-0.8, 0.8));
    auto pair = simulate_refined_pair(spec, coarse, 4, 99);
    CHECK(pair.fine.x.grid().node_count() == 4 * 256 + 1);
    for (std::size_t k = 0; k < coarse.node_count(); ++k) {
        CHECK(pair.coarse.mc.value(k) == pair.fine.mc.value(4 * k));
    }
    CHECK(pair.coarse.jump_marks.size() == pair.fine.jump_marks.size());
    for (std::size_t j = 0; j < pair.coarse.jump_marks.size(); ++j) {
        CHECK(pair.coarse.jump_marks[j].mark == pair.fine.jump_marks[j].mark);
        const double tc = coarse.node(pair.coarse.jump_marks[j].node);
        const double tf = pair.fine.x.grid().node(pair.fine.jump_marks[j].node);
        CHECK(std::abs(tc - tf) <= coarse.dt());
    }
    CHECK(pair.coarse.decomposition_defect() < 1e-12);
}

TEST_SUITE_END();
