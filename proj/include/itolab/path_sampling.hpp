#pragma once

#include "itolab/path.hpp"
#include "itolab/rng.hpp"

namespace itolab {

/// Knobs for the generic path generator used by the functional probes.
struct TestPathOptions {
    double diffusion = 1.0;      // Gaussian random-walk scale
    double jump_scale = 0.5;     // jump size std-dev
    double mean_jumps = 2.0;     // expected number of node-aligned jumps
    double start_scale = 1.0;    // x_0 ~ N(0, start_scale^2)
};

/// A rough cadlag path: Gaussian random walk plus a Poisson number of
/// node-aligned jumps with Gaussian sizes. Used to probe functionals, not
/// to simulate a model.
CadlagPath random_test_path(const TimeGrid& grid, std::size_t dim, Rng& rng,
                            const TestPathOptions& opts = {});

}  // namespace itolab
