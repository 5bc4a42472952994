#include "itolab/path_sampling.hpp"

#include <cmath>
#include <vector>

namespace itolab {

CadlagPath random_test_path(const TimeGrid& grid, std::size_t dim, Rng& rng,
                            const TestPathOptions& opts) {
    CadlagPath path(grid, dim);
    const std::size_t m = grid.node_count();
    const double step = opts.diffusion * std::sqrt(grid.dt());
    std::vector<double> cur(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        cur[c] = opts.start_scale * rng.next_normal();
        path.set_value(0, cur[c], c);
    }
    // Jump nodes first so the walk below can fold them in as it goes.
    const std::uint64_t jump_count = rng.next_poisson(opts.mean_jumps);
    std::vector<std::vector<double>> jump_at(m);
    for (std::uint64_t j = 0; j < jump_count; ++j) {
        const std::size_t node =
            1 + static_cast<std::size_t>(rng.next_uniform() * static_cast<double>(m - 1));
        if (node >= m) continue;
        auto& sizes = jump_at[node];
        if (sizes.empty()) sizes.assign(dim, 0.0);
        for (std::size_t c = 0; c < dim; ++c) {
            sizes[c] += opts.jump_scale * rng.next_normal();
        }
    }
    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t c = 0; c < dim; ++c) cur[c] += step * rng.next_normal();
        if (!jump_at[k].empty()) {
            for (std::size_t c = 0; c < dim; ++c) cur[c] += jump_at[k][c];
            for (std::size_t c = 0; c < dim; ++c) path.set_value(k, cur[c], c);
            path.set_jump(k, jump_at[k]);
        } else {
            for (std::size_t c = 0; c < dim; ++c) path.set_value(k, cur[c], c);
        }
    }
    return path;
}

}  // namespace itolab
