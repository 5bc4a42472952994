#include "itolab.h"

#include <cstring>
#include <new>
#include <string>

#include "itolab/errors.hpp"
#include "itolab/experiment.hpp"
#include "itolab/path.hpp"
#include "itolab/path_io.hpp"
#include "itolab/version.hpp"

struct itolab_grid {
    itolab::TimeGrid grid;
};

struct itolab_path {
    itolab::CadlagPath path;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return ITOLAB_OK;
    } catch (const itolab::invalid_input& e) {
        set_error(e.what());
        return ITOLAB_ERR_INVALID;
    } catch (const itolab::numeric_failure& e) {
        set_error(e.what());
        return ITOLAB_ERR_NUMERIC;
    } catch (const itolab::budget_exceeded& e) {
        set_error(e.what());
        return ITOLAB_ERR_BUDGET;
    } catch (const itolab::io_failure& e) {
        set_error(e.what());
        return ITOLAB_ERR_IO;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return ITOLAB_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return ITOLAB_ERR_INTERNAL;
    }
}

int require(bool cond, const char* message) {
    if (!cond) {
        set_error(message);
        return ITOLAB_ERR_INVALID;
    }
    return ITOLAB_OK;
}

}  // namespace

extern "C" {

const char* itolab_version(void) { return ITOLAB_VERSION_STRING; }

const char* itolab_last_error(void) { return g_last_error.c_str(); }

int itolab_grid_create(double horizon, size_t node_count, itolab_grid** out) {
    if (int rc = require(out != nullptr, "grid_create: null output pointer")) return rc;
    return guarded([&] { *out = new itolab_grid{itolab::TimeGrid(horizon, node_count)}; });
}

void itolab_grid_destroy(itolab_grid* grid) { delete grid; }

size_t itolab_grid_node_count(const itolab_grid* grid) {
    return grid ? grid->grid.node_count() : 0;
}

double itolab_grid_dt(const itolab_grid* grid) { return grid ? grid->grid.dt() : 0.0; }

int itolab_grid_snap(const itolab_grid* grid, double t, size_t* node_out) {
    if (int rc = require(grid && node_out, "grid_snap: null argument")) return rc;
    return guarded([&] { *node_out = grid->grid.snap(t); });
}

int itolab_path_create(const itolab_grid* grid, size_t dim, const double* values,
                       itolab_path** out) {
    if (int rc = require(grid && out, "path_create: null argument")) return rc;
    return guarded([&] {
        itolab::CadlagPath path(grid->grid, dim);
        if (values) {
            for (size_t k = 0; k < path.nodes(); ++k) {
                for (size_t c = 0; c < dim; ++c) path.set_value(k, values[k * dim + c], c);
            }
        }
        path.validate();
        *out = new itolab_path{std::move(path)};
    });
}

int itolab_path_set_jump(itolab_path* path, size_t node, const double* jump) {
    if (int rc = require(path && jump, "path_set_jump: null argument")) return rc;
    return guarded([&] {
        path->path.set_jump(node, std::span<const double>(jump, path->path.dim()));
        path->path.validate();
    });
}

void itolab_path_destroy(itolab_path* path) { delete path; }

size_t itolab_path_dim(const itolab_path* path) { return path ? path->path.dim() : 0; }

size_t itolab_path_nodes(const itolab_path* path) { return path ? path->path.nodes() : 0; }

int itolab_path_values(const itolab_path* path, double* buffer, size_t buffer_len) {
    if (int rc = require(path && buffer, "path_values: null argument")) return rc;
    const auto values = path->path.values();
    if (int rc = require(buffer_len >= values.size(), "path_values: buffer too small")) {
        return rc;
    }
    std::memcpy(buffer, values.data(), values.size() * sizeof(double));
    return ITOLAB_OK;
}

int itolab_path_jumps(const itolab_path* path, double* buffer, size_t buffer_len) {
    if (int rc = require(path && buffer, "path_jumps: null argument")) return rc;
    const auto jumps = path->path.jumps();
    if (int rc = require(buffer_len >= jumps.size(), "path_jumps: buffer too small")) {
        return rc;
    }
    std::memcpy(buffer, jumps.data(), jumps.size() * sizeof(double));
    return ITOLAB_OK;
}

int itolab_path_stop(const itolab_path* path, size_t node, itolab_path** out) {
    if (int rc = require(path && out, "path_stop: null argument")) return rc;
    return guarded([&] { *out = new itolab_path{itolab::stop(path->path, node)}; });
}

int itolab_path_predictable_stop(const itolab_path* path, size_t node, itolab_path** out) {
    if (int rc = require(path && out, "path_predictable_stop: null argument")) return rc;
    return guarded([&] { *out = new itolab_path{itolab::predictable_stop(path->path, node)}; });
}

int itolab_path_bump(const itolab_path* path, size_t node, const double* shift,
                     itolab_path** out) {
    if (int rc = require(path && shift && out, "path_bump: null argument")) return rc;
    return guarded([&] {
        *out = new itolab_path{
            itolab::bump(path->path, node, std::span<const double>(shift, path->path.dim()))};
    });
}

int itolab_path_replace(const itolab_path* path, size_t node, const double* value,
                        itolab_path** out) {
    if (int rc = require(path && value && out, "path_replace: null argument")) return rc;
    return guarded([&] {
        *out = new itolab_path{itolab::replace_from(
            path->path, node, std::span<const double>(value, path->path.dim()))};
    });
}

int itolab_path_dtheta(const itolab_path* a, size_t node_a, const itolab_path* b,
                       size_t node_b, double* out) {
    if (int rc = require(a && b && out, "path_dtheta: null argument")) return rc;
    return guarded([&] { *out = itolab::dtheta(node_a, a->path, node_b, b->path); });
}

int itolab_path_sup_norm(const itolab_path* path, double* out) {
    if (int rc = require(path && out, "path_sup_norm: null argument")) return rc;
    return guarded([&] { *out = itolab::sup_norm(path->path); });
}

int itolab_path_write_csv(const itolab_path* path, const char* filename) {
    if (int rc = require(path && filename, "path_write_csv: null argument")) return rc;
    return guarded([&] { itolab::write_path_csv(path->path, std::string(filename)); });
}

int itolab_path_read_csv(const char* filename, itolab_path** out) {
    if (int rc = require(filename && out, "path_read_csv: null argument")) return rc;
    return guarded(
        [&] { *out = new itolab_path{itolab::read_path_csv(std::string(filename))}; });
}

int itolab_run_experiment(const char* config_file, const char* out_dir,
                          long long seed_override, int threads) {
    if (int rc = require(config_file != nullptr, "run_experiment: null config path")) return rc;
    return guarded([&] {
        itolab::ExperimentConfig config = itolab::parse_config_file(config_file);
        if (out_dir && *out_dir) config.out_dir = out_dir;
        if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
        if (threads > 0) config.threads = static_cast<unsigned>(threads);
        itolab::run_experiment(config);
    });
}

int itolab_validate_config(const char* config_file) {
    if (int rc = require(config_file != nullptr, "validate_config: null config path")) {
        return rc;
    }
    return guarded([&] {
        itolab::ExperimentConfig config = itolab::parse_config_file(config_file);
        itolab::validate_config(config);
    });
}

int itolab_catalog(char* buffer, size_t buffer_len) {
    if (int rc = require(buffer && buffer_len > 0, "catalog: empty buffer")) return rc;
    const std::string text = itolab::catalog_text();
    const size_t n = std::min(buffer_len - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
    return ITOLAB_OK;
}

}  // extern "C"
