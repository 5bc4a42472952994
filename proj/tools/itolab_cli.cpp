// Experiment runner CLI. A thin shell over the shared-library C API:
// all numerics live behind itolab.h.
//
//   itolab run <config> [--seed N] [--threads N] [--out DIR]
//   itolab validate <config>
//   itolab list-catalog
//
// Exit codes: 0 ok, 1 invalid config, 2 numeric failure, 3 budget cap
// exceeded, 4 I/O failure.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itolab.h"

int main(int argc, char** argv) {
    CLI::App app{"itolab: functional Ito calculus simulation lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed_override = -1;
    int threads = 0;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");
    run->add_option("--out", out_dir, "override the output directory");

    CLI::App* validate = app.add_subcommand("validate", "validate a config without running");
    validate->add_option("config", config_path, "experiment config file")->required();

    app.add_subcommand("list-catalog", "list experiment kinds, functionals, and jump laws");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        const int rc = itolab_run_experiment(config_path.c_str(),
                                             out_dir.empty() ? nullptr : out_dir.c_str(),
                                             seed_override, threads);
        if (rc != ITOLAB_OK) {
            std::fprintf(stderr, "error: %s\n", itolab_last_error());
        }
        return rc;
    }
    if (validate->parsed()) {
        const int rc = itolab_validate_config(config_path.c_str());
        if (rc != ITOLAB_OK) {
            std::fprintf(stderr, "error: %s\n", itolab_last_error());
        } else {
            std::printf("ok\n");
        }
        return rc;
    }
    // list-catalog
    char buffer[4096];
    if (itolab_catalog(buffer, sizeof(buffer)) != ITOLAB_OK) {
        std::fprintf(stderr, "error: %s\n", itolab_last_error());
        return ITOLAB_ERR_INTERNAL;
    }
    std::printf("%s", buffer);
    return 0;
}
