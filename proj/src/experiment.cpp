#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "itolab/csv.hpp"
#include "itolab/decompose.hpp"
#include "itolab/errors.hpp"
#include "itolab/experiment.hpp"
#include "itolab/jump_calculus.hpp"
#include "itolab/parallel.hpp"
#include "itolab/path_io.hpp"
#include "itolab/probes.hpp"
#include "itolab/regularization.hpp"
#include "itolab/version.hpp"

namespace itolab {

namespace {

namespace fs = std::filesystem;

std::string out_file(const ExperimentConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

void write_manifest(const ExperimentConfig& config) {
    std::ofstream out(out_file(config, "manifest.txt"), std::ios::binary);
    if (!out) throw io_failure("cannot write manifest in '" + config.out_dir + "'");
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    out << "config_hash=" << hex << "\n"
        << "seed=" << config.seed << "\n"
        << "version=" << ITOLAB_VERSION_STRING << "\n"
        << "experiment=" << config.kind << "\n";
}

void write_diagnostic_csv(const std::string& filename, const ConvergenceDiagnostic& diag) {
    CsvWriter csv(filename, {"eps", "sup_gap", "slope_so_far", "converged"});
    for (std::size_t i = 0; i < diag.sup_gap.size(); ++i) {
        csv.row({format_g17(diag.eps[i]), format_g17(diag.sup_gap[i]),
                 format_g17(diag.slope_so_far(i + 1)),
                 (i + 1 == diag.sup_gap.size() && diag.converged) ? "1" : "0"});
    }
}

void write_ensemble_summary(const ExperimentConfig& config,
                            const std::vector<SimulatedProcess>& procs) {
    CsvWriter csv(out_file(config, "ensemble_summary.csv"),
                  {"path_index", "seed", "X_T", "jump_count", "sup_norm"});
    for (std::size_t i = 0; i < procs.size(); ++i) {
        csv.row({std::to_string(i), std::to_string(procs[i].seed),
                 format_g17(procs[i].x.value(procs[i].x.grid().last())),
                 std::to_string(procs[i].jump_marks.size()),
                 format_g17(sup_norm(procs[i].x))});
    }
}

std::vector<SimulatedProcess> run_ensemble(const ExperimentConfig& config,
                                           const TimeGrid& grid) {
    const JumpDiffusionSpec spec = config.model();
    const CadlagPath x0 = CadlagPath::constant(grid, config.x0);
    return ensemble(spec, grid, grid.snap(config.t0), x0, config.paths, config.seed,
                    config.threads);
}

ConvergenceDiagnostic median_over_paths(std::vector<ConvergenceDiagnostic> diags,
                                        double tolerance) {
    return median_diagnostic(diags, tolerance);
}

void run_regcalc_convergence(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    const EpsSchedule schedule = config.schedule(grid);
    auto procs = run_ensemble(config, grid);

    std::vector<ConvergenceDiagnostic> forward(procs.size());
    std::vector<ConvergenceDiagnostic> bracket(procs.size());
    parallel_for(procs.size(), config.threads, [&](std::size_t i) {
        const CadlagPath& w = procs[i].x;
        const CadlagPath reference = left_point_ito_sum(w, w);
        std::vector<CadlagPath> fam, qc_fam;
        for (std::size_t j = 0; j < schedule.size(); ++j) {
            fam.push_back(forward_integral_eps(w, w, schedule.step(j)));
            qc_fam.push_back(quadratic_covariation_eps(w, w, schedule.step(j)));
        }
        forward[i] = ucp_limit(fam, schedule, &reference);
        bracket[i] = ucp_limit(qc_fam, schedule);  // Cauchy diagnostic
    });
    write_diagnostic_csv(out_file(config, "forward_convergence.csv"),
                         median_over_paths(forward, 5e-2));
    write_diagnostic_csv(out_file(config, "bracket_convergence.csv"),
                         median_over_paths(bracket, 5e-2));
    write_ensemble_summary(config, procs);
}

void run_assumption_a(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    const EpsSchedule schedule = config.schedule(grid);
    const auto functional = config.functional(grid);
    auto procs = run_ensemble(config, grid);
    const CadlagPath zero(grid, 1);

    std::vector<ConvergenceDiagnostic> diags(procs.size());
    parallel_for(procs.size(), config.threads, [&](std::size_t i) {
        // Y = N = the simulated path; N must be continuous, so the
        // statistic runs against the continuous martingale part.
        const CadlagPath& y = procs[i].x;
        const CadlagPath& n = procs[i].mc;
        std::vector<CadlagPath> fam;
        for (std::size_t j = 0; j < schedule.size(); ++j) {
            fam.push_back(assumption_a_statistic(*functional, y, n, schedule.step(j)));
        }
        diags[i] = ucp_limit(fam, schedule, &zero, 1e-2);
    });
    write_diagnostic_csv(out_file(config, "assumption_a.csv"),
                         median_over_paths(diags, 1e-2));
    write_ensemble_summary(config, procs);
}

void run_truncation_study(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    const EpsSchedule schedule = config.schedule(grid);
    auto procs = run_ensemble(config, grid);

    std::vector<std::vector<TruncationStudyRow>> rows(procs.size());
    parallel_for(procs.size(), config.threads, [&](std::size_t i) {
        rows[i] = truncation_vanishing_study(procs[i], schedule);
    });

    CsvWriter csv(out_file(config, "truncation_study.csv"),
                  {"eps_n", "sup_Zn", "bracket_Zn", "retained_jumps"});
    for (std::size_t j = 0; j < schedule.size(); ++j) {
        std::vector<double> sup, bracket, retained;
        for (const auto& per_path : rows) {
            sup.push_back(per_path[j].sup_zn);
            bracket.push_back(per_path[j].bracket_zn);
            retained.push_back(static_cast<double>(per_path[j].retained_jumps));
        }
        auto med = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            const std::size_t n = v.size();
            return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        };
        csv.row({format_g17(schedule.eps(j)), format_g17(med(sup)), format_g17(med(bracket)),
                 format_g17(med(retained))});
    }
    write_ensemble_summary(config, procs);
}

void run_decompose(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    const auto functional = config.functional(grid);
    auto procs = run_ensemble(config, grid);
    const EpsSchedule schedule = config.schedule(grid);

    std::vector<DecompositionReport> reports;
    reports.reserve(procs.size());
    for (std::size_t i = 0; i < procs.size(); ++i) {
        reports.push_back(DecompositionReport{CadlagPath(grid, 1), CadlagPath(grid, 1),
                                              CadlagPath(grid, 1), CadlagPath(grid, 1),
                                              CadlagPath(grid, 1), 0.0, 1.0, 0, ""});
    }
    parallel_for(procs.size(), config.threads, [&](std::size_t i) {
        const double h = default_bump_step(procs[i].x);
        reports[i] = ito_dupire_decompose(*functional, procs[i], h);
    });

    for (std::size_t i = 0; i < std::min<std::size_t>(config.dump_paths, procs.size()); ++i) {
        CsvWriter csv(out_file(config, "report_path_" + std::to_string(i) + ".csv"),
                      {"t", "F", "term_martingale", "term_bigjump", "term_compensated",
                       "gamma"});
        const auto& r = reports[i];
        for (std::size_t k = 0; k < grid.node_count(); ++k) {
            csv.row({format_g17(grid.node(k)), format_g17(r.f_path.value(k)),
                     format_g17(r.term_martingale.value(k)),
                     format_g17(r.term_bigjump.value(k)),
                     format_g17(r.term_compensated.value(k)), format_g17(r.gamma.value(k))});
        }
    }

    CsvWriter csv(out_file(config, "decompose_summary.csv"),
                  {"path_index", "seed", "gamma_T", "sup_abs_gamma", "ledger_defect",
                   "max_dgamma_marks", "max_dgamma_atoms", "ortho_final"});
    for (std::size_t i = 0; i < procs.size(); ++i) {
        const auto proxy = predictability_proxy(reports[i], procs[i], 0.05);
        const auto ortho = orthogonality_test(reports[i], procs[i].mc, schedule);
        csv.row({std::to_string(i), std::to_string(procs[i].seed),
                 format_g17(reports[i].gamma.value(grid.last())),
                 format_g17(sup_norm(reports[i].gamma)),
                 format_g17(reports[i].ledger_defect()),
                 format_g17(proxy.max_abs_dgamma_at_marks),
                 format_g17(proxy.max_abs_dgamma_at_atoms),
                 format_g17(ortho.sup_bracket.empty() ? 0.0 : ortho.sup_bracket.back())});
    }
    write_ensemble_summary(config, procs);
}

void run_decompose_truncation(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    const auto functional = config.functional(grid);
    const EpsSchedule schedule = config.schedule(grid);
    auto procs = run_ensemble(config, grid);

    std::vector<ConvergenceDiagnostic> diags(procs.size());
    parallel_for(procs.size(), config.threads, [&](std::size_t i) {
        const double h = default_bump_step(procs[i].x);
        diags[i] = decompose_via_truncation(*functional, procs[i], schedule, h).diagnostic;
    });
    write_diagnostic_csv(out_file(config, "truncated_decompose.csv"),
                         median_over_paths(diags, 5e-2));
    write_ensemble_summary(config, procs);
}

void run_clark_demo(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    ClarkSpec spec = config.clark(grid);
    ClarkReport report = clark_representation_residual(spec, config.seed, config.threads);

    {
        CsvWriter csv(out_file(config, "clark_lattice.csv"),
                      {"t", "prefix_id", "v", "v_se", "grad_v", "grad_v_se"});
        for (const auto& pt : report.lattice) {
            csv.row({format_g17(pt.t), std::to_string(pt.prefix_id), format_g17(pt.v),
                     format_g17(pt.v_se), format_g17(pt.grad_v), format_g17(pt.grad_v_se)});
        }
    }
    {
        CsvWriter csv(out_file(config, "clark_residuals.csv"), {"path", "gamma_T"});
        for (std::size_t p = 0; p < report.residuals.size(); ++p) {
            csv.row({std::to_string(p), format_g17(report.residuals[p])});
        }
    }
    {
        CsvWriter csv(out_file(config, "clark_drift.csv"), {"t_bucket", "mean", "se"});
        for (const auto& bucket : report.drift) {
            csv.row({format_g17(0.5 * (bucket.t_lo + bucket.t_hi)), format_g17(bucket.mean),
                     format_g17(bucket.se)});
        }
    }
}

void run_regularity_probe(const ExperimentConfig& config) {
    const TimeGrid grid = config.grid();
    ClarkSpec spec = config.clark(grid);
    RegularityTable table = regularity_probe(spec, config.samples, config.seed);
    {
        CsvWriter csv(out_file(config, "regularity.csv"),
                      {"time_gap", "prefix_gap", "mu_between", "dv", "dgrad"});
        for (const auto& row : table.rows) {
            csv.row({format_g17(row.time_gap), format_g17(row.prefix_gap),
                     format_g17(row.mu_between), format_g17(row.dv), format_g17(row.dgrad)});
        }
    }
    {
        CsvWriter csv(out_file(config, "regularity_summary.csv"),
                      {"c_v", "c_grad", "c_grad_without_mu", "alpha"});
        csv.row({format_g17(table.c_v), format_g17(table.c_grad),
                 format_g17(table.c_grad_without_mu), format_g17(table.alpha)});
    }
}

}  // namespace

void run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw io_failure("cannot create output directory '" + config.out_dir + "'");

    if (config.kind == "regcalc-convergence") run_regcalc_convergence(config);
    else if (config.kind == "assumption-a") run_assumption_a(config);
    else if (config.kind == "truncation-study") run_truncation_study(config);
    else if (config.kind == "decompose") run_decompose(config);
    else if (config.kind == "decompose-truncation") run_decompose_truncation(config);
    else if (config.kind == "clark-demo") run_clark_demo(config);
    else if (config.kind == "regularity-probe") run_regularity_probe(config);
    else throw invalid_input("config: unknown experiment kind '" + config.kind + "'");

    write_manifest(config);
}

std::string catalog_text() {
    std::ostringstream out;
    out << "experiments:";
    for (const auto& kind : experiment_kinds()) out << " " << kind;
    out << "\nfunctional kinds: constant markovian integral running_sup"
        << "\nscalar maps (functional.f / functional.g): identity square cubic tanh abs"
        << "\njump laws: uniform two_point gaussian_truncated"
        << "\n";
    return out.str();
}

}  // namespace itolab
