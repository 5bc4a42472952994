#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "itolab/errors.hpp"
#include "itolab/experiment.hpp"

namespace itolab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw invalid_input("config: key '" + key + "' has a malformed number '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw invalid_input("config: key '" + key + "' has a malformed integer '" + value + "'");
    }
    return v;
}

/// "0.5:-0.2,0.75:0.1" -> list of (time, size).
std::vector<std::pair<double, double>> parse_atom_list(const std::string& key,
                                                       const std::string& value) {
    std::vector<std::pair<double, double>> atoms;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos) {
            throw invalid_input("config: key '" + key + "' expects time:size pairs");
        }
        atoms.emplace_back(parse_double(key, trim(item.substr(0, colon))),
                           parse_double(key, trim(item.substr(colon + 1))));
    }
    return atoms;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {
        "regcalc-convergence", "assumption-a",    "truncation-study", "decompose",
        "decompose-truncation", "clark-demo",     "regularity-probe"};
    return kinds;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    bool seed_seen = false;
    std::string section;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw invalid_input("config line " + std::to_string(line_no) +
                                    ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> sections = {"grid", "model", "functional",
                                                           "schedule", "budgets"};
            if (!sections.count(section)) {
                throw invalid_input("config: unknown section '" + section + "'");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw invalid_input("config line " + std::to_string(line_no) +
                                ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qualified = section.empty() ? key : section + "." + key;

        if (section.empty()) {
            if (key == "experiment") config.kind = value;
            else if (key == "seed") { config.seed = parse_u64(key, value); seed_seen = true; }
            else if (key == "out") config.out_dir = value;
            else if (key == "threads") config.threads = static_cast<unsigned>(parse_u64(key, value));
            else throw invalid_input("config: unknown key '" + qualified + "'");
        } else if (section == "grid") {
            if (key == "horizon") config.horizon = parse_double(qualified, value);
            else if (key == "nodes") config.nodes = parse_u64(qualified, value);
            else throw invalid_input("config: unknown key '" + qualified + "'");
        } else if (section == "model") {
            if (key == "sigma") config.sigma = parse_double(qualified, value);
            else if (key == "sigma_slope") config.sigma_slope = parse_double(qualified, value);
            else if (key == "sigma_feedback") config.sigma_feedback = parse_double(qualified, value);
            else if (key == "lambda") config.lambda = parse_double(qualified, value);
            else if (key == "law") config.law = value;
            else if (key == "law_a") config.law_a = parse_double(qualified, value);
            else if (key == "law_b") config.law_b = parse_double(qualified, value);
            else if (key == "law_c") config.law_c = parse_double(qualified, value);
            else if (key == "law_sd") config.law_sd = parse_double(qualified, value);
            else if (key == "law_xmax") config.law_xmax = parse_double(qualified, value);
            else if (key == "gamma") config.gamma = parse_double(qualified, value);
            else if (key == "gamma_slope") config.gamma_slope = parse_double(qualified, value);
            else if (key == "drift_slope") config.drift_slope = parse_double(qualified, value);
            else if (key == "drift_atoms") config.drift_atoms = parse_atom_list(qualified, value);
            else if (key == "weierstrass_amp") config.weierstrass_amp = parse_double(qualified, value);
            else if (key == "weierstrass_terms") config.weierstrass_terms = parse_u64(qualified, value);
            else if (key == "x0") config.x0 = parse_double(qualified, value);
            else if (key == "t0") config.t0 = parse_double(qualified, value);
            else throw invalid_input("config: unknown key '" + qualified + "'");
        } else if (section == "functional") {
            if (key == "kind") config.functional_kind = value;
            else if (key == "f") config.functional_f = value;
            else if (key == "g") config.functional_g = value;
            else if (key == "value") config.functional_value = parse_double(qualified, value);
            else if (key == "mu_density") config.mu_density = parse_double(qualified, value);
            else if (key == "mu_atoms") config.mu_atoms = parse_atom_list(qualified, value);
            else throw invalid_input("config: unknown key '" + qualified + "'");
        } else if (section == "schedule") {
            if (key == "k_min") config.k_min = static_cast<int>(parse_u64(qualified, value));
            else if (key == "k_max") config.k_max = static_cast<int>(parse_u64(qualified, value));
            else if (key == "eps_values") config.eps_values = parse_double_list(qualified, value);
            else throw invalid_input("config: unknown key '" + qualified + "'");
        } else if (section == "budgets") {
            if (key == "paths") config.paths = parse_u64(qualified, value);
            else if (key == "inner") config.inner = parse_u64(qualified, value);
            else if (key == "outer") config.outer = parse_u64(qualified, value);
            else if (key == "nested_cap") config.nested_cap = parse_u64(qualified, value);
            else if (key == "compensator_subsample")
                config.compensator_subsample = parse_u64(qualified, value);
            else if (key == "samples") config.samples = parse_u64(qualified, value);
            else if (key == "dump_paths") config.dump_paths = parse_u64(qualified, value);
            else throw invalid_input("config: unknown key '" + qualified + "'");
        }
    }
    if (config.kind.empty()) throw invalid_input("config: missing 'experiment' key");
    if (!seed_seen) throw invalid_input("config: missing 'seed' key (no wall-clock defaults)");
    return config;
}

ExperimentConfig parse_config_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw io_failure("cannot open config file '" + filename + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& config) {
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), config.kind) == kinds.end()) {
        throw invalid_input("config: unknown experiment kind '" + config.kind + "'");
    }
    if (!(config.horizon > 0.0)) throw invalid_input("config: grid.horizon must be > 0");
    if (config.nodes < 2 || config.nodes > (1u << 22)) {
        throw invalid_input("config: grid.nodes out of range [2, 2^22]");
    }
    if (config.paths < 1 || config.paths > 1000000) {
        throw invalid_input("config: budgets.paths out of range [1, 1e6]");
    }
    static const std::set<std::string> laws = {"uniform", "two_point", "gaussian_truncated"};
    if (!laws.count(config.law)) {
        throw invalid_input("config: unknown model.law '" + config.law + "'");
    }
    static const std::set<std::string> functional_kinds = {"constant", "markovian", "integral",
                                                           "running_sup"};
    if (!functional_kinds.count(config.functional_kind)) {
        throw invalid_input("config: unknown functional.kind '" + config.functional_kind + "'");
    }
    static const std::set<std::string> fs = {"identity", "square", "cubic", "tanh", "abs"};
    if (!fs.count(config.functional_f)) {
        throw invalid_input("config: unknown functional.f '" + config.functional_f + "'");
    }
    if (!fs.count(config.functional_g)) {
        throw invalid_input("config: unknown functional.g '" + config.functional_g + "'");
    }
    // Constructing the pieces surfaces the remaining contract violations
    // (grid/coefficient consistency, schedule bounds) with their own
    // messages.
    const TimeGrid grid = config.grid();
    config.model().validate(grid);
    if (config.kind != "clark-demo" && config.kind != "regularity-probe") {
        config.schedule(grid);
    }
}

JumpDiffusionSpec ExperimentConfig::model() const {
    JumpDiffusionSpec spec;
    spec.sigma = {sigma, sigma_slope};
    spec.sigma_feedback = sigma_feedback;
    spec.lambda = lambda;
    if (lambda > 0.0) {
        if (law == "uniform") spec.law = JumpLaw::uniform(law_a, law_b);
        else if (law == "two_point") spec.law = JumpLaw::two_point(law_c);
        else spec.law = JumpLaw::gaussian_truncated(law_sd, law_xmax);
    }
    spec.gamma = {gamma, gamma_slope};
    spec.drift.slope = drift_slope;
    spec.drift.atoms = drift_atoms;
    spec.drift.weierstrass_amplitude = weierstrass_amp;
    spec.drift.weierstrass_terms = weierstrass_terms;
    return spec;
}

MuMeasure ExperimentConfig::mu(const TimeGrid& grid) const {
    std::vector<std::pair<std::size_t, double>> atoms;
    for (const auto& [time, mass] : mu_atoms) atoms.emplace_back(grid.snap(time), mass);
    return MuMeasure::with_constant_density(grid, mu_density, std::move(atoms));
}

std::unique_ptr<PathFunctional> ExperimentConfig::functional(const TimeGrid& grid) const {
    if (functional_kind == "constant") return make_constant(functional_value);
    if (functional_kind == "markovian") return make_markovian(functional_f);
    if (functional_kind == "integral") return make_integral(functional_g, mu(grid));
    if (functional_kind == "running_sup") return make_running_sup();
    throw invalid_input("config: unknown functional.kind '" + functional_kind + "'");
}

EpsSchedule ExperimentConfig::schedule(const TimeGrid& grid) const {
    if (!eps_values.empty()) return EpsSchedule::from_eps_values(grid, eps_values);
    return EpsSchedule::dyadic(grid, k_min, k_max);
}

ClarkSpec ExperimentConfig::clark(const TimeGrid& grid) const {
    ClarkSpec spec(mu(grid));
    spec.payoff = functional_g;
    spec.model = model();
    spec.inner_samples = inner;
    spec.outer_samples = outer;
    spec.nested_cap = nested_cap;
    spec.compensator_subsample = compensator_subsample;
    return spec;
}

std::uint64_t config_hash(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "kind=" << c.kind << ";seed=" << c.seed << ";horizon=" << c.horizon
        << ";nodes=" << c.nodes << ";sigma=" << c.sigma << ";sigma_slope=" << c.sigma_slope
        << ";sigma_feedback=" << c.sigma_feedback << ";lambda=" << c.lambda
        << ";law=" << c.law << ";law_a=" << c.law_a << ";law_b=" << c.law_b
        << ";law_c=" << c.law_c << ";law_sd=" << c.law_sd << ";law_xmax=" << c.law_xmax
        << ";gamma=" << c.gamma << ";gamma_slope=" << c.gamma_slope
        << ";drift_slope=" << c.drift_slope << ";weierstrass_amp=" << c.weierstrass_amp
        << ";wterms=" << c.weierstrass_terms << ";x0=" << c.x0 << ";t0=" << c.t0
        << ";fkind=" << c.functional_kind << ";f=" << c.functional_f
        << ";g=" << c.functional_g << ";fvalue=" << c.functional_value
        << ";mu_density=" << c.mu_density << ";kmin=" << c.k_min << ";kmax=" << c.k_max
        << ";paths=" << c.paths << ";inner=" << c.inner << ";outer=" << c.outer
        << ";nested_cap=" << c.nested_cap << ";sub=" << c.compensator_subsample
        << ";samples=" << c.samples << ";dump=" << c.dump_paths;
    for (const auto& [t, s] : c.drift_atoms) out << ";datom=" << t << ":" << s;
    for (const auto& [t, s] : c.mu_atoms) out << ";muatom=" << t << ":" << s;
    for (double e : c.eps_values) out << ";eps=" << e;

    const std::string s = out.str();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace itolab
