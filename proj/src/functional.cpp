#include "itolab/functional.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/errors.hpp"

namespace itolab {

// ---- MuMeasure ------------------------------------------------------------

MuMeasure::MuMeasure(TimeGrid grid, std::vector<double> density,
                     std::vector<std::pair<std::size_t, double>> atoms)
    : grid_(grid), density_(std::move(density)), atoms_(std::move(atoms)) {
    const std::size_t m = grid_.node_count();
    if (density_.size() != m) {
        throw invalid_input("MuMeasure: density must have one entry per node");
    }
    std::sort(atoms_.begin(), atoms_.end());
    atom_at_.assign(m, 0.0);
    for (const auto& [node, mass] : atoms_) {
        if (node >= m) throw invalid_input("MuMeasure: atom node outside grid");
        atom_at_[node] += mass;
    }
    // suffix_[k] = density integral over [t_k, T] plus atoms at nodes >= k.
    suffix_.assign(m, 0.0);
    suffix_[m - 1] = atom_at_[m - 1];
    const double dt = grid_.dt();
    for (std::size_t k = m - 1; k-- > 0;) {
        suffix_[k] = suffix_[k + 1] + 0.5 * dt * (density_[k] + density_[k + 1]) + atom_at_[k];
    }
    total_variation_ = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        total_variation_ += 0.5 * dt * (std::abs(density_[k]) + std::abs(density_[k + 1]));
    }
    for (const auto& [node, mass] : atoms_) total_variation_ += std::abs(mass);
}

MuMeasure MuMeasure::lebesgue(TimeGrid grid) {
    return with_constant_density(grid, 1.0);
}

MuMeasure MuMeasure::with_constant_density(
    TimeGrid grid, double density, std::vector<std::pair<std::size_t, double>> atoms) {
    return MuMeasure(grid, std::vector<double>(grid.node_count(), density),
                     std::move(atoms));
}

double MuMeasure::mass_between(std::size_t a, std::size_t b) const {
    if (a > b) throw invalid_input("MuMeasure::mass_between: a > b");
    double mass = suffix_[a] - (b + 1 < grid_.node_count() ? suffix_[b + 1] : 0.0);
    // suffix_[b+1] already excludes the atom at b, but the density integral
    // over [t_b, t_{b+1}] must be cut at t_b.
    if (b + 1 < grid_.node_count()) {
        mass -= 0.5 * grid_.dt() * (density_[b] + density_[b + 1]);
    }
    return mass;
}

double MuMeasure::integrate(const CadlagPath& x, std::size_t comp) const {
    if (x.grid() != grid_) throw invalid_input("MuMeasure::integrate: grid mismatch");
    const std::size_t m = grid_.node_count();
    const double dt = grid_.dt();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        acc += 0.5 * dt *
               (density_[k] * x.value(k, comp) + density_[k + 1] * x.left_limit(k + 1, comp));
    }
    for (const auto& [node, mass] : atoms_) acc += mass * x.value(node, comp);
    return acc;
}

// ---- PathFunctional defaults -----------------------------------------------

std::vector<double> PathFunctional::eval_along(const CadlagPath& x) const {
    std::vector<double> out(x.nodes());
    for (std::size_t k = 0; k < x.nodes(); ++k) out[k] = eval(k, x);
    return out;
}

std::vector<double> PathFunctional::analytic_gradient(std::size_t, const CadlagPath&) const {
    throw invalid_input("functional '" + name() + "' has no analytic gradient");
}

std::vector<double> PathFunctional::analytic_gradient_prebump(std::size_t t,
                                                              const CadlagPath& x) const {
    return analytic_gradient(t, predictable_stop(x, t));
}

double PathFunctional::eval_prebump(std::size_t t, const CadlagPath& x, double y) const {
    if (x.dim() != 1) {
        throw invalid_input("eval_prebump: scalar paths only");
    }
    return eval(t, bump(predictable_stop(x, t), t, y));
}

// ---- Markovian --------------------------------------------------------------

MarkovianFunctional::MarkovianFunctional(std::string name, ScalarFn f,
                                         std::optional<ScalarFn> derivative)
    : PathFunctional(std::move(name)), f_(std::move(f)), derivative_(std::move(derivative)) {}

double MarkovianFunctional::eval(std::size_t t, const CadlagPath& x) const {
    if (x.dim() != 1) throw invalid_input("markovian functional: scalar paths only");
    return f_(x.value(t));
}

std::vector<double> MarkovianFunctional::eval_along(const CadlagPath& x) const {
    if (x.dim() != 1) throw invalid_input("markovian functional: scalar paths only");
    std::vector<double> out(x.nodes());
    for (std::size_t k = 0; k < x.nodes(); ++k) out[k] = f_(x.value(k));
    return out;
}

std::vector<double> MarkovianFunctional::analytic_gradient(std::size_t t,
                                                           const CadlagPath& x) const {
    if (!derivative_) return PathFunctional::analytic_gradient(t, x);
    return {(*derivative_)(x.value(t))};
}

std::vector<double> MarkovianFunctional::analytic_gradient_prebump(std::size_t t,
                                                                   const CadlagPath& x) const {
    if (!derivative_) return PathFunctional::analytic_gradient(t, x);
    return {(*derivative_)(x.left_limit(t))};
}

double MarkovianFunctional::eval_prebump(std::size_t t, const CadlagPath& x, double y) const {
    return f_(x.left_limit(t) + y);
}

// ---- IntegralFunctional ------------------------------------------------------

IntegralFunctional::IntegralFunctional(std::string name, ScalarFn g,
                                       std::optional<ScalarFn> g_prime, MuMeasure mu,
                                       bool linear_g)
    : PathFunctional(std::move(name)),
      g_(std::move(g)),
      g_prime_(std::move(g_prime)),
      mu_(std::move(mu)),
      linear_g_(linear_g) {}

double IntegralFunctional::prefix_density(std::size_t t, const CadlagPath& x) const {
    // Density integral over [0, t) plus atoms strictly before t.
    const double dt = mu_.grid_.dt();
    double acc = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
        acc += 0.5 * dt *
               (mu_.density_[k] * x.value(k) + mu_.density_[k + 1] * x.left_limit(k + 1));
    }
    for (const auto& [node, mass] : mu_.atoms_) {
        if (node >= t) break;
        acc += mass * x.value(node);
    }
    return acc;
}

double IntegralFunctional::stopped_integral(std::size_t t, const CadlagPath& x) const {
    if (x.grid() != mu_.grid_) throw invalid_input("integral functional: grid mismatch");
    if (x.dim() != 1) throw invalid_input("integral functional: scalar paths only");
    return prefix_density(t, x) + x.value(t) * mu_.mass_from(t);
}

double IntegralFunctional::eval(std::size_t t, const CadlagPath& x) const {
    return g_(stopped_integral(t, x));
}

std::vector<double> IntegralFunctional::eval_along(const CadlagPath& x) const {
    if (x.grid() != mu_.grid_) throw invalid_input("integral functional: grid mismatch");
    if (x.dim() != 1) throw invalid_input("integral functional: scalar paths only");
    const std::size_t m = x.nodes();
    const double dt = mu_.grid_.dt();
    std::vector<double> out(m);
    double prefix = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        out[t] = g_(prefix + x.value(t) * mu_.mass_from(t));
        if (t + 1 < m) {
            prefix += 0.5 * dt *
                      (mu_.density_[t] * x.value(t) + mu_.density_[t + 1] * x.left_limit(t + 1));
            prefix += mu_.atom_at_[t] * x.value(t);
        }
    }
    return out;
}

std::vector<double> IntegralFunctional::analytic_gradient(std::size_t t,
                                                          const CadlagPath& x) const {
    if (!has_analytic_gradient()) return PathFunctional::analytic_gradient(t, x);
    return {(*g_prime_)(stopped_integral(t, x)) * mu_.mass_from(t)};
}

double IntegralFunctional::eval_prebump(std::size_t t, const CadlagPath& x, double y) const {
    // The prefix of the predictable stop matches x on [0, t); only the
    // frozen value changes.
    return g_(prefix_density(t, x) + (x.left_limit(t) + y) * mu_.mass_from(t));
}

// ---- RunningSup ---------------------------------------------------------------

RunningSupFunctional::RunningSupFunctional() : PathFunctional("running_sup") {}

namespace {
double node_norm(const CadlagPath& x, std::size_t k, bool left) {
    double n2 = 0.0;
    for (std::size_t c = 0; c < x.dim(); ++c) {
        const double v = left ? x.left_limit(k, c) : x.value(k, c);
        n2 += v * v;
    }
    return std::sqrt(n2);
}
}  // namespace

double RunningSupFunctional::eval(std::size_t t, const CadlagPath& x) const {
    double sup = node_norm(x, 0, false);
    for (std::size_t k = 1; k <= t; ++k) {
        if (x.has_jump(k)) sup = std::max(sup, node_norm(x, k, true));
        sup = std::max(sup, node_norm(x, k, false));
    }
    return sup;
}

std::vector<double> RunningSupFunctional::eval_along(const CadlagPath& x) const {
    std::vector<double> out(x.nodes());
    double sup = node_norm(x, 0, false);
    out[0] = sup;
    for (std::size_t k = 1; k < x.nodes(); ++k) {
        if (x.has_jump(k)) sup = std::max(sup, node_norm(x, k, true));
        sup = std::max(sup, node_norm(x, k, false));
        out[k] = sup;
    }
    return out;
}

// ---- Constant -------------------------------------------------------------------

ConstantFunctional::ConstantFunctional(double value)
    : PathFunctional("constant"), value_(value) {}

std::vector<double> ConstantFunctional::eval_along(const CadlagPath& x) const {
    return std::vector<double>(x.nodes(), value_);
}

std::vector<double> ConstantFunctional::analytic_gradient(std::size_t,
                                                          const CadlagPath& x) const {
    return std::vector<double>(x.dim(), 0.0);
}

// ---- Catalog ----------------------------------------------------------------------

ScalarFn scalar_fn(const std::string& name) {
    if (name == "identity") return [](double u) { return u; };
    if (name == "square") return [](double u) { return u * u; };
    if (name == "cubic") return [](double u) { return u * u * u; };
    if (name == "tanh") return [](double u) { return std::tanh(u); };
    if (name == "abs") return [](double u) { return std::abs(u); };
    throw invalid_input("unknown scalar function '" + name + "'");
}

ScalarFn scalar_fn_derivative(const std::string& name) {
    if (name == "identity") return [](double) { return 1.0; };
    if (name == "square") return [](double u) { return 2.0 * u; };
    if (name == "cubic") return [](double u) { return 3.0 * u * u; };
    if (name == "tanh") return [](double u) {
        const double th = std::tanh(u);
        return 1.0 - th * th;
    };
    if (name == "abs") return [](double u) { return u < 0.0 ? -1.0 : 1.0; };
    throw invalid_input("unknown scalar function '" + name + "'");
}

bool scalar_fn_is_linear(const std::string& name) { return name == "identity"; }

std::unique_ptr<PathFunctional> make_markovian(const std::string& f_name) {
    return std::make_unique<MarkovianFunctional>("markovian_" + f_name, scalar_fn(f_name),
                                                 scalar_fn_derivative(f_name));
}

std::unique_ptr<PathFunctional> make_integral(const std::string& g_name, MuMeasure mu) {
    return std::make_unique<IntegralFunctional>("integral_" + g_name, scalar_fn(g_name),
                                                scalar_fn_derivative(g_name), std::move(mu),
                                                scalar_fn_is_linear(g_name));
}

std::unique_ptr<PathFunctional> make_running_sup() {
    return std::make_unique<RunningSupFunctional>();
}

std::unique_ptr<PathFunctional> make_constant(double value) {
    return std::make_unique<ConstantFunctional>(value);
}

}  // namespace itolab
