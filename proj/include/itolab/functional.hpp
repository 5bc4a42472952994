#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "itolab/path.hpp"

namespace itolab {

/// Finite signed measure on [0, T]: a density sampled at the grid nodes
/// (piecewise linear between them) plus finitely many atoms at nodes.
/// mass_from(k) = mu([t_k, T]) with the right-continuous convention: an
/// atom at t_k counts fully.
class MuMeasure {
public:
    MuMeasure(TimeGrid grid, std::vector<double> density,
              std::vector<std::pair<std::size_t, double>> atoms);

    static MuMeasure lebesgue(TimeGrid grid);
    static MuMeasure with_constant_density(TimeGrid grid, double density,
                                           std::vector<std::pair<std::size_t, double>> atoms = {});

    const TimeGrid& grid() const { return grid_; }
    double density_at(std::size_t k) const { return density_[k]; }
    const std::vector<std::pair<std::size_t, double>>& atoms() const { return atoms_; }

    /// mu([t_k, T]).
    double mass_from(std::size_t k) const { return suffix_[k]; }
    /// mu([t_a, t_b]) for a <= b (atom at both endpoints included).
    double mass_between(std::size_t a, std::size_t b) const;
    double total_variation() const { return total_variation_; }

    /// Integral of the path against mu over [0, T], with the path read as
    /// cadlag: interval right endpoints sample the left limit, atoms
    /// sample the right-continuous value.
    double integrate(const CadlagPath& x, std::size_t comp = 0) const;

private:
    TimeGrid grid_;
    std::vector<double> density_;
    std::vector<std::pair<std::size_t, double>> atoms_;
    std::vector<double> suffix_;       // mass_from per node
    std::vector<double> atom_at_;      // dense atom masses
    double total_variation_ = 0.0;

    friend class IntegralFunctional;
};

/// Non-anticipative functional F(t, x): eval must depend on the path only
/// through its values up to node t. Implementations are immutable after
/// construction and safe to evaluate concurrently.
class PathFunctional {
public:
    virtual ~PathFunctional() = default;

    virtual double eval(std::size_t t, const CadlagPath& x) const = 0;

    /// F(t_k, x) for every node k. Default loops eval; catalog overrides
    /// are O(m) total.
    virtual std::vector<double> eval_along(const CadlagPath& x) const;

    virtual bool has_analytic_gradient() const { return false; }
    /// Vertical gradient at (t, x); throws if has_analytic_gradient() is
    /// false.
    virtual std::vector<double> analytic_gradient(std::size_t t, const CadlagPath& x) const;
    /// Analytic gradient at the predictable prefix x^-_{t/\}. Default
    /// materializes the prefix; catalog overrides avoid the copy.
    virtual std::vector<double> analytic_gradient_prebump(std::size_t t,
                                                          const CadlagPath& x) const;

    /// F(t, predictable_stop(x, t) (+)_t y) for scalar paths; the hot path
    /// for jump kernels. Default materializes the bumped prefix.
    virtual double eval_prebump(std::size_t t, const CadlagPath& x, double y) const;

    virtual bool markovian() const { return false; }
    const std::string& name() const { return name_; }

protected:
    explicit PathFunctional(std::string name) : name_(std::move(name)) {}

private:
    std::string name_;
};

using ScalarFn = std::function<double(double)>;

/// F(t, x) = f(x_t) for scalar paths.
class MarkovianFunctional : public PathFunctional {
public:
    MarkovianFunctional(std::string name, ScalarFn f,
                        std::optional<ScalarFn> derivative = std::nullopt);

    double eval(std::size_t t, const CadlagPath& x) const override;
    std::vector<double> eval_along(const CadlagPath& x) const override;
    bool has_analytic_gradient() const override { return derivative_.has_value(); }
    std::vector<double> analytic_gradient(std::size_t t, const CadlagPath& x) const override;
    std::vector<double> analytic_gradient_prebump(std::size_t t,
                                                  const CadlagPath& x) const override;
    double eval_prebump(std::size_t t, const CadlagPath& x, double y) const override;
    bool markovian() const override { return true; }

    double f(double u) const { return f_(u); }

private:
    ScalarFn f_;
    std::optional<ScalarFn> derivative_;
};

/// F(t, x) = g(integral of the stopped path x_{t/\} against mu over
/// [0, T]) = g( int_{[0,t)} x dmu + x_t * mu([t, T]) ). The vertical
/// gradient is g'(...) * mu([t, T]); for linear g the catalog owns it in
/// closed form, otherwise finite differences are used.
class IntegralFunctional : public PathFunctional {
public:
    IntegralFunctional(std::string name, ScalarFn g, std::optional<ScalarFn> g_prime,
                       MuMeasure mu, bool linear_g = false);

    double eval(std::size_t t, const CadlagPath& x) const override;
    std::vector<double> eval_along(const CadlagPath& x) const override;
    bool has_analytic_gradient() const override { return linear_g_ && g_prime_.has_value(); }
    std::vector<double> analytic_gradient(std::size_t t, const CadlagPath& x) const override;
    double eval_prebump(std::size_t t, const CadlagPath& x, double y) const override;

    const MuMeasure& mu() const { return mu_; }
    /// The mu-argument fed to g, i.e. the stopped-path integral.
    double stopped_integral(std::size_t t, const CadlagPath& x) const;

private:
    double prefix_density(std::size_t t, const CadlagPath& x) const;

    ScalarFn g_;
    std::optional<ScalarFn> g_prime_;
    MuMeasure mu_;
    bool linear_g_;
};

/// F(t, x) = sup_{s <= t} |x_s| over node values and left limits.
class RunningSupFunctional : public PathFunctional {
public:
    RunningSupFunctional();
    double eval(std::size_t t, const CadlagPath& x) const override;
    std::vector<double> eval_along(const CadlagPath& x) const override;
};

class ConstantFunctional : public PathFunctional {
public:
    explicit ConstantFunctional(double value);
    double eval(std::size_t, const CadlagPath&) const override { return value_; }
    std::vector<double> eval_along(const CadlagPath& x) const override;
    bool has_analytic_gradient() const override { return true; }
    std::vector<double> analytic_gradient(std::size_t, const CadlagPath& x) const override;
    double eval_prebump(std::size_t, const CadlagPath&, double) const override { return value_; }
    bool markovian() const override { return true; }

private:
    double value_;
};

// Catalog constructors with the names the experiment configs use.
std::unique_ptr<PathFunctional> make_markovian(const std::string& f_name);
std::unique_ptr<PathFunctional> make_integral(const std::string& g_name, MuMeasure mu);
std::unique_ptr<PathFunctional> make_running_sup();
std::unique_ptr<PathFunctional> make_constant(double value);

/// Scalar map catalog shared by functionals and payoffs:
/// identity, square, cubic, tanh, abs.
ScalarFn scalar_fn(const std::string& name);
ScalarFn scalar_fn_derivative(const std::string& name);
bool scalar_fn_is_linear(const std::string& name);

}  // namespace itolab
