#pragma once

#include <functional>
#include <memory>
#include <string>

#include "itolab/functional.hpp"
#include "itolab/model.hpp"
#include "itolab/schedule.hpp"

namespace itolab {

/// Integrand G(s, path-prefix, x) of a jump-measure integral. bind()
/// precomputes whatever the kernel needs along a fixed process (values and
/// gradients of F at the predictable prefix) and returns G(s, y) with y
/// the applied jump size. Kernels evaluate F against the predictable
/// prefix X^- only, never the post-jump path.
class JumpKernel {
public:
    virtual ~JumpKernel() = default;
    virtual const std::string& name() const { return name_; }
    virtual std::function<double(std::size_t, double)> bind(
        const SimulatedProcess& proc) const = 0;

protected:
    explicit JumpKernel(std::string name) : name_(std::move(name)) {}

private:
    std::string name_;
};

/// G(s, x) = x.
std::unique_ptr<JumpKernel> identity_kernel();
/// G(s, x) = 1 (counting kernel).
std::unique_ptr<JumpKernel> unit_kernel();
/// G(s, x) = x * grad F_s(X^-).
std::unique_ptr<JumpKernel> grad_times_x_kernel(const PathFunctional& f, double h);
/// G(s, x) = F_s(X^- (+)_s x) - F_s(X^-).
std::unique_ptr<JumpKernel> f_increment_kernel(const PathFunctional& f);
/// G(s, x) = F_s(X^- (+)_s x) - F_s(X^-) - x * grad F_s(X^-).
std::unique_ptr<JumpKernel> ito_remainder_kernel(const PathFunctional& f, double h);

enum class JumpRegion { small, big };

/// Small region: sum of G over marks with |applied| <= cutoff (and above
/// the process's truncation floor), compensated by the closed-form drift
///   t |-> int_0^t lambda E_law[ G(s, gamma(s) x) ; |gamma(s) x| in band ] ds
/// with the expectation by 64-node Gauss-Legendre quadrature on the
/// band-clipped support. Big region: plain sum over |applied| > cutoff,
/// uncompensated.
CadlagPath compensated_jump_integral(const JumpKernel& kernel, const SimulatedProcess& proc,
                                     JumpRegion region, double cutoff = 1.0);

/// The small-jump cutting of the decomposition: Yn is the compensated
/// martingale of marks with |applied| < eps_n, Zn adds the drift atoms
/// smaller than eps_n, Xn = X - Zn keeps only jumps >= eps_n. X = Xn + Zn
/// exactly, node by node.
struct TruncationTriple {
    SimulatedProcess xn;
    CadlagPath zn;
    CadlagPath yn;
    double eps_n = 0.0;
    /// Nodes of the marks routed into Zn (the small ones).
    std::vector<std::size_t> small_mark_nodes;
    std::vector<std::size_t> small_atom_nodes;
};

TruncationTriple truncate_small_jumps(const SimulatedProcess& proc, double eps_n);

struct TruncationStudyRow {
    double eps_n = 0.0;
    double sup_zn = 0.0;
    double bracket_zn = 0.0;
    std::size_t retained_jumps = 0;  // marks + atoms routed into Zn
};

/// Per-eps_n sup norm of Zn plus its bracket (squared jump sum plus the
/// eps-bracket of the compensator drift at the smallest schedule step).
/// Values must decrease to zero along the schedule.
std::vector<TruncationStudyRow> truncation_vanishing_study(const SimulatedProcess& proc,
                                                           const EpsSchedule& schedule);

}  // namespace itolab
