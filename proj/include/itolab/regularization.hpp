#pragma once

#include "itolab/functional.hpp"
#include "itolab/path.hpp"
#include "itolab/schedule.hpp"

namespace itolab {

/// eps-approximant of the forward integral:
///   t |-> (1/eps) \int_0^t H_s (X_{(s+eps)/\t} - X_s) ds,
/// trapezoidal over nodes with one-sided samples per interval, so
/// node-aligned jumps contribute exactly. eps = step * dt, step >= 2.
/// Multi-component inputs sum the componentwise integrals.
CadlagPath forward_integral_eps(const CadlagPath& h, const CadlagPath& x, std::size_t step);

/// eps-approximant of the quadratic covariation:
///   t |-> (1/eps) \int_0^t (X_{(s+eps)/\t} - X_s)(Y_{(s+eps)/\t} - Y_s) ds.
/// Scalar paths; for matrices loop components.
CadlagPath quadratic_covariation_eps(const CadlagPath& x, const CadlagPath& y,
                                     std::size_t step);

/// The statistic of the regularity coupling condition:
///   t |-> (1/eps) \int_0^t (F_{s+eps}(Y) - F_{s+eps}(Y_{s/\} (#)_{s+eps} Y_{s+eps}))
///                  (N_{s+eps} - N_s) ds.
/// N must be continuous (no registered jumps). Feed the result to
/// ucp_limit against the zero reference. Vanishing for every continuous
/// martingale N is what the decomposition machinery needs from the pair
/// (F, Y); it holds identically when F is Markov.
CadlagPath assumption_a_statistic(const PathFunctional& f, const CadlagPath& y,
                                  const CadlagPath& n, std::size_t step);

/// Convenience: left-point Ito sum t |-> sum_{t_{k+1} <= t} H_{t_k}
/// (X_{t_{k+1}} - X_{t_k}), the discrete reference the forward integral is
/// checked against for semimartingales.
CadlagPath left_point_ito_sum(const CadlagPath& h, const CadlagPath& x);

}  // namespace itolab
