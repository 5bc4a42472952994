#pragma once

#include <functional>
#include <string>

#include "itolab/rng.hpp"

namespace itolab {

/// Named jump-size distribution with bounded support. Expectations against
/// the law are deterministic quadrature (Gauss-Legendre, 64 nodes), never
/// inner Monte Carlo, so compensator drifts carry no sampling noise.
class JumpLaw {
public:
    enum class Kind { uniform, two_point, gaussian_truncated };

    static JumpLaw uniform(double a, double b);
    /// +c or -c with probability 1/2 each.
    static JumpLaw two_point(double c);
    /// N(0, sd^2) conditioned on |x| <= x_max.
    static JumpLaw gaussian_truncated(double sd, double x_max);

    Kind kind() const { return kind_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    std::string describe() const;

    double sample(Rng& rng) const;

    /// E[f(x) ; |scale * x| in [abs_lo, abs_hi]] against the law. Band
    /// endpoints are inclusive; the integration domain is clipped exactly,
    /// so indicator discontinuities never cross a quadrature panel.
    double expect_abs_band(const std::function<double(double)>& f, double scale,
                           double abs_lo, double abs_hi) const;

    /// E[f(x)] over the whole support.
    double expect(const std::function<double(double)>& f) const;

private:
    JumpLaw(Kind kind, double p1, double p2);

    double density(double x) const;

    Kind kind_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double a_ = 0.0;   // uniform lower / two-point c / gaussian sd
    double b_ = 0.0;   // uniform upper / unused / gaussian x_max
    double norm_ = 1.0;  // truncated-gaussian normalizer
};

}  // namespace itolab
