#include "itolab/jump_law.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/errors.hpp"
#include "itolab/quadrature.hpp"

namespace itolab {

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}
}  // namespace

JumpLaw::JumpLaw(Kind kind, double p1, double p2) : kind_(kind), a_(p1), b_(p2) {
    switch (kind_) {
        case Kind::uniform:
            if (!(p2 > p1)) throw invalid_input("uniform jump law needs a < b");
            lo_ = p1;
            hi_ = p2;
            break;
        case Kind::two_point:
            if (!(p1 > 0.0)) throw invalid_input("two-point jump law needs c > 0");
            lo_ = -p1;
            hi_ = p1;
            break;
        case Kind::gaussian_truncated:
            if (!(p1 > 0.0) || !(p2 > 0.0)) {
                throw invalid_input("truncated gaussian law needs sd > 0 and x_max > 0");
            }
            lo_ = -p2;
            hi_ = p2;
            norm_ = normal_cdf(p2 / p1) - normal_cdf(-p2 / p1);
            break;
    }
}

JumpLaw JumpLaw::uniform(double a, double b) { return JumpLaw(Kind::uniform, a, b); }
JumpLaw JumpLaw::two_point(double c) { return JumpLaw(Kind::two_point, c, 0.0); }
JumpLaw JumpLaw::gaussian_truncated(double sd, double x_max) {
    return JumpLaw(Kind::gaussian_truncated, sd, x_max);
}

std::string JumpLaw::describe() const {
    switch (kind_) {
        case Kind::uniform:
            return "uniform[" + std::to_string(a_) + "," + std::to_string(b_) + "]";
        case Kind::two_point:
            return "two_point(" + std::to_string(a_) + ")";
        case Kind::gaussian_truncated:
            return "gaussian_truncated(sd=" + std::to_string(a_) +
                   ",x_max=" + std::to_string(b_) + ")";
    }
    return "?";
}

double JumpLaw::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::uniform:
            return a_ + (b_ - a_) * rng.next_uniform();
        case Kind::two_point:
            return (rng.next_u64() & 1ULL) ? a_ : -a_;
        case Kind::gaussian_truncated: {
            // Rejection; acceptance is high for the x_max ~ sd regimes used.
            for (;;) {
                const double x = a_ * rng.next_normal();
                if (std::abs(x) <= b_) return x;
            }
        }
    }
    return 0.0;
}

double JumpLaw::density(double x) const {
    switch (kind_) {
        case Kind::uniform:
            return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
        case Kind::two_point:
            return 0.0;  // atomic; handled separately
        case Kind::gaussian_truncated:
            return (std::abs(x) <= b_) ? normal_pdf(x / a_) / (a_ * norm_) : 0.0;
    }
    return 0.0;
}

double JumpLaw::expect_abs_band(const std::function<double(double)>& f, double scale,
                                double abs_lo, double abs_hi) const {
    if (!(abs_hi >= abs_lo) || abs_hi < 0.0) return 0.0;
    const double s = std::abs(scale);

    if (kind_ == Kind::two_point) {
        double acc = 0.0;
        for (double x : {a_, -a_}) {
            const double size = s * std::abs(x);
            if (size >= abs_lo && size <= abs_hi) acc += 0.5 * f(x);
        }
        return acc;
    }

    // |scale * x| in [abs_lo, abs_hi]  <=>  |x| in [abs_lo/s, abs_hi/s].
    // scale == 0 collapses the band onto {0}: f(x) counts iff 0 is inside.
    if (s == 0.0) {
        if (abs_lo <= 0.0) return expect(f);
        return 0.0;
    }
    const double lo_cut = abs_lo / s;
    const double hi_cut = abs_hi / s;

    double acc = 0.0;
    const auto piece = [&](double a, double b) {
        a = std::max(a, lo_);
        b = std::min(b, hi_);
        if (b > a) acc += gl_integrate([&](double x) { return f(x) * density(x); }, a, b);
    };
    piece(-hi_cut, -lo_cut);
    piece(lo_cut, hi_cut);
    return acc;
}

double JumpLaw::expect(const std::function<double(double)>& f) const {
    if (kind_ == Kind::two_point) return 0.5 * (f(a_) + f(-a_));
    return gl_integrate([&](double x) { return f(x) * density(x); }, lo_, hi_);
}

}  // namespace itolab
