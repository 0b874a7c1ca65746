#include "shorake/exp_integrals.hpp"

#include <algorithm>
#include <cmath>

namespace shorake {

double exprel1(double u) {
    if (u == 0.0) return 1.0;
    return std::expm1(u) / u;
}

double exp_segment_integral(double e, double a, double b) {
    const double len = b - a;
    return std::exp(e * a) * len * exprel1(e * len);
}

namespace {

// (exp(u)*(u-1) + 1) / u^2; equals integral of t*exp(u*t) over [0,1].
double e2(double u) {
    if (std::abs(u) < 1e-4) {
        return 0.5 + u * (1.0 / 3.0 + u * (0.125 + u / 30.0));
    }
    return (std::expm1(u) * (u - 1.0) + u) / (u * u);
}

}  // namespace

double texp_segment_integral(double f, double c, double d) {
    const double len = d - c;
    const double u = f * len;
    return std::exp(f * c) * (c * len * exprel1(u) + len * len * e2(u));
}

double exp_rect_integral(double e, double a, double b, double f, double c, double d) {
    return exp_segment_integral(e, a, b) * exp_segment_integral(f, c, d);
}

double exp_trap_integral(double e, double a, double b0, double bslope,
                         double f, double c, double d) {
    const double x_scale =
        std::max({std::abs(a), std::abs(b0 - bslope * c), std::abs(b0 - bslope * d)});
    if (std::abs(e) * x_scale < 1e-12) {
        // Removable e -> 0 limit: inner integral degenerates to its width.
        return (b0 - a) * exp_segment_integral(f, c, d) -
               bslope * texp_segment_integral(f, c, d);
    }
    const double j1 = exp_segment_integral(f - e * bslope, c, d);
    const double j2 = exp_segment_integral(f, c, d);
    return (std::exp(e * b0) * j1 - std::exp(e * a) * j2) / e;
}

}  // namespace shorake
