#ifndef SHORAKE_EXP_INTEGRALS_HPP
#define SHORAKE_EXP_INTEGRALS_HPP

namespace shorake {

/// expm1(u)/u, continuous through u = 0.
double exprel1(double u);

/// Integral of exp(e*t) over [a, b]. Stable for any rate, including e = 0.
double exp_segment_integral(double e, double a, double b);

/// Integral of t*exp(f*t) over [c, d].
double texp_segment_integral(double f, double c, double d);

/// Double integral of exp(e*x)*exp(f*y) over the rectangle
/// x in [a, b], y in [c, d].
double exp_rect_integral(double e, double a, double b, double f, double c, double d);

/// Double integral of exp(e*x)*exp(f*y) over the trapezoid
/// y in [c, d], x in [a, b0 - bslope*y].
double exp_trap_integral(double e, double a, double b0, double bslope,
                         double f, double c, double d);

}  // namespace shorake

#endif
