#ifndef SHORAKE_QUADRATURE_HPP
#define SHORAKE_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "shorake/types.hpp"

namespace shorake {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// `breaks` lists interior points where the integrand is non-smooth;
/// the interval is pre-split there before refinement.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSettings& settings,
                              const std::vector<double>& breaks = {});

/// Integration region {0 <= y <= y_max, 0 <= w <= g0 + g1*y}.
struct QuadRegion {
    double y_max = 0.0;
    double g0 = 0.0;
    double g1 = 0.0;

    double upper(double y) const { return g0 + g1 * y; }
};

/// Adaptive 2-D integration of f(y, w) over a region with an affine upper
/// boundary, as iterated 1-D Gauss-Kronrod passes. `inner_breaks(y)` may
/// list w-values where the integrand kinks (clipped to the w-range);
/// `outer_breaks` pre-splits the y-range. Throws NonConvergenceError
/// (carrying the best estimate) when the tolerance cannot be met.
QuadratureResult quadrature_2d(
    const std::function<double(double, double)>& f, const QuadRegion& region,
    const QuadratureSettings& settings,
    const std::function<std::vector<double>(double)>& inner_breaks = {},
    const std::vector<double>& outer_breaks = {});

}  // namespace shorake

#endif
