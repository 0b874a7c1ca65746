#ifndef SHORAKE_PDP_HPP
#define SHORAKE_PDP_HPP

#include <string>
#include <vector>

#include "shorake/types.hpp"

namespace shorake::pdp {

enum class Kind { exponential, uniform, explicit_values };

struct PdpSpec {
    Kind kind = Kind::exponential;
    double gamma_bar = 1.0;  // first-path mean SNR, linear
    double delta = 0.0;      // power decay factor
    std::vector<double> values;
};

/// Exponential multipath intensity profile: gamma_i = gamma_bar*exp(-delta*(i-1)).
BranchProfile exponential_mip(double gamma_bar, double delta, int n, int bs_id = 1);

BranchProfile uniform_profile(double gamma_bar, int n, int bs_id = 1);

BranchProfile explicit_profile(std::vector<double> values, int bs_id = 1);

BranchProfile make_profile(const PdpSpec& spec, int n, int bs_id = 1);

/// Spreads groups of (near-)equal means by factors (1 + k*rel_epsilon) so
/// the distinct-pole closed forms apply; already-distinct profiles pass
/// through unchanged.
BranchProfile apply_distinctness_jitter(const BranchProfile& profile,
                                        double rel_epsilon = 1e-9);

}  // namespace shorake::pdp

#endif
