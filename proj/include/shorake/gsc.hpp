#ifndef SHORAKE_GSC_HPP
#define SHORAKE_GSC_HPP

#include <cstddef>
#include <vector>

#include "shorake/types.hpp"

namespace shorake {

/// Closed-form distribution of the sum of the n_combine largest of n_total
/// independent exponential path SNRs with distinct means.
///
/// Construction expands the order-statistics decomposition into a signed
/// exponential series; evaluation at any point is then a weighted sum
/// cdf(x) = sum_t w_t (1 - exp(-r_t x)) with sum_t w_t = 1.
class GscDistribution {
  public:
    GscDistribution(const BranchProfile& profile, const GscSpec& spec);

    double cdf(double x) const;
    double pdf(double x) const;
    double mean() const;

    std::size_t term_count() const { return rates_.size(); }
    const GscSpec& spec() const { return spec_; }

  private:
    GscSpec spec_;
    std::vector<double> weights_;
    std::vector<double> rates_;
};

double gsc_cdf(double x, const BranchProfile& profile, const GscSpec& spec);
double gsc_pdf(double z, const BranchProfile& profile, const GscSpec& spec);

/// CDF of the sum of the n_s strongest paths of a target base station.
/// Same machinery as the GSC output CDF with the block size substituted.
double best_ns_sum_cdf(double x, const BranchProfile& profile, const GscSpec& spec);

}  // namespace shorake

#endif
