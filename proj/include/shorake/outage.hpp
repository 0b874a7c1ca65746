#ifndef SHORAKE_OUTAGE_HPP
#define SHORAKE_OUTAGE_HPP

#include <span>
#include <vector>

#include "shorake/gsc.hpp"
#include "shorake/joint.hpp"
#include "shorake/quadrature.hpp"
#include "shorake/types.hpp"

namespace shorake {

struct OutagePoint {
    double x = 0.0;
    double probability = 0.0;
    bool below_target = false;
};

/// Outage CDF of the finger replacement scheme, assembled from the
/// closed-form statistics and 2-D quadrature over the (Y, W1) joint density.
///
/// The x >= gamma_t branch carries the sub-threshold mass
/// Pr[Y + max{W_n} < gamma_t] in addition to the two band terms, so the
/// result is a genuine CDF, continuous across x = gamma_t.
class OutageModel {
  public:
    OutageModel(ShoConfig cfg, std::vector<BranchProfile> profiles,
                QuadratureSettings quad = {});

    /// Pr[gamma_t <= Y + W1 < x].
    double prob_band_gsc(double gamma_t, double x) const;

    /// Pr[Y + max{W_1, ..., W_L} < x].
    double prob_final_below(double x) const;

    /// Pr[Y + W1 < gamma_t, gamma_t <= Y + max{W_1, ..., W_L} < x].
    double prob_two_way_band(double gamma_t, double x) const;

    OutagePoint outage_cdf(double x) const;

    /// Evaluates the outage CDF on a grid, dispatching points to a worker
    /// pool; results come back in grid order.
    std::vector<OutagePoint> outage_curve(std::span<const double> x_grid,
                                          int n_threads = 1) const;

    const ShoConfig& config() const { return cfg_; }
    const GscDistribution& serving_gsc() const { return serving_gsc_; }
    const JointDistribution& joint() const { return joint_; }
    const GscDistribution& target_blocks(std::size_t i) const { return targets_[i]; }

  private:
    double target_cdf_product(double x) const;

    ShoConfig cfg_;
    std::vector<BranchProfile> profiles_;
    QuadratureSettings quad_;
    GscDistribution serving_gsc_;
    JointDistribution joint_;
    std::vector<GscDistribution> targets_;
    double final_below_at_target_ = 0.0;
};

}  // namespace shorake

#endif
