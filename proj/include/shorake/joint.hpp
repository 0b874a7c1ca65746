#ifndef SHORAKE_JOINT_HPP
#define SHORAKE_JOINT_HPP

#include <cstddef>
#include <vector>

#include "shorake/types.hpp"

namespace shorake {

/// Closed-form joint density of the two adjacent partial sums of ordered
/// path SNRs from one base station:
///
///   Y  = sum of the strongest (n_c - n_s) paths,
///   W1 = sum of the next n_s paths (ranks n_c - n_s + 1 .. n_c).
///
/// The density vanishes off the ordering support w/n_s <= y/(n_c - n_s).
/// Construction expands the index structure once; evaluation reuses the
/// cached rate aggregates. Four assemblies cover the block-size cases:
/// both blocks multi-path, a single-path first block, a single-path second
/// block, and both blocks single paths.
class JointDistribution {
  public:
    JointDistribution(const BranchProfile& profile, int n_c, int n_s);

    /// Density at Y = y, W1 = w.
    double pdf(double y, double w) const;

    int n_c() const { return n_c_; }
    int n_s() const { return n_s_; }
    int top_block() const { return p_; }

    /// w = support_slope() * y bounds the support from above.
    double support_slope() const { return static_cast<double>(n_s_) / p_; }

    /// Slopes of the w = s*y lines where the density is non-smooth
    /// (piecewise integral limits switch); the last one is the support edge.
    std::vector<double> kink_slopes() const;

    std::size_t term_count() const;

  private:
    enum class Assembly { general, single_top, single_bottom, both_single };

    struct GeneralTerm {
        double coef, lam_h, lam_k, z2_rate, z4_rate;
        int l;
    };
    struct SingleBottomTerm {  // n_s == 1
        double coef, lam_h, w_rate, z2_rate;
    };
    struct SingleTopTerm {  // n_c - n_s == 1
        double coef, x_rate, lam_k, z4_rate;
        int l;
    };
    struct BothSingleTerm {  // n_c == 2, n_s == 1
        double coef, x_rate, y_rate;
    };

    void build_general(const BranchProfile& profile);
    void build_single_bottom(const BranchProfile& profile);
    void build_single_top(const BranchProfile& profile);
    void build_both_single(const BranchProfile& profile);

    int n_ = 0, n_c_ = 0, n_s_ = 0, p_ = 0;
    Assembly assembly_ = Assembly::general;
    std::vector<GeneralTerm> general_;
    std::vector<SingleBottomTerm> single_bottom_;
    std::vector<SingleTopTerm> single_top_;
    std::vector<BothSingleTerm> both_single_;
};

double joint_pdf_y_w1(double y, double w, const BranchProfile& profile, int n_c, int n_s);

}  // namespace shorake

#endif
