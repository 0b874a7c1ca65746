#include "shorake/joint.hpp"

#include <algorithm>
#include <cmath>

#include "shorake/combinatorics.hpp"
#include "shorake/exp_integrals.hpp"

namespace shorake {

namespace comb = combinatorics;

namespace {

thread_local std::vector<double> tl_scratch;

struct SetSplit {
    std::vector<int> members;        // chosen identities, ascending
    std::vector<int> complement;     // remaining identities, ascending
    std::vector<double> gammas;      // means of the chosen identities
    double rate_sum = 0.0;           // sum of 1/gamma over the chosen identities
};

SetSplit split_set(const std::vector<int>& pool, std::span<const int> positions,
                   const std::vector<double>& all_gammas) {
    SetSplit s;
    s.members.reserve(positions.size());
    s.complement.reserve(pool.size() - positions.size());
    std::vector<bool> picked(pool.size(), false);
    for (int pos : positions) picked[static_cast<std::size_t>(pos - 1)] = true;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (picked[i])
            s.members.push_back(pool[i]);
        else
            s.complement.push_back(pool[i]);
    }
    s.gammas.reserve(s.members.size());
    for (int id : s.members) {
        const double g = all_gammas[static_cast<std::size_t>(id)];
        s.gammas.push_back(g);
        s.rate_sum += 1.0 / g;
    }
    return s;
}

}  // namespace

JointDistribution::JointDistribution(const BranchProfile& profile, int n_c, int n_s)
    : n_(static_cast<int>(profile.gammas.size())), n_c_(n_c), n_s_(n_s), p_(n_c - n_s) {
    validate_profile(profile);
    if (!(n_s_ >= 1 && p_ >= 1 && n_c_ <= n_))
        throw std::invalid_argument("require 1 <= n_s < n_c <= path count");

    if (p_ >= 2 && n_s_ >= 2) {
        assembly_ = Assembly::general;
        build_general(profile);
    } else if (n_s_ == 1 && p_ >= 2) {
        assembly_ = Assembly::single_bottom;
        build_single_bottom(profile);
    } else if (p_ == 1 && n_s_ >= 2) {
        assembly_ = Assembly::single_top;
        build_single_top(profile);
    } else {
        assembly_ = Assembly::both_single;
        build_both_single(profile);
    }
}

void JointDistribution::build_general(const BranchProfile& profile) {
    const int n = n_;
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 1.0 / profile.gammas[static_cast<std::size_t>(i)];

    const std::uint64_t predicted =
        comb::permutation_count(static_cast<std::size_t>(n), 2) *
        comb::chain_count(1, n - 2, p_ - 1) * comb::chain_count(1, n - p_ - 1, n_s_ - 1) *
        static_cast<std::uint64_t>(p_ - 1) * static_cast<std::uint64_t>(n_s_ - 1) *
        (std::uint64_t{1} << (n_s_ - 1)) * (std::uint64_t{1} << (n - n_c_));
    if (predicted > comb::kTermBudget)
        throw CapacityError("joint pdf expansion exceeds term budget", predicted,
                            comb::kTermBudget);

    comb::IndexSet all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    // Pivot j2 takes rank p (closing the Y block), pivot j4 takes rank n_c
    // (closing the W1 block).
    comb::for_each_permutation(all, 2, [&](std::span<const int> pivots) {
        const int j2 = pivots[0];
        const int j4 = pivots[1];
        std::vector<int> rest;
        rest.reserve(n - 2);
        for (int i : all)
            if (i != j2 && i != j4) rest.push_back(i);

        comb::for_each_chain(1, n - 2, p_ - 1, [&](std::span<const int> ypos) {
            SetSplit sy = split_set(rest, ypos, profile.gammas);

            comb::for_each_chain(1, static_cast<int>(sy.complement.size()), n_s_ - 1,
                                 [&](std::span<const int> wpos) {
                SetSplit sw = split_set(sy.complement, wpos, profile.gammas);

                std::vector<double> leftover_rates;
                leftover_rates.reserve(sw.complement.size());
                for (int id : sw.complement) leftover_rates.push_back(lam[static_cast<std::size_t>(id)]);
                const auto g_terms = comb::product_to_sum(leftover_rates);

                std::vector<double> sw_rates;
                sw_rates.reserve(sw.members.size());
                for (int id : sw.members) sw_rates.push_back(lam[static_cast<std::size_t>(id)]);
                const auto j_terms = comb::product_to_sum(sw_rates);

                for (int hp = 1; hp <= p_ - 1; ++hp) {
                    const double c_h = comb::coefficient_c(hp, 1, p_ - 1, sy.gammas);
                    const double lam_h = 1.0 / sy.gammas[static_cast<std::size_t>(hp - 1)];
                    for (int kp = 1; kp <= n_s_ - 1; ++kp) {
                        const double c_k = comb::coefficient_c(kp, 1, n_s_ - 1, sw.gammas);
                        const double lam_k = 1.0 / sw.gammas[static_cast<std::size_t>(kp - 1)];
                        const double base =
                            lam[static_cast<std::size_t>(j2)] * lam[static_cast<std::size_t>(j4)] *
                            c_h * c_k;  // (-c_h)(-c_k) = c_h*c_k
                        for (const auto& jt : j_terms) {
                            const int l = static_cast<int>(jt.subset.size());
                            const double z2_rate = -(sy.rate_sum + lam[static_cast<std::size_t>(j2)] +
                                                     jt.rate_sum - p_ * lam_h - l * lam_k);
                            for (const auto& gt : g_terms) {
                                GeneralTerm t;
                                t.coef = base * jt.sign * gt.sign;
                                t.lam_h = lam_h;
                                t.lam_k = lam_k;
                                t.z2_rate = z2_rate;
                                t.z4_rate = -(lam[static_cast<std::size_t>(j4)] + sw.rate_sum -
                                              jt.rate_sum + gt.rate_sum - (n_s_ - l) * lam_k);
                                t.l = l;
                                general_.push_back(t);
                            }
                        }
                    }
                }
            });
        });
    });
}

void JointDistribution::build_single_bottom(const BranchProfile& profile) {
    const int n = n_;
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 1.0 / profile.gammas[static_cast<std::size_t>(i)];

    comb::IndexSet all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    comb::for_each_permutation(all, 2, [&](std::span<const int> pivots) {
        const int j2 = pivots[0];
        const int j4 = pivots[1];
        std::vector<int> rest;
        rest.reserve(n - 2);
        for (int i : all)
            if (i != j2 && i != j4) rest.push_back(i);

        comb::for_each_chain(1, n - 2, p_ - 1, [&](std::span<const int> ypos) {
            SetSplit sy = split_set(rest, ypos, profile.gammas);

            std::vector<double> leftover_rates;
            leftover_rates.reserve(sy.complement.size());
            for (int id : sy.complement) leftover_rates.push_back(lam[static_cast<std::size_t>(id)]);
            const auto g_terms = comb::product_to_sum(leftover_rates);

            for (int hp = 1; hp <= p_ - 1; ++hp) {
                const double c_h = comb::coefficient_c(hp, 1, p_ - 1, sy.gammas);
                const double lam_h = 1.0 / sy.gammas[static_cast<std::size_t>(hp - 1)];
                const double z2_rate =
                    -(sy.rate_sum + lam[static_cast<std::size_t>(j2)] - p_ * lam_h);
                for (const auto& gt : g_terms) {
                    SingleBottomTerm t;
                    t.coef = lam[static_cast<std::size_t>(j2)] * lam[static_cast<std::size_t>(j4)] *
                             (-c_h) * gt.sign;
                    t.lam_h = lam_h;
                    t.w_rate = lam[static_cast<std::size_t>(j4)] + gt.rate_sum;
                    t.z2_rate = z2_rate;
                    single_bottom_.push_back(t);
                }
            }
        });
    });
}

void JointDistribution::build_single_top(const BranchProfile& profile) {
    const int n = n_;
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 1.0 / profile.gammas[static_cast<std::size_t>(i)];

    comb::IndexSet all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    comb::for_each_permutation(all, 2, [&](std::span<const int> pivots) {
        const int j2 = pivots[0];
        const int j4 = pivots[1];
        std::vector<int> rest;
        rest.reserve(n - 2);
        for (int i : all)
            if (i != j2 && i != j4) rest.push_back(i);

        comb::for_each_chain(1, n - 2, n_s_ - 1, [&](std::span<const int> wpos) {
            SetSplit sw = split_set(rest, wpos, profile.gammas);

            std::vector<double> leftover_rates;
            leftover_rates.reserve(sw.complement.size());
            for (int id : sw.complement) leftover_rates.push_back(lam[static_cast<std::size_t>(id)]);
            const auto g_terms = comb::product_to_sum(leftover_rates);

            std::vector<double> sw_rates;
            sw_rates.reserve(sw.members.size());
            for (int id : sw.members) sw_rates.push_back(lam[static_cast<std::size_t>(id)]);
            const auto j_terms = comb::product_to_sum(sw_rates);

            for (int kp = 1; kp <= n_s_ - 1; ++kp) {
                const double c_k = comb::coefficient_c(kp, 1, n_s_ - 1, sw.gammas);
                const double lam_k = 1.0 / sw.gammas[static_cast<std::size_t>(kp - 1)];
                for (const auto& jt : j_terms) {
                    const int l = static_cast<int>(jt.subset.size());
                    const double x_rate =
                        lam[static_cast<std::size_t>(j2)] + jt.rate_sum - l * lam_k;
                    for (const auto& gt : g_terms) {
                        SingleTopTerm t;
                        t.coef = lam[static_cast<std::size_t>(j2)] *
                                 lam[static_cast<std::size_t>(j4)] * (-c_k) * jt.sign * gt.sign;
                        t.x_rate = x_rate;
                        t.lam_k = lam_k;
                        t.z4_rate = -(lam[static_cast<std::size_t>(j4)] + sw.rate_sum -
                                      jt.rate_sum + gt.rate_sum - (n_s_ - l) * lam_k);
                        t.l = l;
                        single_top_.push_back(t);
                    }
                }
            }
        });
    });
}

void JointDistribution::build_both_single(const BranchProfile& profile) {
    const int n = n_;
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 1.0 / profile.gammas[static_cast<std::size_t>(i)];

    comb::IndexSet all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    comb::for_each_permutation(all, 2, [&](std::span<const int> pivots) {
        const int j2 = pivots[0];
        const int j4 = pivots[1];
        std::vector<double> leftover_rates;
        leftover_rates.reserve(n - 2);
        for (int i : all)
            if (i != j2 && i != j4) leftover_rates.push_back(lam[static_cast<std::size_t>(i)]);
        const auto g_terms = comb::product_to_sum(leftover_rates);
        for (const auto& gt : g_terms) {
            BothSingleTerm t;
            t.coef = lam[static_cast<std::size_t>(j2)] * lam[static_cast<std::size_t>(j4)] * gt.sign;
            t.x_rate = lam[static_cast<std::size_t>(j2)];
            t.y_rate = lam[static_cast<std::size_t>(j4)] + gt.rate_sum;
            both_single_.push_back(t);
        }
    });
}

double JointDistribution::pdf(double y, double w) const {
    if (y < 0.0 || w < 0.0) return 0.0;
    if (w * p_ > y * n_s_) return 0.0;  // ordering support: w/n_s <= y/p

    auto& buf = tl_scratch;
    switch (assembly_) {
        case Assembly::general: {
            const double z2_lo = w / n_s_;
            const double z2_hi = y / p_;
            buf.resize(general_.size());
            for (std::size_t t = 0; t < general_.size(); ++t) {
                const auto& g = general_[t];
                double r;
                if (g.l == 0) {
                    r = exp_rect_integral(g.z2_rate, z2_lo, z2_hi, g.z4_rate, 0.0, z2_lo);
                } else {
                    // The step U(w - l z2 - (n_s - l) z4) caps z2 by an affine
                    // function of z4; below z4* the cap exceeds z2_hi.
                    const double z4_star = (w - g.l * z2_hi) / (n_s_ - g.l);
                    const double z4_split = std::clamp(z4_star, 0.0, z2_lo);
                    r = 0.0;
                    if (z4_split > 0.0)
                        r += exp_rect_integral(g.z2_rate, z2_lo, z2_hi, g.z4_rate, 0.0, z4_split);
                    r += exp_trap_integral(g.z2_rate, z2_lo, w / g.l,
                                           static_cast<double>(n_s_ - g.l) / g.l, g.z4_rate,
                                           z4_split, z2_lo);
                }
                buf[t] = g.coef * std::exp(-g.lam_h * y - g.lam_k * w) * r;
            }
            return std::max(pairwise_sum(buf), 0.0);
        }
        case Assembly::single_bottom: {
            const double z2_hi = y / p_;
            buf.resize(single_bottom_.size());
            for (std::size_t t = 0; t < single_bottom_.size(); ++t) {
                const auto& g = single_bottom_[t];
                buf[t] = g.coef * std::exp(-g.lam_h * y - g.w_rate * w) *
                         exp_segment_integral(g.z2_rate, w, z2_hi);
            }
            return std::max(pairwise_sum(buf), 0.0);
        }
        case Assembly::single_top: {
            buf.resize(single_top_.size());
            for (std::size_t t = 0; t < single_top_.size(); ++t) {
                const auto& g = single_top_[t];
                double hi = w / n_s_;
                if (g.l > 0) hi = std::min(hi, (w - g.l * y) / (n_s_ - g.l));
                buf[t] = hi <= 0.0 ? 0.0
                                   : g.coef * std::exp(-g.x_rate * y - g.lam_k * w) *
                                         exp_segment_integral(g.z4_rate, 0.0, hi);
            }
            return std::max(pairwise_sum(buf), 0.0);
        }
        case Assembly::both_single: {
            buf.resize(both_single_.size());
            for (std::size_t t = 0; t < both_single_.size(); ++t) {
                const auto& g = both_single_[t];
                buf[t] = g.coef * std::exp(-g.x_rate * y - g.y_rate * w);
            }
            return std::max(pairwise_sum(buf), 0.0);
        }
    }
    return 0.0;
}

std::vector<double> JointDistribution::kink_slopes() const {
    std::vector<double> slopes;
    slopes.reserve(static_cast<std::size_t>(n_s_));
    for (int l = 1; l <= n_s_; ++l)
        slopes.push_back(static_cast<double>(l) / p_);
    return slopes;
}

std::size_t JointDistribution::term_count() const {
    switch (assembly_) {
        case Assembly::general: return general_.size();
        case Assembly::single_bottom: return single_bottom_.size();
        case Assembly::single_top: return single_top_.size();
        case Assembly::both_single: return both_single_.size();
    }
    return 0;
}

double joint_pdf_y_w1(double y, double w, const BranchProfile& profile, int n_c, int n_s) {
    return JointDistribution(profile, n_c, n_s).pdf(y, w);
}

}  // namespace shorake
