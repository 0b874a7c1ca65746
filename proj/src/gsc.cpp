#include "shorake/gsc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "shorake/combinatorics.hpp"

namespace shorake {

namespace comb = combinatorics;

namespace {

thread_local std::vector<double> tl_scratch;

}  // namespace

GscDistribution::GscDistribution(const BranchProfile& profile, const GscSpec& spec)
    : spec_(spec) {
    validate_profile(profile);
    const int n = spec.n_total;
    const int k = spec.n_combine;
    if (n != static_cast<int>(profile.gammas.size()))
        throw std::invalid_argument("spec n_total must match profile length");
    if (!(k >= 1 && k <= n))
        throw std::invalid_argument("require 1 <= n_combine <= n_total");

    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 1.0 / profile.gammas[i];

    // Accumulate weight per distinct rate; std::map keeps the series in a
    // deterministic order independent of enumeration details.
    std::map<double, double> acc;

    if (k == 1) {
        // Maximum of n variates: the CDF product expands directly.
        auto terms = comb::product_to_sum(lam);
        for (const auto& t : terms) {
            if (t.subset.empty()) continue;
            acc[t.rate_sum] += -static_cast<double>(t.sign);
        }
    } else {
        const std::uint64_t predicted = static_cast<std::uint64_t>(n) *
                                        comb::chain_count(1, n - 1, k - 1) *
                                        static_cast<std::uint64_t>(k - 1) *
                                        (std::uint64_t{1} << (n - k)) * 2;
        if (predicted > comb::kTermBudget)
            throw CapacityError("gsc expansion exceeds term budget", predicted,
                                comb::kTermBudget);

        comb::IndexSet all(n);
        for (int i = 0; i < n; ++i) all[i] = i;

        // Pivot j takes the k-th rank; S occupies ranks 1..k-1; leftovers
        // stay below the pivot and enter via the product-to-sum expansion.
        comb::for_each_permutation(all, 1, [&](std::span<const int> pivot) {
            const int j = pivot[0];
            comb::IndexSet rest;
            rest.reserve(n - 1);
            for (int i : all)
                if (i != j) rest.push_back(i);

            comb::for_each_chain(1, n - 1, k - 1, [&](std::span<const int> pos) {
                std::vector<int> s_members(pos.size());
                std::vector<bool> in_s(rest.size(), false);
                for (std::size_t m = 0; m < pos.size(); ++m) {
                    in_s[static_cast<std::size_t>(pos[m] - 1)] = true;
                    s_members[m] = rest[static_cast<std::size_t>(pos[m] - 1)];
                }
                std::vector<double> s_gammas(s_members.size());
                double lam_s = 0.0;
                for (std::size_t m = 0; m < s_members.size(); ++m) {
                    s_gammas[m] = profile.gammas[static_cast<std::size_t>(s_members[m])];
                    lam_s += lam[static_cast<std::size_t>(s_members[m])];
                }
                std::vector<double> leftover_rates;
                leftover_rates.reserve(rest.size() - s_members.size());
                for (std::size_t m = 0; m < rest.size(); ++m)
                    if (!in_s[m]) leftover_rates.push_back(lam[static_cast<std::size_t>(rest[m])]);

                const auto expansion = comb::product_to_sum(leftover_rates);

                for (int ip = 1; ip <= k - 1; ++ip) {
                    const double c_i = comb::coefficient_c(ip, 1, k - 1, s_gammas);
                    const double lam_i = 1.0 / s_gammas[static_cast<std::size_t>(ip - 1)];
                    for (const auto& g : expansion) {
                        const double a = lam[static_cast<std::size_t>(j)] + lam_s + g.rate_sum;
                        const double den = a - k * lam_i;
                        if (std::abs(den) < 1e-9 * (a + k * lam_i)) {
                            std::vector<int> idx(s_members);
                            idx.push_back(j);
                            throw SingularityError(
                                "degenerate exponential-rate combination in gsc expansion",
                                std::move(idx), den);
                        }
                        const double tc = lam[static_cast<std::size_t>(j)] * (-c_i) *
                                          static_cast<double>(g.sign) / den;
                        acc[lam_i] += tc / lam_i;
                        acc[a / k] += -tc * k / a;
                    }
                }
            });
        });
    }

    weights_.reserve(acc.size());
    rates_.reserve(acc.size());
    for (const auto& [rate, weight] : acc) {
        rates_.push_back(rate);
        weights_.push_back(weight);
    }
}

double GscDistribution::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    auto& buf = tl_scratch;
    buf.resize(rates_.size());
    for (std::size_t t = 0; t < rates_.size(); ++t)
        buf[t] = weights_[t] * -std::expm1(-rates_[t] * x);
    return std::clamp(pairwise_sum(buf), 0.0, 1.0);
}

double GscDistribution::pdf(double z) const {
    if (z < 0.0) return 0.0;
    auto& buf = tl_scratch;
    buf.resize(rates_.size());
    for (std::size_t t = 0; t < rates_.size(); ++t)
        buf[t] = weights_[t] * rates_[t] * std::exp(-rates_[t] * z);
    return std::max(pairwise_sum(buf), 0.0);
}

double GscDistribution::mean() const {
    auto& buf = tl_scratch;
    buf.resize(rates_.size());
    for (std::size_t t = 0; t < rates_.size(); ++t) buf[t] = weights_[t] / rates_[t];
    return pairwise_sum(buf);
}

double gsc_cdf(double x, const BranchProfile& profile, const GscSpec& spec) {
    return GscDistribution(profile, spec).cdf(x);
}

double gsc_pdf(double z, const BranchProfile& profile, const GscSpec& spec) {
    return GscDistribution(profile, spec).pdf(z);
}

double best_ns_sum_cdf(double x, const BranchProfile& profile, const GscSpec& spec) {
    return GscDistribution(profile, spec).cdf(x);
}

}  // namespace shorake
