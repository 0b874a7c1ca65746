#include "shorake/pdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shorake::pdp {

BranchProfile exponential_mip(double gamma_bar, double delta, int n, int bs_id) {
    if (n < 1) throw std::invalid_argument("path count must be at least 1");
    if (!(gamma_bar > 0.0)) throw std::invalid_argument("gamma_bar must be positive");
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
    BranchProfile p;
    p.bs_id = bs_id;
    p.gammas.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p.gammas[static_cast<std::size_t>(i)] = gamma_bar * std::exp(-delta * i);
    return p;
}

BranchProfile uniform_profile(double gamma_bar, int n, int bs_id) {
    return exponential_mip(gamma_bar, 0.0, n, bs_id);
}

BranchProfile explicit_profile(std::vector<double> values, int bs_id) {
    BranchProfile p;
    p.bs_id = bs_id;
    p.gammas = std::move(values);
    validate_profile(p);
    return p;
}

BranchProfile make_profile(const PdpSpec& spec, int n, int bs_id) {
    switch (spec.kind) {
        case Kind::exponential: return exponential_mip(spec.gamma_bar, spec.delta, n, bs_id);
        case Kind::uniform: return uniform_profile(spec.gamma_bar, n, bs_id);
        case Kind::explicit_values: return explicit_profile(spec.values, bs_id);
    }
    throw std::invalid_argument("unknown pdp kind");
}

BranchProfile apply_distinctness_jitter(const BranchProfile& profile, double rel_epsilon) {
    if (!(rel_epsilon >= 1e-12 && rel_epsilon <= 1e-6))
        throw std::invalid_argument("rel_epsilon must lie in [1e-12, 1e-6]");
    validate_profile(profile);

    const std::size_t n = profile.gammas.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return profile.gammas[a] < profile.gammas[b];
    });

    BranchProfile out = profile;
    // Walk values in ascending order; members within rel_epsilon of the
    // group base get spread by (1 + k*rel_epsilon), k = 0, 1, 2, ...
    std::size_t i = 0;
    while (i < n) {
        const double base = out.gammas[order[i]];
        std::size_t j = i + 1;
        while (j < n && profile.gammas[order[j]] <= base * (1.0 + rel_epsilon)) ++j;
        for (std::size_t k = i; k < j; ++k)
            out.gammas[order[k]] = profile.gammas[order[k]] * (1.0 + static_cast<double>(k - i) * rel_epsilon);
        i = j;
    }
    return out;
}

}  // namespace shorake::pdp
