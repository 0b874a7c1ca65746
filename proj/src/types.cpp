#include "shorake/types.hpp"

#include <algorithm>

namespace shorake {

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum_impl(v, h) + pairwise_sum_impl(v + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_impl(values.data(), values.size());
}

void validate_profile(const BranchProfile& profile) {
    if (profile.gammas.empty())
        throw std::invalid_argument("branch profile must contain at least one path");
    for (double g : profile.gammas)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("branch profile means must be finite and positive");
}

void validate_sho_config(const ShoConfig& cfg, const std::vector<BranchProfile>& profiles) {
    if (cfg.l < 2) throw std::invalid_argument("sho config requires at least two base stations");
    if (static_cast<int>(profiles.size()) != cfg.l ||
        static_cast<int>(cfg.n_paths.size()) != cfg.l)
        throw std::invalid_argument("profile count must match base-station count");
    int min_n = cfg.n_paths[0];
    for (int i = 0; i < cfg.l; ++i) {
        if (cfg.n_paths[i] < 1) throw std::invalid_argument("path counts must be positive");
        if (static_cast<int>(profiles[i].gammas.size()) != cfg.n_paths[i])
            throw std::invalid_argument("profile length must equal the path count of its BS");
        validate_profile(profiles[i]);
        min_n = std::min(min_n, cfg.n_paths[i]);
    }
    if (!(cfg.n_s >= 1 && cfg.n_s < cfg.n_c && cfg.n_c < min_n))
        throw std::invalid_argument("require n_s < n_c < min path count");
    if (!(cfg.gamma_t >= 0.0) || !std::isfinite(cfg.gamma_t))
        throw std::invalid_argument("gamma_t must be finite and nonnegative");
}

}  // namespace shorake
