#include "shorake/outage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace shorake {

namespace {

GscDistribution make_serving(const ShoConfig& cfg, const std::vector<BranchProfile>& profiles) {
    validate_sho_config(cfg, profiles);
    return GscDistribution(profiles.at(0), GscSpec{cfg.n_paths.at(0), cfg.n_c});
}

}  // namespace

OutageModel::OutageModel(ShoConfig cfg, std::vector<BranchProfile> profiles,
                         QuadratureSettings quad)
    : cfg_(std::move(cfg)),
      profiles_(std::move(profiles)),
      quad_(quad),
      serving_gsc_(make_serving(cfg_, profiles_)),
      joint_(profiles_.at(0), cfg_.n_c, cfg_.n_s) {
    targets_.reserve(static_cast<std::size_t>(cfg_.l - 1));
    for (int b = 1; b < cfg_.l; ++b)
        targets_.emplace_back(profiles_[static_cast<std::size_t>(b)],
                              GscSpec{cfg_.n_paths[static_cast<std::size_t>(b)], cfg_.n_s});
    final_below_at_target_ = prob_final_below(cfg_.gamma_t);
}

double OutageModel::target_cdf_product(double x) const {
    double prod = 1.0;
    for (const auto& t : targets_) prod *= t.cdf(x);
    return prod;
}

double OutageModel::prob_band_gsc(double gamma_t, double x) const {
    if (x <= gamma_t) return 0.0;
    return std::max(serving_gsc_.cdf(x) - serving_gsc_.cdf(gamma_t), 0.0);
}

double OutageModel::prob_final_below(double x) const {
    if (x <= 0.0) return 0.0;
    // Integrate f_{Y,W1}(y, w) * prod_n F_{W_n}(x - y) over the triangle
    // {0 <= y <= x, 0 <= w <= x - y}. The product only depends on y; cache
    // it across the inner w sweep.
    double cached_y = -1.0, cached_prod = 0.0;
    auto integrand = [&](double y, double w) {
        if (y != cached_y) {
            cached_y = y;
            cached_prod = target_cdf_product(x - y);
        }
        return joint_.pdf(y, w) * cached_prod;
    };
    const auto slopes = joint_.kink_slopes();
    auto inner_breaks = [&slopes](double y) {
        std::vector<double> b;
        b.reserve(slopes.size());
        for (double s : slopes) b.push_back(s * y);
        return b;
    };
    std::vector<double> outer_breaks;
    outer_breaks.reserve(slopes.size());
    for (double s : slopes) outer_breaks.push_back(x / (1.0 + s));

    QuadratureResult r = quadrature_2d(integrand, QuadRegion{x, x, -1.0}, quad_,
                                       inner_breaks, outer_breaks);
    return std::clamp(r.value, 0.0, 1.0);
}

double OutageModel::prob_two_way_band(double gamma_t, double x) const {
    if (!(gamma_t > 0.0) || x <= gamma_t) return 0.0;
    double cached_y = -1.0, cached_hi = 0.0, cached_lo = 0.0;
    auto integrand = [&](double y, double w) {
        if (y != cached_y) {
            cached_y = y;
            cached_hi = target_cdf_product(x - y);
            cached_lo = target_cdf_product(gamma_t - y);
        }
        return joint_.pdf(y, w) * (cached_hi - cached_lo);
    };
    const auto slopes = joint_.kink_slopes();
    auto inner_breaks = [&slopes](double y) {
        std::vector<double> b;
        b.reserve(slopes.size());
        for (double s : slopes) b.push_back(s * y);
        return b;
    };
    std::vector<double> outer_breaks;
    outer_breaks.reserve(slopes.size());
    for (double s : slopes) outer_breaks.push_back(gamma_t / (1.0 + s));

    QuadratureResult r = quadrature_2d(integrand, QuadRegion{gamma_t, gamma_t, -1.0}, quad_,
                                       inner_breaks, outer_breaks);
    return std::clamp(r.value, 0.0, 1.0);
}

OutagePoint OutageModel::outage_cdf(double x) const {
    OutagePoint point;
    point.x = x;
    point.below_target = x < cfg_.gamma_t;
    if (x <= 0.0) return point;
    if (point.below_target) {
        point.probability = prob_final_below(x);
    } else {
        point.probability = std::clamp(final_below_at_target_ +
                                           prob_band_gsc(cfg_.gamma_t, x) +
                                           prob_two_way_band(cfg_.gamma_t, x),
                                       0.0, 1.0);
    }
    return point;
}

std::vector<OutagePoint> OutageModel::outage_curve(std::span<const double> x_grid,
                                                   int n_threads) const {
    std::vector<OutagePoint> out(x_grid.size());
    const int workers = std::max(1, std::min<int>(n_threads, static_cast<int>(x_grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < x_grid.size(); ++i) out[i] = outage_cdf(x_grid[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= x_grid.size()) return;
            try {
                out[i] = outage_cdf(x_grid[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace shorake
