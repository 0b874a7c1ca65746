#include "shorake/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

namespace shorake::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

std::uint64_t CounterRng::substream(std::uint64_t bs) const {
    return mix64(seed_ + (bs + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t key, std::uint64_t counter) {
    const std::uint64_t z = mix64(key + (counter + 1) * kGolden);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::exponential(std::uint64_t key, std::uint64_t counter, double mean) {
    return -mean * std::log(uniform(key, counter));
}

SlotDraw sample_slot(const std::vector<BranchProfile>& profiles, const CounterRng& rng,
                     std::uint64_t slot_index) {
    SlotDraw draw;
    draw.paths.resize(profiles.size());
    for (std::size_t b = 0; b < profiles.size(); ++b) {
        const auto& gammas = profiles[b].gammas;
        const std::uint64_t key = rng.substream(b);
        auto& out = draw.paths[b];
        out.resize(gammas.size());
        const std::uint64_t base = slot_index * gammas.size();
        for (std::size_t j = 0; j < gammas.size(); ++j)
            out[j] = CounterRng::exponential(key, base + j, gammas[j]);
    }
    return draw;
}

BlockSums serving_block_sums(std::span<const double> serving_paths, int n_c, int n_s) {
    std::vector<double> sorted(serving_paths.begin(), serving_paths.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    BlockSums sums;
    for (int i = 0; i < n_c - n_s; ++i) sums.y += sorted[static_cast<std::size_t>(i)];
    for (int i = n_c - n_s; i < n_c; ++i) sums.w1 += sorted[static_cast<std::size_t>(i)];
    return sums;
}

double top_block_sum(std::span<const double> paths, int n_s) {
    std::vector<double> sorted(paths.begin(), paths.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double sum = 0.0;
    for (int i = 0; i < n_s; ++i) sum += sorted[static_cast<std::size_t>(i)];
    return sum;
}

double combine_final_snr(const SlotDraw& draw, const ShoConfig& cfg) {
    const BlockSums sums = serving_block_sums(draw.paths[0], cfg.n_c, cfg.n_s);
    if (sums.y + sums.w1 >= cfg.gamma_t) return sums.y + sums.w1;
    double best = sums.w1;
    for (std::size_t b = 1; b < draw.paths.size(); ++b)
        best = std::max(best, top_block_sum(draw.paths[b], cfg.n_s));
    return sums.y + best;
}

std::vector<double> sample_final_snr(const ShoConfig& cfg,
                                     const std::vector<BranchProfile>& profiles,
                                     std::uint64_t n_samples, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<double> snr(n_samples);
    for (std::uint64_t i = 0; i < n_samples; ++i)
        snr[i] = combine_final_snr(sample_slot(profiles, rng, i), cfg);
    return snr;
}

std::vector<McEstimate> estimate_outage_curve(std::span<const double> x_grid,
                                              const ShoConfig& cfg,
                                              const std::vector<BranchProfile>& profiles,
                                              std::uint64_t n_samples, std::uint64_t seed) {
    std::vector<double> snr = sample_final_snr(cfg, profiles, n_samples, seed);
    std::sort(snr.begin(), snr.end());
    std::vector<McEstimate> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const auto below = std::lower_bound(snr.begin(), snr.end(), x) - snr.begin();
        McEstimate e;
        e.value = static_cast<double>(below) / static_cast<double>(n_samples);
        e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n_samples));
        e.n_samples = n_samples;
        e.seed = seed;
        out.push_back(e);
    }
    return out;
}

std::vector<McEstimate> empirical_cdf(std::span<const double> samples,
                                      std::span<const double> x_grid, std::uint64_t seed) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<McEstimate> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        McEstimate e;
        e.value = static_cast<double>(below) / n;
        e.std_error = std::sqrt(e.value * (1.0 - e.value) / n);
        e.n_samples = sorted.size();
        e.seed = seed;
        out.push_back(e);
    }
    return out;
}

Histogram2d empirical_density_2d(std::span<const double> xs, std::span<const double> ys,
                                 double x_min, double x_max, int nx, double y_min,
                                 double y_max, int ny) {
    if (xs.size() != ys.size()) throw std::invalid_argument("sample arrays must match");
    if (nx < 1 || ny < 1 || !(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("malformed histogram bins");
    Histogram2d h;
    h.x_min = x_min;
    h.x_max = x_max;
    h.y_min = y_min;
    h.y_max = y_max;
    h.nx = nx;
    h.ny = ny;
    h.n_samples = xs.size();
    h.counts.assign(static_cast<std::size_t>(nx) * ny, 0);
    const double wx = h.bin_width_x();
    const double wy = h.bin_width_y();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double y = ys[i];
        if (x < x_min || x >= x_max || y < y_min || y >= y_max) continue;
        const int ix = std::min(static_cast<int>((x - x_min) / wx), nx - 1);
        const int iy = std::min(static_cast<int>((y - y_min) / wy), ny - 1);
        ++h.counts[static_cast<std::size_t>(ix) * ny + iy];
    }
    const double n = static_cast<double>(h.n_samples);
    const double area = wx * wy;
    h.density.resize(h.counts.size());
    h.std_error.resize(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double p = static_cast<double>(h.counts[i]) / n;
        h.density[i] = p / area;
        h.std_error[i] = std::sqrt(p * (1.0 - p) / n) / area;
    }
    return h;
}

}  // namespace shorake::mc
