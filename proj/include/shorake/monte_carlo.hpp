#ifndef SHORAKE_MONTE_CARLO_HPP
#define SHORAKE_MONTE_CARLO_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "shorake/types.hpp"

namespace shorake::mc {

/// SplitMix64 used in counter mode: the value for stream element i is the
/// SplitMix64 finalizer applied to key + (i+1)*golden-gamma. Draws are
/// addressed by (base station, slot, path), so estimates do not depend on
/// how sampling is sharded across workers.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Substream key for one base station (0-based).
    std::uint64_t substream(std::uint64_t bs) const;

    /// Uniform draw in (0, 1), strictly inside the interval.
    static double uniform(std::uint64_t key, std::uint64_t counter);

    /// Inverse-transform exponential draw with the given mean.
    static double exponential(std::uint64_t key, std::uint64_t counter, double mean);

  private:
    std::uint64_t seed_;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// One time slot: the unordered path SNRs of every base station.
struct SlotDraw {
    std::vector<std::vector<double>> paths;
};

SlotDraw sample_slot(const std::vector<BranchProfile>& profiles, const CounterRng& rng,
                     std::uint64_t slot_index);

struct BlockSums {
    double y = 0.0;
    double w1 = 0.0;
};

/// Sorts the serving-BS paths descending and splits the strongest n_c into
/// the leading n_c - n_s (Y) and trailing n_s (W1) blocks.
BlockSums serving_block_sums(std::span<const double> serving_paths, int n_c, int n_s);

/// Sum of the n_s strongest entries.
double top_block_sum(std::span<const double> paths, int n_s);

/// Final combined SNR of the replacement scheme: Y + W1 when that reaches
/// gamma_t, otherwise Y plus the best n_s-path block over all base stations.
double combine_final_snr(const SlotDraw& draw, const ShoConfig& cfg);

/// Simulates the full mode of operation and evaluates Pr[snr < x] on the
/// grid with one shared sample set (common random numbers).
std::vector<McEstimate> estimate_outage_curve(std::span<const double> x_grid,
                                              const ShoConfig& cfg,
                                              const std::vector<BranchProfile>& profiles,
                                              std::uint64_t n_samples, std::uint64_t seed);

/// Draws of the final combined SNR, one per slot.
std::vector<double> sample_final_snr(const ShoConfig& cfg,
                                     const std::vector<BranchProfile>& profiles,
                                     std::uint64_t n_samples, std::uint64_t seed);

std::vector<McEstimate> empirical_cdf(std::span<const double> samples,
                                      std::span<const double> x_grid, std::uint64_t seed = 0);

struct Histogram2d {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    int nx = 0, ny = 0;
    std::uint64_t n_samples = 0;
    std::vector<std::uint64_t> counts;  // row-major [ix*ny + iy]
    std::vector<double> density;        // counts / (n * bin area); 0 when unobserved
    std::vector<double> std_error;      // binomial SE of the density estimate

    double bin_width_x() const { return (x_max - x_min) / nx; }
    double bin_width_y() const { return (y_max - y_min) / ny; }
};

Histogram2d empirical_density_2d(std::span<const double> xs, std::span<const double> ys,
                                 double x_min, double x_max, int nx, double y_min,
                                 double y_max, int ny);

}  // namespace shorake::mc

#endif
