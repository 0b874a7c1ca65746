#ifndef SHORAKE_TYPES_HPP
#define SHORAKE_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shorake {

/// Per-base-station channel description: the average SNR of each resolvable
/// path, linear scale, strictly positive. Closed forms additionally require
/// pairwise-distinct entries (see pdp::apply_distinctness_jitter).
struct BranchProfile {
    std::vector<double> gammas;
    int bs_id = 1;

    std::size_t n_paths() const { return gammas.size(); }
};

/// Selection parameters for one combining stage: keep the n_combine
/// strongest of n_total paths.
struct GscSpec {
    int n_total = 0;
    int n_combine = 0;
};

/// Full soft-handover system: L base stations (index 1 = serving), finger
/// budget n_c, replacement block size n_s, target SNR gamma_t (linear).
struct ShoConfig {
    int l = 0;
    std::vector<int> n_paths;
    int n_c = 0;
    int n_s = 0;
    double gamma_t = 0.0;
};

struct QuadratureSettings {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    int max_depth = 20;
};

enum class CurveSource { closed_form, monte_carlo };

struct ProbabilityCurve {
    std::vector<double> x;
    std::vector<double> p;
    CurveSource source = CurveSource::closed_form;
};

/// Raised when a partial-fraction denominator collapses, i.e. two average
/// SNRs are too close for the distinct-pole formula family.
class SingularityError : public std::runtime_error {
  public:
    SingularityError(std::string what, std::vector<int> indices, double denominator)
        : std::runtime_error(std::move(what)),
          indices(std::move(indices)),
          denominator(denominator) {}
    std::vector<int> indices;
    double denominator = 0.0;
};

/// Raised when an enumeration would exceed the term budget.
class CapacityError : public std::runtime_error {
  public:
    CapacityError(std::string what, std::uint64_t requested, std::uint64_t limit)
        : std::runtime_error(std::move(what)), requested(requested), limit(limit) {}
    std::uint64_t requested = 0;
    std::uint64_t limit = 0;
};

/// Raised when adaptive quadrature cannot reach the requested tolerance;
/// carries the best estimate and the achieved error bound.
class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(std::string what, double best_estimate, double achieved_error)
        : std::runtime_error(std::move(what)),
          best_estimate(best_estimate),
          achieved_error(achieved_error) {}
    double best_estimate = 0.0;
    double achieved_error = 0.0;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Pairwise (tree) summation. The closed-form series are highly
/// cancellatory; a naive left fold loses digits.
double pairwise_sum(std::span<const double> values);

void validate_profile(const BranchProfile& profile);
void validate_sho_config(const ShoConfig& cfg, const std::vector<BranchProfile>& profiles);

}  // namespace shorake

#endif
