#ifndef SHORAKE_COMBINATORICS_HPP
#define SHORAKE_COMBINATORICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "shorake/types.hpp"

namespace shorake::combinatorics {

/// Enumerations refuse to produce more than this many terms.
inline constexpr std::uint64_t kTermBudget = 10'000'000;

using IndexSet = std::vector<int>;
using PermutationTuple = std::vector<int>;

/// One term of a (1 - e^{-a_1 t})...(1 - e^{-a_n t}) expansion:
/// sign * exp(-rate_sum * t) with rate_sum the sum over `subset`
/// (0-based positions into the rate vector, strictly increasing).
struct ExpansionTerm {
    int sign = 1;
    std::vector<int> subset;
    double rate_sum = 0.0;
};

std::uint64_t permutation_count(std::size_t set_size, int k);
std::uint64_t chain_count(int lo, int hi, int depth);

/// Visits all ordered k-tuples drawn without repetition from `set`, in
/// lexicographic order of the index tuple. k == 0 visits one empty tuple.
void for_each_permutation(const IndexSet& set, int k,
                          const std::function<void(std::span<const int>)>& visit);

/// Visits all strictly increasing tuples lo <= j_1 < ... < j_depth <= hi in
/// lexicographic order. depth > hi-lo+1 yields nothing (empty stream).
void for_each_chain(int lo, int hi, int depth,
                    const std::function<void(std::span<const int>)>& visit);

std::vector<PermutationTuple> permutations_of(const IndexSet& set, int k);
std::vector<std::vector<int>> ordered_chains(int lo, int hi, int depth);

/// Expands prod_j (1 - exp(-a_j t)) into 2^n signed exponential terms,
/// ordered by subset size then lexicographically.
std::vector<ExpansionTerm> product_to_sum(std::span<const double> rates);

/// The bracketed polynomial-in-x expression attached to slots [n1, n2]
/// (1-based; slot_gammas[i-1] is the mean of slot i). Equals the derivative
/// of prod_{m=n1}^{n2} (x - 1/gamma_m).
double f_prime(int l, int n1, int n2, double x, std::span<const double> slot_gammas);

/// Partial-fraction coefficient of pole slot l within slots [n1, n2]:
/// 1 / (prod_{m=n1}^{n2} (-gamma_m) * f_prime(l, n1, n2, 1/gamma_l)).
/// Throws SingularityError when the pole separation collapses.
double coefficient_c(int l, int n1, int n2, std::span<const double> slot_gammas);

}  // namespace shorake::combinatorics

#endif
