#include "shorake/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shorake::combinatorics {

std::uint64_t permutation_count(std::size_t set_size, int k) {
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) c *= static_cast<std::uint64_t>(set_size - i);
    return c;
}

std::uint64_t chain_count(int lo, int hi, int depth) {
    const int n = hi - lo + 1;
    if (depth > n) return 0;
    std::uint64_t c = 1;
    for (int i = 0; i < depth; ++i) {
        c *= static_cast<std::uint64_t>(n - i);
        c /= static_cast<std::uint64_t>(i + 1);
    }
    return c;
}

namespace {

void permute_rec(const IndexSet& set, std::vector<bool>& used, std::vector<int>& tuple,
                 int k, const std::function<void(std::span<const int>)>& visit) {
    if (static_cast<int>(tuple.size()) == k) {
        visit(tuple);
        return;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        tuple.push_back(set[i]);
        permute_rec(set, used, tuple, k, visit);
        tuple.pop_back();
        used[i] = false;
    }
}

void chain_rec(int next_lo, int hi, int remaining, std::vector<int>& tuple,
               const std::function<void(std::span<const int>)>& visit) {
    if (remaining == 0) {
        visit(tuple);
        return;
    }
    for (int j = next_lo; j <= hi - remaining + 1; ++j) {
        tuple.push_back(j);
        chain_rec(j + 1, hi, remaining - 1, tuple, visit);
        tuple.pop_back();
    }
}

}  // namespace

void for_each_permutation(const IndexSet& set, int k,
                          const std::function<void(std::span<const int>)>& visit) {
    if (k < 0 || k > static_cast<int>(set.size()))
        throw std::domain_error("permutation length exceeds set size");
    std::vector<bool> used(set.size(), false);
    std::vector<int> tuple;
    tuple.reserve(static_cast<std::size_t>(k));
    permute_rec(set, used, tuple, k, visit);
}

void for_each_chain(int lo, int hi, int depth,
                    const std::function<void(std::span<const int>)>& visit) {
    if (depth < 1) throw std::domain_error("chain depth must be at least 1");
    if (lo > hi + 1) throw std::domain_error("chain range is malformed");
    std::vector<int> tuple;
    tuple.reserve(static_cast<std::size_t>(depth));
    chain_rec(lo, hi, depth, tuple, visit);
}

std::vector<PermutationTuple> permutations_of(const IndexSet& set, int k) {
    if (k < 0 || k > static_cast<int>(set.size()))
        throw std::domain_error("permutation length exceeds set size");
    const std::uint64_t count = permutation_count(set.size(), k);
    if (count > kTermBudget)
        throw CapacityError("permutation enumeration exceeds term budget", count, kTermBudget);
    std::vector<PermutationTuple> out;
    out.reserve(static_cast<std::size_t>(count));
    for_each_permutation(set, k, [&](std::span<const int> t) {
        out.emplace_back(t.begin(), t.end());
    });
    return out;
}

std::vector<std::vector<int>> ordered_chains(int lo, int hi, int depth) {
    const std::uint64_t count = chain_count(lo, hi, depth);
    if (count > kTermBudget)
        throw CapacityError("chain enumeration exceeds term budget", count, kTermBudget);
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(count));
    for_each_chain(lo, hi, depth, [&](std::span<const int> t) {
        out.emplace_back(t.begin(), t.end());
    });
    return out;
}

std::vector<ExpansionTerm> product_to_sum(std::span<const double> rates) {
    const int n = static_cast<int>(rates.size());
    if (n >= 64 || (std::uint64_t{1} << n) > kTermBudget)
        throw CapacityError("product-to-sum expansion exceeds term budget",
                            n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n), kTermBudget);
    std::vector<ExpansionTerm> terms;
    terms.reserve(std::size_t{1} << n);
    terms.push_back(ExpansionTerm{+1, {}, 0.0});
    for (int g = 1; g <= n; ++g) {
        const int sign = (g % 2 == 0) ? +1 : -1;
        for_each_chain(1, n, g, [&](std::span<const int> chain) {
            ExpansionTerm t;
            t.sign = sign;
            t.subset.reserve(chain.size());
            double sum = 0.0;
            for (int j : chain) {
                t.subset.push_back(j - 1);
                sum += rates[static_cast<std::size_t>(j - 1)];
            }
            t.rate_sum = sum;
            terms.push_back(std::move(t));
        });
    }
    return terms;
}

double f_prime(int l, int n1, int n2, double x, std::span<const double> slot_gammas) {
    if (!(n1 <= l && l <= n2)) throw std::domain_error("f_prime: pole slot outside [n1, n2]");
    const int deg = n2 - n1;
    double acc = static_cast<double>(deg + 1) * std::pow(x, deg);
    for (int d = 1; d <= deg; ++d) {
        double esym = 0.0;
        for_each_chain(n1, n2, d, [&](std::span<const int> chain) {
            double prod = 1.0;
            for (int j : chain) prod *= 1.0 / slot_gammas[static_cast<std::size_t>(j - 1)];
            esym += prod;
        });
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        acc += static_cast<double>(deg - d + 1) * std::pow(x, deg - d) * sign * esym;
    }
    return acc;
}

double coefficient_c(int l, int n1, int n2, std::span<const double> slot_gammas) {
    if (!(n1 <= l && l <= n2)) throw std::domain_error("coefficient_c: pole slot outside [n1, n2]");
    const double lam_l = 1.0 / slot_gammas[static_cast<std::size_t>(l - 1)];
    const double fp = f_prime(l, n1, n2, lam_l, slot_gammas);
    // fp equals prod_{m != l} (lam_l - lam_m); gauge it against the same
    // product with all signs positive to detect coincident poles.
    double scale = 1.0;
    double gamma_prod = 1.0;
    for (int m = n1; m <= n2; ++m) {
        gamma_prod *= -slot_gammas[static_cast<std::size_t>(m - 1)];
        if (m == l) continue;
        scale *= lam_l + 1.0 / slot_gammas[static_cast<std::size_t>(m - 1)];
    }
    if (std::abs(fp) < 1e-9 * scale) {
        std::vector<int> idx;
        for (int m = n1; m <= n2; ++m) idx.push_back(m);
        throw SingularityError(
            "partial-fraction denominator collapsed for slot " + std::to_string(l) +
                " of [" + std::to_string(n1) + "," + std::to_string(n2) +
                "]; average SNRs too close (consider distinctness jitter)",
            std::move(idx), fp * gamma_prod);
    }
    return 1.0 / (gamma_prod * fp);
}

}  // namespace shorake::combinatorics
