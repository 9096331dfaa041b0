#include "nblab/arithmetic.hpp"

#include <cmath>
#include <string>

#include "nblab/compensated.hpp"
#include "nblab/errors.hpp"

namespace nblab {

std::int64_t MobiusTable::mertens(std::int64_t n) const {
    if (n < 0 || n > n_max()) throw RangeError("mertens: n outside the sieved range");
    std::int64_t m = 0;
    for (std::int64_t k = 1; k <= n; ++k) m += values_[static_cast<std::size_t>(k)];
    return m;
}

MobiusTable mobius_sieve(std::int64_t n_max, std::int64_t max_entries) {
    if (n_max < 1) throw RangeError("mobius_sieve: n_max must be >= 1");
    if (n_max > max_entries)
        throw CapacityError("mobius_sieve: n_max = " + std::to_string(n_max) + " exceeds the budget of " +
                            std::to_string(max_entries) + " entries");

    const auto size = static_cast<std::size_t>(n_max) + 1;
    std::vector<std::int8_t> mu(size, 0);
    std::vector<bool> composite(size, false);
    std::vector<std::uint32_t> primes;
    primes.reserve(n_max > 100 ? static_cast<std::size_t>(1.3 * n_max / std::log(static_cast<double>(n_max)))
                               : 32);
    mu[1] = 1;
    // Each composite i*p is visited once, from its smallest prime factor p.
    for (std::size_t i = 2; i < size; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (std::uint32_t p : primes) {
            std::size_t ip = i * p;
            if (ip >= size) break;
            composite[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    return MobiusTable(std::move(mu));
}

Complex mu_partial_sum(const MobiusTable& table, Complex s, std::int64_t count) {
    if (count > table.n_max())
        throw RangeError("mu_partial_sum: N = " + std::to_string(count) + " exceeds table size " +
                         std::to_string(table.n_max()));
    CompensatedComplexSum sum;
    for (std::int64_t n = 1; n <= count; ++n) {
        int mu = table[n];
        if (mu == 0) continue;
        Complex term = std::exp(-s * std::log(static_cast<double>(n)));
        sum.add(mu > 0 ? term : -term);
    }
    return sum.value();
}

}  // namespace nblab
