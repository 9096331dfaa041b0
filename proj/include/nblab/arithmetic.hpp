#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nblab/special_functions.hpp"

namespace nblab {

// Immutable table of mu(1..n_max), one signed byte per entry.
class MobiusTable {
public:
    std::int64_t n_max() const { return static_cast<std::int64_t>(values_.size()) - 1; }

    int operator[](std::int64_t n) const { return values_[static_cast<std::size_t>(n)]; }

    // Entry 0 is an unused 0 so that indices match n.
    std::span<const std::int8_t> values() const { return values_; }

    // Mertens function M(n) = sum_{k <= n} mu(k).
    std::int64_t mertens(std::int64_t n) const;

private:
    friend MobiusTable mobius_sieve(std::int64_t n_max, std::int64_t max_entries);
    explicit MobiusTable(std::vector<std::int8_t> values) : values_(std::move(values)) {}

    std::vector<std::int8_t> values_;
};

inline constexpr std::int64_t kDefaultMobiusBudget = 100'000'000;

/// Linear sieve over smallest prime factors. Throws RangeError for
/// n_max < 1 and CapacityError when n_max exceeds max_entries.
MobiusTable mobius_sieve(std::int64_t n_max, std::int64_t max_entries = kDefaultMobiusBudget);

/// sum_{n <= count} mu(n) n^{-s} with Neumaier-compensated accumulation.
/// Throws RangeError if count > table.n_max().
Complex mu_partial_sum(const MobiusTable& table, Complex s, std::int64_t count);

}  // namespace nblab
