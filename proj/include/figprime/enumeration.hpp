// Figurate prime enumeration.
//
// A figurate prime is any value C(q, s) where q = p^r is a prime power
// (p prime, r >= 1) and 0 <= s <= q. The collection contains 1, every
// prime, and every prime power. Enumeration walks binomial rows with an
// exact 128-bit incremental recurrence; only s <= q/2 is visited because
// C(q, s) = C(q, q - s) adds nothing new for membership.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace figprime {

// A prime power q = p^r.
struct PrimePower {
    std::uint64_t p = 0;
    std::uint32_t r = 0;
    std::uint64_t q = 0;
};

// Certificate for one figurate prime: value = C(p^r, s), recomputable exactly.
// For a value with several representations the stored witness is the one with
// the lexicographically smallest (q, s), so output is deterministic.
struct FigurateWitness {
    std::uint64_t value = 0;
    std::uint64_t p = 0;
    std::uint32_t r = 0;
    std::uint64_t s = 0;

    std::uint64_t q() const {
        std::uint64_t result = 1;
        for (std::uint32_t k = 0; k < r; ++k) result *= p;
        return result;
    }
};

struct EnumerationResult {
    std::uint64_t max_n = 0;
    std::vector<std::uint64_t> values;  // strictly increasing
    std::unordered_map<std::uint64_t, FigurateWitness> witnesses;
};

// Primes up to n_max (inclusive) by a classic Eratosthenes sieve.
std::vector<std::uint64_t> sieve_primes(std::uint64_t n_max);

// All prime powers q = p^r <= n_max, sorted by q, each q once.
// n_max < 2 yields an empty list.
std::vector<PrimePower> prime_powers_up_to(std::uint64_t n_max);

// Pairs (s, C(q, s)) with C(q, s) <= n_max, for s = 0, 1, ... up to the first
// value above n_max or s = q/2, whichever comes first. The recurrence
// C(q, s+1) = C(q, s) * (q - s) / (s + 1) multiplies before dividing; the
// product is exactly divisible. Throws std::overflow_error if an intermediate
// product exceeds 128 bits (never silently wraps).
std::vector<std::pair<std::uint64_t, std::uint64_t>>
binomial_prefix(std::uint64_t q, std::uint64_t n_max);

// Every figurate prime <= n_max with one witness each. n_max >= 1 required.
EnumerationResult enumerate_figurate_primes(std::uint64_t n_max);

// Membership bitmap only (no witnesses): bit j of byte k encodes whether
// 8k + j + 1 is figurate, least-significant bit first. Integer 0 has no bit.
// Same layout as the cache file payload.
std::vector<std::uint8_t> figurate_bitmap(std::uint64_t n_max);

}  // namespace figprime
