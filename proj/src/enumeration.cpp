#include "figprime/enumeration.hpp"

#include <algorithm>
#include <stdexcept>

namespace figprime {

std::vector<std::uint64_t> sieve_primes(std::uint64_t n_max) {
    std::vector<std::uint64_t> primes;
    if (n_max < 2) return primes;
    std::vector<std::uint8_t> composite(n_max + 1, 0);
    for (std::uint64_t i = 2; i * i <= n_max; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= n_max; j += i) composite[j] = 1;
    }
    for (std::uint64_t i = 2; i <= n_max; ++i) {
        if (!composite[i]) primes.push_back(i);
    }
    return primes;
}

std::vector<PrimePower> prime_powers_up_to(std::uint64_t n_max) {
    std::vector<PrimePower> out;
    for (std::uint64_t p : sieve_primes(n_max)) {
        std::uint64_t q = p;
        std::uint32_t r = 1;
        while (true) {
            out.push_back({p, r, q});
            if (q > n_max / p) break;  // q * p would exceed n_max
            q *= p;
            ++r;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.q < b.q; });
    return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>>
binomial_prefix(std::uint64_t q, std::uint64_t n_max) {
    if (q < 1 || n_max < 1) {
        throw std::invalid_argument("binomial_prefix: q and n_max must be >= 1");
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.emplace_back(0, 1);  // C(q, 0)
    unsigned __int128 value = 1;
    const std::uint64_t half = q / 2;
    for (std::uint64_t s = 0; s < half; ++s) {
        unsigned __int128 product;
        if (__builtin_mul_overflow(value, (unsigned __int128)(q - s), &product)) {
            throw std::overflow_error("binomial_prefix: C(q, s) exceeds 128 bits");
        }
        value = product / (s + 1);  // exactly divisible: product is C(q,s+1)*(s+1)
        if (value > n_max) break;
        out.emplace_back(s + 1, (std::uint64_t)value);
    }
    return out;
}

namespace {

// Visits every C(q, s) <= n_max with s <= q/2 as visit(value, p, r, s),
// q ascending then s ascending, so the first visit of a repeated value is
// the lexicographically smallest witness (q, s).
template <typename Visitor>
void visit_figurate(std::uint64_t n_max, Visitor&& visit) {
    // Prime powers start at 2, but the value 1 = C(2, 0) must appear even
    // for n_max = 1, hence the max() in the sieve bound.
    const auto powers = prime_powers_up_to(std::max<std::uint64_t>(n_max, 2));
    for (const PrimePower& pp : powers) {
        visit(std::uint64_t{1}, pp.p, pp.r, std::uint64_t{0});
        unsigned __int128 value = 1;
        const std::uint64_t half = pp.q / 2;
        for (std::uint64_t s = 0; s < half; ++s) {
            unsigned __int128 product;
            if (__builtin_mul_overflow(value, (unsigned __int128)(pp.q - s),
                                       &product)) {
                throw std::overflow_error(
                    "enumerate_figurate_primes: C(q, s) exceeds 128 bits");
            }
            value = product / (s + 1);
            if (value > n_max) break;
            visit((std::uint64_t)value, pp.p, pp.r, s + 1);
        }
    }
}

}  // namespace

EnumerationResult enumerate_figurate_primes(std::uint64_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("enumerate_figurate_primes: n_max must be >= 1");
    }
    EnumerationResult result;
    result.max_n = n_max;
    visit_figurate(n_max, [&](std::uint64_t value, std::uint64_t p,
                              std::uint32_t r, std::uint64_t s) {
        result.witnesses.try_emplace(value, FigurateWitness{value, p, r, s});
    });
    result.values.reserve(result.witnesses.size());
    for (const auto& [value, witness] : result.witnesses) {
        result.values.push_back(value);
    }
    std::sort(result.values.begin(), result.values.end());
    return result;
}

std::vector<std::uint8_t> figurate_bitmap(std::uint64_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("figurate_bitmap: n_max must be >= 1");
    }
    std::vector<std::uint8_t> bits((n_max + 7) / 8, 0);
    visit_figurate(n_max, [&](std::uint64_t value, std::uint64_t, std::uint32_t,
                              std::uint64_t) {
        bits[(value - 1) >> 3] |= std::uint8_t(1u << ((value - 1) & 7));
    });
    return bits;
}

}  // namespace figprime
