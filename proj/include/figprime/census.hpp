// Index-class censuses. For an even target 2n the index range [1, 2n-1]
// splits by the pair (delta(i), delta(2n-i)) into:
//
//   A1: delta(i) = 1 (size l)        A2: delta(i) = 0 (size 2n-1-l)
//   A3: i not figurate, partner is   (size l1)
//   A4: neither i nor partner        (size 2n-1-l-l1)
//   A5: both figurate                (size l2)
//   A6: i figurate, partner is not   (size l-l2)
//
// For an odd target 2n+1 the range [1, 2n] splits the same way into B1..B6
// with sizes m, 2n-m, m1, 2n-m-m1, m2, m-m2. Reflection i <-> target-i maps
// A3 onto A6 (and B3 onto B6) one-to-one, which forces l1 = l - l2 and
// m1 = m - m2; the identity scan below checks that, plus the partition
// totals, against independently counted classes.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "figprime/figurate_set.hpp"

namespace figprime {

struct EvenCensus {
    std::uint64_t n = 0;  // target is 2n
    std::uint64_t l = 0;
    std::uint64_t l1 = 0;
    std::uint64_t l2 = 0;

    std::uint64_t target() const { return 2 * n; }
    std::uint64_t a2() const { return 2 * n - 1 - l; }
    std::uint64_t a4() const { return 2 * n - 1 - l - l1; }
    std::uint64_t a6() const { return l - l2; }
};

struct OddCensus {
    std::uint64_t n = 0;  // target is 2n+1
    std::uint64_t m = 0;
    std::uint64_t m1 = 0;
    std::uint64_t m2 = 0;

    std::uint64_t target() const { return 2 * n + 1; }
    std::uint64_t b2() const { return 2 * n - m; }
    std::uint64_t b4() const { return 2 * n - m - m1; }
    std::uint64_t b6() const { return m - m2; }
};

// Single pass over the index range. Even requires n >= 3 and
// 2n - 1 <= set.max_n(); odd requires n >= 1 and 2n <= set.max_n().
EvenCensus census_even(const FigurateSet& set, std::uint64_t n);
OddCensus census_odd(const FigurateSet& set, std::uint64_t n);

// Debug emitters: the actual index sets, for small n.
struct EvenSets {
    std::vector<std::uint64_t> a1, a2, a3, a4, a5, a6;
};
struct OddSets {
    std::vector<std::uint64_t> b1, b2, b3, b4, b5, b6;
};
EvenSets census_even_sets(const FigurateSet& set, std::uint64_t n);
OddSets census_odd_sets(const FigurateSet& set, std::uint64_t n);

// CSV serialization, shared header for both parities.
std::string census_csv_header();  // "target,parity,l_or_m,l1_or_m1,l2_or_m2"
std::string census_csv_row(const EvenCensus& census);
std::string census_csv_row(const OddCensus& census);

struct IdentityScanResult {
    std::uint64_t checked_even = 0;
    std::uint64_t checked_odd = 0;
    std::vector<std::string> violations;  // empty means all identities hold
};

// Checks, for every even target 2n (3 <= n <= n_max) and odd target 2n+1
// (1 <= n <= n_max): the six classes counted independently satisfy the
// partition totals, the reflection identities l1 = l - l2 / m1 = m - m2, and
// l2 / m2 equals the verifier's representation count for the target. Needs
// set.max_n() >= 2 * n_max + 1.
IdentityScanResult scan_census_identities_serial(const FigurateSet& set,
                                                 std::uint64_t n_max);
// OpenMP variant, same result for any jobs >= 1.
IdentityScanResult scan_census_identities(const FigurateSet& set,
                                          std::uint64_t n_max, unsigned jobs);

}  // namespace figprime
