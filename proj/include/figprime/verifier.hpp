// Two-sum verification: every integer n > 1 should decompose as a sum of two
// figurate primes. The parallel kernel splits [lo, hi] into fixed-size chunks
// scanned by OpenMP workers and merges per-chunk results in chunk order, so
// the report is identical for any worker count. A plain serial walk of the
// same range is kept as a reference implementation for tests and benchmarks.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "figprime/figurate_set.hpp"

namespace figprime {

// n = a + b with a <= b and both figurate.
struct DecompositionRecord {
    std::uint64_t n = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
};

struct VerificationReport {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::uint64_t checked = 0;
    std::vector<std::uint64_t> exceptions;  // increasing
    // Smallest witness a -> how many n in range have that minimal a.
    std::map<std::uint64_t, std::uint64_t> min_witness_histogram;
    double seconds = 0.0;  // wall clock; the only nondeterministic field
};

inline constexpr std::uint64_t kDefaultChunk = std::uint64_t{1} << 20;

// Minimal decomposition of n (smallest figurate a with delta(n - a) = 1), or
// nullopt if none exists. Requires 2 <= n <= set.max_n().
std::optional<DecompositionRecord> witness_for(const FigurateSet& set,
                                               std::uint64_t n);

// Number of ordered representations n = i + (n - i) with both parts figurate,
// i running over [1, n-1]. Requires 2 <= n <= set.max_n().
std::uint64_t count_representations(const FigurateSet& set, std::uint64_t n);

// Serial reference: scans [lo, hi] in one pass. Requires
// 2 <= lo <= hi <= set.max_n().
VerificationReport verify_range_serial(const FigurateSet& set,
                                       std::uint64_t lo, std::uint64_t hi);

// OpenMP kernel. jobs >= 1 is the worker count; results are byte-identical
// to the serial reference apart from the seconds field. A worker failure
// (e.g. bad_alloc) surfaces as std::runtime_error, never a partial report.
VerificationReport verify_range(const FigurateSet& set, std::uint64_t lo,
                                std::uint64_t hi, unsigned jobs,
                                std::uint64_t chunk_size = kDefaultChunk);

// JSON object with fields lo, hi, checked, exceptions,
// min_witness_histogram, seconds — in that order, histogram keys ascending.
std::string report_to_json(const VerificationReport& report);

// CSV decomposition dump: header "n,a,b", one row per n in [lo, hi] that has
// a decomposition (minimal witness). Exceptions are skipped here; they belong
// in the report.
void write_witness_csv(std::ostream& out, const FigurateSet& set,
                       std::uint64_t lo, std::uint64_t hi);

}  // namespace figprime
