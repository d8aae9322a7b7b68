#include "figprime/census.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "figprime/verifier.hpp"

namespace figprime {

namespace {

void require_even(const FigurateSet& set, std::uint64_t n) {
    if (n < 3) throw std::out_of_range("census_even: n must be >= 3");
    if (2 * n - 1 > set.max_n()) {
        throw std::out_of_range("census_even: set too small for target 2n");
    }
}

void require_odd(const FigurateSet& set, std::uint64_t n) {
    if (n < 1) throw std::out_of_range("census_odd: n must be >= 1");
    if (2 * n > set.max_n()) {
        throw std::out_of_range("census_odd: set too small for target 2n+1");
    }
}

}  // namespace

EvenCensus census_even(const FigurateSet& set, std::uint64_t n) {
    require_even(set, n);
    EvenCensus census;
    census.n = n;
    for (std::uint64_t i = 1; i <= 2 * n - 1; ++i) {
        const bool self = set.test_unchecked(i);
        const bool partner = set.test_unchecked(2 * n - i);
        if (self) {
            ++census.l;
            if (partner) ++census.l2;
        } else if (partner) {
            ++census.l1;
        }
    }
    return census;
}

OddCensus census_odd(const FigurateSet& set, std::uint64_t n) {
    require_odd(set, n);
    OddCensus census;
    census.n = n;
    for (std::uint64_t i = 1; i <= 2 * n; ++i) {
        const bool self = set.test_unchecked(i);
        const bool partner = set.test_unchecked(2 * n + 1 - i);
        if (self) {
            ++census.m;
            if (partner) ++census.m2;
        } else if (partner) {
            ++census.m1;
        }
    }
    return census;
}

EvenSets census_even_sets(const FigurateSet& set, std::uint64_t n) {
    require_even(set, n);
    EvenSets sets;
    for (std::uint64_t i = 1; i <= 2 * n - 1; ++i) {
        const bool self = set.test_unchecked(i);
        const bool partner = set.test_unchecked(2 * n - i);
        (self ? sets.a1 : sets.a2).push_back(i);
        if (self && partner) sets.a5.push_back(i);
        if (self && !partner) sets.a6.push_back(i);
        if (!self && partner) sets.a3.push_back(i);
        if (!self && !partner) sets.a4.push_back(i);
    }
    return sets;
}

OddSets census_odd_sets(const FigurateSet& set, std::uint64_t n) {
    require_odd(set, n);
    OddSets sets;
    for (std::uint64_t i = 1; i <= 2 * n; ++i) {
        const bool self = set.test_unchecked(i);
        const bool partner = set.test_unchecked(2 * n + 1 - i);
        (self ? sets.b1 : sets.b2).push_back(i);
        if (self && partner) sets.b5.push_back(i);
        if (self && !partner) sets.b6.push_back(i);
        if (!self && partner) sets.b3.push_back(i);
        if (!self && !partner) sets.b4.push_back(i);
    }
    return sets;
}

std::string census_csv_header() { return "target,parity,l_or_m,l1_or_m1,l2_or_m2"; }

std::string census_csv_row(const EvenCensus& census) {
    std::ostringstream row;
    row << census.target() << ",even," << census.l << ',' << census.l1 << ','
        << census.l2;
    return row.str();
}

std::string census_csv_row(const OddCensus& census) {
    std::ostringstream row;
    row << census.target() << ",odd," << census.m << ',' << census.m1 << ','
        << census.m2;
    return row.str();
}

namespace {

// Counts the six classes independently (not via the derived accessors) and
// cross-checks every identity for one even target. Returns violations as
// human-readable strings.
void check_even(const FigurateSet& set, std::uint64_t n,
                std::vector<std::string>& out) {
    std::uint64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0;
    for (std::uint64_t i = 1; i <= 2 * n - 1; ++i) {
        const bool self = set.test_unchecked(i);
        const bool partner = set.test_unchecked(2 * n - i);
        self ? ++a1 : ++a2;
        if (!self && partner) ++a3;
        if (!self && !partner) ++a4;
        if (self && partner) ++a5;
        if (self && !partner) ++a6;
    }
    const auto fail = [&](const std::string& what) {
        out.push_back("even target " + std::to_string(2 * n) + ": " + what);
    };
    if (a1 + a2 != 2 * n - 1) fail("A1+A2 != 2n-1");
    if (a3 + a4 != a2) fail("A3+A4 != A2");
    if (a5 + a6 != a1) fail("A5+A6 != A1");
    if (a3 != a1 - a5) fail("l1 != l - l2");
    const EvenCensus census = census_even(set, n);
    if (census.l != a1 || census.l1 != a3 || census.l2 != a5) {
        fail("census counters disagree with class counts");
    }
    if (count_representations(set, 2 * n) != a5) {
        fail("l2 != representation count of 2n");
    }
}

void check_odd(const FigurateSet& set, std::uint64_t n,
               std::vector<std::string>& out) {
    std::uint64_t b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
    for (std::uint64_t i = 1; i <= 2 * n; ++i) {
        const bool self = set.test_unchecked(i);
        const bool partner = set.test_unchecked(2 * n + 1 - i);
        self ? ++b1 : ++b2;
        if (!self && partner) ++b3;
        if (!self && !partner) ++b4;
        if (self && partner) ++b5;
        if (self && !partner) ++b6;
    }
    const auto fail = [&](const std::string& what) {
        out.push_back("odd target " + std::to_string(2 * n + 1) + ": " + what);
    };
    if (b1 + b2 != 2 * n) fail("B1+B2 != 2n");
    if (b3 + b4 != b2) fail("B3+B4 != B2");
    if (b5 + b6 != b1) fail("B5+B6 != B1");
    if (b3 != b1 - b5) fail("m1 != m - m2");
    const OddCensus census = census_odd(set, n);
    if (census.m != b1 || census.m1 != b3 || census.m2 != b5) {
        fail("census counters disagree with class counts");
    }
    if (count_representations(set, 2 * n + 1) != b5) {
        fail("m2 != representation count of 2n+1");
    }
}

void require_scan(const FigurateSet& set, std::uint64_t n_max) {
    if (n_max < 3) {
        throw std::out_of_range("identity scan: n_max must be >= 3");
    }
    if (2 * n_max + 1 > set.max_n()) {
        throw std::out_of_range("identity scan: set too small for 2*n_max+1");
    }
}

}  // namespace

IdentityScanResult scan_census_identities_serial(const FigurateSet& set,
                                                 std::uint64_t n_max) {
    require_scan(set, n_max);
    IdentityScanResult result;
    // Same n / parity order as the sorted parallel merge ("even..." sorts
    // before "odd..."), so both variants report violations identically.
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        if (n >= 3) {
            check_even(set, n, result.violations);
            ++result.checked_even;
        }
        check_odd(set, n, result.violations);
        ++result.checked_odd;
    }
    return result;
}

IdentityScanResult scan_census_identities(const FigurateSet& set,
                                          std::uint64_t n_max, unsigned jobs) {
    require_scan(set, n_max);
    if (jobs < 1) {
        throw std::invalid_argument("identity scan: jobs must be >= 1");
    }
    IdentityScanResult result;
    result.checked_even = n_max - 2;
    result.checked_odd = n_max;

    // (n, message) pairs collected per thread, sorted afterwards so the
    // output order is deterministic for any worker count.
    std::vector<std::pair<std::uint64_t, std::string>> found;
    std::mutex found_mutex;
    std::atomic<bool> failed{false};
    std::string failure;

#pragma omp parallel for schedule(dynamic, 64) num_threads((int)jobs)
    for (std::int64_t n = 1; n <= (std::int64_t)n_max; ++n) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            std::vector<std::string> local;
            if (n >= 3) check_even(set, (std::uint64_t)n, local);
            check_odd(set, (std::uint64_t)n, local);
            if (!local.empty()) {
                std::lock_guard<std::mutex> lock(found_mutex);
                for (std::string& message : local) {
                    found.emplace_back((std::uint64_t)n, std::move(message));
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(found_mutex);
            failed.store(true, std::memory_order_relaxed);
            if (failure.empty()) failure = e.what();
        }
    }
    if (failed.load()) {
        throw std::runtime_error("identity scan: worker failed: " + failure);
    }
    std::sort(found.begin(), found.end());
    for (auto& [n, message] : found) {
        result.violations.push_back(std::move(message));
    }
    return result;
}

}  // namespace figprime
