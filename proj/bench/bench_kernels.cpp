// Benchmark comparing the serial reference kernels against their OpenMP
// counterparts: two-sum range verification and the census identity scan.
// Results must agree exactly (modulo wall-clock seconds); disagreements are
// reported and fail the run.

#include <omp.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "figprime/census.hpp"
#include "figprime/figurate_set.hpp"
#include "figprime/verifier.hpp"

using namespace figprime;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_report(const VerificationReport& a, const VerificationReport& b) {
    return a.lo == b.lo && a.hi == b.hi && a.checked == b.checked &&
           a.exceptions == b.exceptions &&
           a.min_witness_histogram == b.min_witness_histogram;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t max_n = 10'000'000;
    std::uint64_t census_max = 4000;
    int trials = 3;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--max" && i + 1 < argc) {
            max_n = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--census-max" && i + 1 < argc) {
            census_max = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--trials" && i + 1 < argc) {
            trials = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: bench_kernels [--max N] [--census-max N] "
                         "[--trials T]\n";
            return 2;
        }
    }
    const unsigned jobs = (unsigned)omp_get_max_threads();

    auto start = Clock::now();
    const FigurateSet set = build_set(max_n);
    std::cout << "build_set(" << max_n << "): " << seconds_since(start)
              << " s, " << set.count() << " members\n";

    bool ok = true;
    for (int t = 0; t < trials; ++t) {
        start = Clock::now();
        const VerificationReport serial = verify_range_serial(set, 2, max_n);
        const double serial_s = seconds_since(start);

        start = Clock::now();
        const VerificationReport parallel = verify_range(set, 2, max_n, jobs);
        const double parallel_s = seconds_since(start);

        if (!same_report(serial, parallel)) {
            std::cout << "verify trial " << t << ": MISMATCH\n";
            ok = false;
            continue;
        }
        std::cout << "verify trial " << t << ": serial " << serial_s
                  << " s, parallel(" << jobs << ") " << parallel_s
                  << " s, speedup " << serial_s / parallel_s << ", exceptions "
                  << serial.exceptions.size() << '\n';
    }

    if (2 * census_max + 1 <= set.max_n()) {
        start = Clock::now();
        const IdentityScanResult serial =
            scan_census_identities_serial(set, census_max);
        const double serial_s = seconds_since(start);

        start = Clock::now();
        const IdentityScanResult parallel =
            scan_census_identities(set, census_max, jobs);
        const double parallel_s = seconds_since(start);

        if (serial.violations != parallel.violations ||
            serial.checked_even != parallel.checked_even ||
            serial.checked_odd != parallel.checked_odd) {
            std::cout << "census scan: MISMATCH\n";
            ok = false;
        } else {
            std::cout << "census identity scan to n=" << census_max
                      << ": serial " << serial_s << " s, parallel(" << jobs
                      << ") " << parallel_s << " s, speedup "
                      << serial_s / parallel_s << ", violations "
                      << serial.violations.size() << '\n';
        }
    }
    return ok ? 0 : 1;
}
