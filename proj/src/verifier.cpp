#include "figprime/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>

#include "json.hpp"

namespace figprime {

namespace {

void require_range(const FigurateSet& set, std::uint64_t lo, std::uint64_t hi) {
    if (lo < 2 || lo > hi || hi > set.max_n()) {
        throw std::out_of_range(
            "verify: need 2 <= lo <= hi <= max_n of the membership set");
    }
}

// Smallest figurate a with a <= n/2 and delta(n - a) = 1, or 0 if none.
// The sorted value list starts 1, 2, 3, ... so for almost every n the scan
// stops within the first handful of entries.
std::uint64_t min_witness(const FigurateSet& set, std::uint64_t n) {
    for (std::uint64_t a : set.sorted_values()) {
        if (a * 2 > n) break;
        if (set.test_unchecked(n - a)) return a;
    }
    return 0;
}

struct ChunkResult {
    std::vector<std::uint64_t> exceptions;
    std::map<std::uint64_t, std::uint64_t> histogram;
};

void scan_into(const FigurateSet& set, std::uint64_t lo, std::uint64_t hi,
               ChunkResult& out) {
    for (std::uint64_t n = lo; n <= hi; ++n) {
        const std::uint64_t a = min_witness(set, n);
        if (a == 0) {
            out.exceptions.push_back(n);
        } else {
            ++out.histogram[a];
        }
    }
}

}  // namespace

std::optional<DecompositionRecord> witness_for(const FigurateSet& set,
                                               std::uint64_t n) {
    require_range(set, n, n);
    const std::uint64_t a = min_witness(set, n);
    if (a == 0) return std::nullopt;
    return DecompositionRecord{n, a, n - a};
}

std::uint64_t count_representations(const FigurateSet& set, std::uint64_t n) {
    require_range(set, n, n);
    std::uint64_t count = 0;
    for (std::uint64_t i = 1; i < n; ++i) {
        if (set.test_unchecked(i) && set.test_unchecked(n - i)) ++count;
    }
    return count;
}

VerificationReport verify_range_serial(const FigurateSet& set,
                                       std::uint64_t lo, std::uint64_t hi) {
    require_range(set, lo, hi);
    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.lo = lo;
    report.hi = hi;
    report.checked = hi - lo + 1;
    ChunkResult all;
    scan_into(set, lo, hi, all);
    report.exceptions = std::move(all.exceptions);
    report.min_witness_histogram = std::move(all.histogram);
    report.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

VerificationReport verify_range(const FigurateSet& set, std::uint64_t lo,
                                std::uint64_t hi, unsigned jobs,
                                std::uint64_t chunk_size) {
    require_range(set, lo, hi);
    if (jobs < 1) throw std::invalid_argument("verify_range: jobs must be >= 1");
    if (chunk_size < 1) {
        throw std::invalid_argument("verify_range: chunk_size must be >= 1");
    }
    const auto start = std::chrono::steady_clock::now();

    const std::uint64_t total = hi - lo + 1;
    const std::uint64_t chunks = (total + chunk_size - 1) / chunk_size;
    std::vector<ChunkResult> parts(chunks);

    // Workers may throw (OOM etc.); an exception must not cross the parallel
    // region, so it is captured and rethrown as a hard error afterwards —
    // never a silently partial report.
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

#pragma omp parallel for schedule(dynamic) num_threads((int)jobs)
    for (std::int64_t c = 0; c < (std::int64_t)chunks; ++c) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const std::uint64_t chunk_lo = lo + (std::uint64_t)c * chunk_size;
            const std::uint64_t chunk_hi =
                std::min(hi, chunk_lo + chunk_size - 1);
            scan_into(set, chunk_lo, chunk_hi, parts[(std::size_t)c]);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failed.store(true, std::memory_order_relaxed);
            if (failure.empty()) failure = e.what();
        }
    }
    if (failed.load()) {
        throw std::runtime_error("verify_range: worker failed: " + failure);
    }

    // Merge in chunk order: the report is independent of the worker count.
    VerificationReport report;
    report.lo = lo;
    report.hi = hi;
    report.checked = total;
    for (ChunkResult& part : parts) {
        report.exceptions.insert(report.exceptions.end(),
                                 part.exceptions.begin(), part.exceptions.end());
        for (const auto& [a, count] : part.histogram) {
            report.min_witness_histogram[a] += count;
        }
    }
    report.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

std::string report_to_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["lo"] = report.lo;
    j["hi"] = report.hi;
    j["checked"] = report.checked;
    j["exceptions"] = report.exceptions;
    nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
    for (const auto& [a, count] : report.min_witness_histogram) {
        histogram[std::to_string(a)] = count;  // std::map iterates ascending
    }
    j["min_witness_histogram"] = std::move(histogram);
    j["seconds"] = report.seconds;
    return j.dump(2) + "\n";
}

void write_witness_csv(std::ostream& out, const FigurateSet& set,
                       std::uint64_t lo, std::uint64_t hi) {
    require_range(set, lo, hi);
    out << "n,a,b\n";
    for (std::uint64_t n = lo; n <= hi; ++n) {
        const std::uint64_t a = min_witness(set, n);
        if (a != 0) out << n << ',' << a << ',' << (n - a) << '\n';
    }
}

}  // namespace figprime
