// figprime — command-line front end: sieve construction and caching,
// two-sum verification over ranges, censuses, formulation evaluation,
// Taylor/remainder audits, and raw count statistics.
//
// Exit codes: 0 success/verified, 1 two-sum exception found,
// 2 usage error, 3 I/O or format error.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "figprime/census.hpp"
#include "figprime/enumeration.hpp"
#include "figprime/expansion.hpp"
#include "figprime/figurate_set.hpp"
#include "figprime/verifier.hpp"

namespace fs = std::filesystem;
using namespace figprime;

namespace {

constexpr const char* kCacheDirEnv = "FIGPRIME_CACHE_DIR";

// Local error type for non-cache file problems; mapped to exit code 3.
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for argument problems detected after parsing; mapped to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<fs::path> default_cache_path(std::uint64_t needed_max) {
    const char* dir = std::getenv(kCacheDirEnv);
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return fs::path(dir) / ("figurate_" + std::to_string(needed_max) + ".fgp");
}

// Loads the cache when present (corruption is a hard error, not a silent
// rebuild), builds and persists otherwise. A cache that is too small for the
// request is rebuilt at the requested size and overwritten.
FigurateSet obtain_set(std::uint64_t needed_max, const std::string& cache_flag) {
    std::optional<fs::path> path;
    if (!cache_flag.empty()) {
        path = cache_flag;
    } else {
        path = default_cache_path(needed_max);
    }
    if (path && fs::exists(*path)) {
        FigurateSet cached = load_cache(*path);
        if (cached.max_n() >= needed_max) return cached;
    }
    FigurateSet fresh = build_set(needed_max);
    if (path) save_cache(fresh, *path);
    return fresh;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoFailure("short write to " + path.string());
}

std::string format_double(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t max = 0;
    std::uint64_t from = 2;
    unsigned jobs = 0;
    std::string cache;
    std::string report_path;
    std::string format = "text";
};

int run_verify(const VerifyArgs& args) {
    if (args.max < 2) throw UsageError("verify: --max must be >= 2");
    if (args.from < 2) throw UsageError("verify: --from must be >= 2");
    if (args.from > args.max) throw UsageError("verify: --from exceeds --max");
    const unsigned jobs =
        args.jobs > 0 ? args.jobs : (unsigned)omp_get_max_threads();

    const FigurateSet set = obtain_set(args.max, args.cache);
    const VerificationReport report =
        verify_range(set, args.from, args.max, jobs);

    if (!args.report_path.empty()) {
        if (args.format == "csv") {
            std::ostringstream csv;
            write_witness_csv(csv, set, args.from, args.max);
            write_text_file(args.report_path, csv.str());
        } else {
            write_text_file(args.report_path, report_to_json(report));
        }
    }
    if (args.format == "json" && args.report_path.empty()) {
        std::cout << report_to_json(report);
    } else if (args.format == "csv" && args.report_path.empty()) {
        write_witness_csv(std::cout, set, args.from, args.max);
    } else if (args.format == "text" || !args.report_path.empty()) {
        std::cout << "range [" << report.lo << ", " << report.hi << "]: checked "
                  << report.checked << ", exceptions " << report.exceptions.size()
                  << ", " << format_double(report.seconds) << " s, " << jobs
                  << " job(s)\n";
    }

    if (!report.exceptions.empty()) {
        // An exception would be an interesting result; print the evidence.
        std::size_t shown = 0;
        for (const std::uint64_t n : report.exceptions) {
            if (++shown > 10) {
                std::cerr << "... and " << report.exceptions.size() - 10
                          << " more\n";
                break;
            }
            std::cerr << "no decomposition for " << n << ": scanned figurate a <= "
                      << n / 2 << ", every delta(" << n << " - a) = 0\n";
            std::size_t listed = 0;
            std::cerr << "  scanned a:";
            for (const std::uint64_t a : set.sorted_values()) {
                if (a * 2 > n) break;
                if (++listed > 200) {
                    std::cerr << " ...";
                    break;
                }
                std::cerr << ' ' << a;
            }
            std::cerr << '\n';
        }
        return 1;
    }
    return 0;
}

// ---- sieve ---------------------------------------------------------------

struct SieveArgs {
    std::uint64_t max = 0;
    std::string cache;
    std::string emit;
};

int run_sieve(const SieveArgs& args) {
    if (args.max < 1) throw UsageError("sieve: --max must be >= 1");
    const FigurateSet set = build_set(args.max);
    std::cout << "figurate primes <= " << args.max << ": " << set.count()
              << '\n';
    if (!args.cache.empty()) {
        const std::uint64_t bytes = save_cache(set, args.cache);
        std::cout << "cache written: " << args.cache << " (" << bytes
                  << " bytes)\n";
    } else if (auto path = default_cache_path(args.max)) {
        const std::uint64_t bytes = save_cache(set, *path);
        std::cout << "cache written: " << path->string() << " (" << bytes
                  << " bytes)\n";
    }
    if (!args.emit.empty()) {
        const EnumerationResult enumerated = enumerate_figurate_primes(args.max);
        std::ostringstream csv;
        csv << "value,p,r,s\n";
        for (const std::uint64_t value : enumerated.values) {
            const FigurateWitness& w = enumerated.witnesses.at(value);
            csv << w.value << ',' << w.p << ',' << w.r << ',' << w.s << '\n';
        }
        write_text_file(args.emit, csv.str());
        std::cout << "witness table written: " << args.emit << " ("
                  << enumerated.values.size() << " rows)\n";
    }
    return 0;
}

// ---- census / formula / taylor common ------------------------------------

Parity parse_parity(const std::string& text) {
    if (text == "even") return Parity::even;
    if (text == "odd") return Parity::odd;
    throw UsageError("--parity must be 'even' or 'odd'");
}

void require_parity_n(Parity parity, std::uint64_t n) {
    if (parity == Parity::even && n < 3) {
        throw UsageError("even parity requires --n >= 3");
    }
    if (parity == Parity::odd && n < 1) {
        throw UsageError("odd parity requires --n >= 1");
    }
    if (n > (std::uint64_t{1} << 62)) throw UsageError("--n is out of range");
}

std::uint64_t needed_max(Parity parity, std::uint64_t n) {
    return parity == Parity::even ? 2 * n : 2 * n + 1;
}

struct CensusArgs {
    std::uint64_t n = 0;
    std::string parity;
    std::string cache;
    std::string format = "text";
    std::string output;
    bool sets = false;
};

void emit(const std::string& output, const std::string& content) {
    if (output.empty()) {
        std::cout << content;
    } else {
        write_text_file(output, content);
    }
}

template <typename SetVec>
void print_index_set(std::ostream& out, const char* name, const SetVec& v) {
    out << name << " (" << v.size() << "):";
    for (const std::uint64_t i : v) out << ' ' << i;
    out << '\n';
}

int run_census(const CensusArgs& args) {
    const Parity parity = parse_parity(args.parity);
    require_parity_n(parity, args.n);
    if (args.sets && args.n > 5000) {
        throw UsageError("census: --sets is a debug mode, limited to n <= 5000");
    }
    const FigurateSet set = obtain_set(needed_max(parity, args.n), args.cache);

    std::ostringstream out;
    if (parity == Parity::even) {
        const EvenCensus census = census_even(set, args.n);
        if (args.format == "csv") {
            out << census_csv_header() << '\n' << census_csv_row(census) << '\n';
        } else if (args.format == "json") {
            nlohmann::ordered_json j;
            j["target"] = census.target();
            j["parity"] = "even";
            j["l"] = census.l;
            j["l1"] = census.l1;
            j["l2"] = census.l2;
            j["a2"] = census.a2();
            j["a4"] = census.a4();
            j["a6"] = census.a6();
            out << j.dump(2) << '\n';
        } else {
            out << "target " << census.target() << " (even, n=" << census.n
                << "): l=" << census.l << " l1=" << census.l1
                << " l2=" << census.l2 << " (a2=" << census.a2()
                << " a4=" << census.a4() << " a6=" << census.a6() << ")\n";
        }
        if (args.sets) {
            const EvenSets sets = census_even_sets(set, args.n);
            print_index_set(out, "A1", sets.a1);
            print_index_set(out, "A2", sets.a2);
            print_index_set(out, "A3", sets.a3);
            print_index_set(out, "A4", sets.a4);
            print_index_set(out, "A5", sets.a5);
            print_index_set(out, "A6", sets.a6);
        }
    } else {
        const OddCensus census = census_odd(set, args.n);
        if (args.format == "csv") {
            out << census_csv_header() << '\n' << census_csv_row(census) << '\n';
        } else if (args.format == "json") {
            nlohmann::ordered_json j;
            j["target"] = census.target();
            j["parity"] = "odd";
            j["m"] = census.m;
            j["m1"] = census.m1;
            j["m2"] = census.m2;
            j["b2"] = census.b2();
            j["b4"] = census.b4();
            j["b6"] = census.b6();
            out << j.dump(2) << '\n';
        } else {
            out << "target " << census.target() << " (odd, n=" << census.n
                << "): m=" << census.m << " m1=" << census.m1
                << " m2=" << census.m2 << " (b2=" << census.b2()
                << " b4=" << census.b4() << " b6=" << census.b6() << ")\n";
        }
        if (args.sets) {
            const OddSets sets = census_odd_sets(set, args.n);
            print_index_set(out, "B1", sets.b1);
            print_index_set(out, "B2", sets.b2);
            print_index_set(out, "B3", sets.b3);
            print_index_set(out, "B4", sets.b4);
            print_index_set(out, "B5", sets.b5);
            print_index_set(out, "B6", sets.b6);
        }
    }
    emit(args.output, out.str());
    return 0;
}

// ---- formula ---------------------------------------------------------------

int run_formula(const CensusArgs& args) {
    const Parity parity = parse_parity(args.parity);
    require_parity_n(parity, args.n);
    const FigurateSet set = obtain_set(needed_max(parity, args.n), args.cache);
    const HFamily family = make_x_exp_x();

    const std::uint64_t target = needed_max(parity, args.n);
    double value = 0.0, expected = 0.0;
    std::uint64_t both = 0;
    if (parity == Parity::even) {
        const EvenCensus census = census_even(set, args.n);
        value = h_sum_even(set, args.n, family);
        expected = (double)census.l2 * family.h(1.0);
        both = census.l2;
    } else {
        const OddCensus census = census_odd(set, args.n);
        value = log_sum_odd(set, args.n);
        expected = (double)census.m2 * std::log(2.0);
        both = census.m2;
    }
    const double rel =
        std::abs(value - expected) / std::max(1.0, std::abs(expected));
    const auto witness = witness_for(set, target);

    std::ostringstream out;
    if (args.format == "json") {
        nlohmann::ordered_json j;
        j["target"] = target;
        j["parity"] = parity_name(parity);
        j["family"] = family.name;
        j["sum"] = value;
        j["collapsed"] = expected;
        j["pair_count"] = both;
        j["rel_error"] = rel;
        j["positive"] = value > 0.0;
        if (witness) {
            j["witness"] = {{"a", witness->a}, {"b", witness->b}};
        } else {
            j["witness"] = nullptr;
        }
        out << j.dump(2) << '\n';
    } else if (args.format == "csv") {
        out << "target,parity,sum,collapsed,rel_error,positive\n"
            << target << ',' << parity_name(parity) << ','
            << format_double(value) << ',' << format_double(expected) << ','
            << format_double(rel) << ',' << (value > 0.0 ? 1 : 0) << '\n';
    } else {
        out << "target " << target << " (" << parity_name(parity)
            << ", n=" << args.n << ", h=" << family.name
            << "): sum=" << format_double(value) << " collapsed("
            << (parity == Parity::even ? "l2*h(1)" : "m2*log 2")
            << ")=" << format_double(expected) << " rel_err="
            << format_double(rel) << '\n';
        if (witness) {
            out << "positive; decomposition " << target << " = " << witness->a
                << " + " << witness->b << '\n';
        } else {
            out << "not positive; no decomposition\n";
        }
    }
    emit(args.output, out.str());
    return 0;
}

// ---- taylor ----------------------------------------------------------------

struct TaylorArgs {
    std::uint64_t n = 0;
    std::string parity;
    std::string eps_min = "2^-12";
    std::string eps_max = "2^-4";
    std::string cache;
    std::string format = "text";
    std::string output;
};

double parse_epsilon(const std::string& text) {
    try {
        std::size_t used = 0;
        double value;
        if (text.rfind("2^", 0) == 0) {
            const int exponent = std::stoi(text.substr(2), &used);
            if (used + 2 != text.size()) throw std::invalid_argument(text);
            value = std::ldexp(1.0, exponent);
        } else {
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        }
        if (!(value > 0.0 && value < 1.0)) {
            throw UsageError("epsilon '" + text + "' outside (0, 1)");
        }
        return value;
    } catch (const std::invalid_argument&) {
        throw UsageError("cannot parse epsilon '" + text +
                         "' (use a decimal or 2^-k)");
    } catch (const std::out_of_range&) {
        throw UsageError("epsilon '" + text + "' out of range");
    }
}

int run_taylor(const TaylorArgs& args) {
    const Parity parity = parse_parity(args.parity);
    require_parity_n(parity, args.n);
    const double eps_min = parse_epsilon(args.eps_min);
    const double eps_max = parse_epsilon(args.eps_max);
    if (eps_min > eps_max) {
        throw UsageError("taylor: --eps-min exceeds --eps-max");
    }
    std::vector<double> grid;
    for (double e = eps_max; e >= eps_min * (1.0 - 1e-12); e /= 2.0) {
        grid.push_back(e);
    }
    const FigurateSet set = obtain_set(needed_max(parity, args.n), args.cache);
    const ExpansionReport report =
        remainder_scan(set, args.n, parity, make_x_exp_x(), grid);

    std::ostringstream out;
    if (args.format == "json") {
        out << expansion_report_to_json(report);
    } else if (args.format == "csv") {
        out << expansion_report_to_csv(report);
    } else {
        out << "target " << (parity == Parity::even ? 2 * args.n : 2 * args.n + 1)
            << " (" << parity_name(parity) << ", n=" << args.n << "): counts "
            << report.count_all << '/' << report.count_cross << '/'
            << report.count_both << '\n';
        out << "coefficients:";
        for (const double c : report.coeffs) out << ' ' << format_double(c);
        out << '\n';
        if (report.slope) {
            out << "fitted remainder slope: " << format_double(*report.slope)
                << '\n';
        } else {
            out << "fitted remainder slope: inconclusive (remainder at noise "
                   "level)\n";
        }
        out << "epsilon exact truncated remainder ratio residual\n";
        out.precision(17);
        for (std::size_t k = 0; k < report.grid.size(); ++k) {
            out << report.grid[k] << ' ' << report.exact[k] << ' '
                << report.truncated[k] << ' ' << report.remainder[k] << ' '
                << report.ratio[k] << ' ' << report.residual[k] << '\n';
        }
    }
    emit(args.output, out.str());
    return 0;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
    std::uint64_t max = 0;
    std::string cache;
    std::string format = "text";
};

int run_stats(const StatsArgs& args) {
    if (args.max < 1) throw UsageError("stats: --max must be >= 1");
    const FigurateSet set = obtain_set(args.max, args.cache);
    const std::uint64_t primes = sieve_primes(args.max).size();
    if (args.format == "json") {
        nlohmann::ordered_json j;
        j["max"] = args.max;
        j["figurate_count"] = set.count();
        j["prime_count"] = primes;
        std::cout << j.dump(2) << '\n';
    } else if (args.format == "csv") {
        std::cout << "max,figurate_count,prime_count\n"
                  << args.max << ',' << set.count() << ',' << primes << '\n';
    } else {
        std::cout << "max " << args.max << ": figurate " << set.count()
                  << ", primes " << primes << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "figurate prime toolkit: enumeration, two-sum verification, censuses, "
        "expansion audits"};
    app.require_subcommand(1);

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "verify that every n in [--from, --max] is a sum of two "
                  "figurate primes");
    verify->add_option("--max", verify_args.max, "upper end of the range")
        ->required();
    verify->add_option("--from", verify_args.from, "lower end (default 2)");
    verify->add_option("--jobs", verify_args.jobs,
                       "worker count (default: all cores)");
    verify->add_option("--cache", verify_args.cache,
                       "membership cache file (read if present, else written)");
    verify->add_option("--report", verify_args.report_path,
                       "write the report to this path");
    verify->add_option("--format", verify_args.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    SieveArgs sieve_args;
    CLI::App* sieve = app.add_subcommand(
        "sieve", "enumerate figurate primes up to --max; optionally cache or "
                 "emit the witness table");
    sieve->add_option("--max", sieve_args.max, "enumeration bound")->required();
    sieve->add_option("--cache", sieve_args.cache, "write the cache here");
    sieve->add_option("--emit", sieve_args.emit,
                      "write value,p,r,s CSV witness table here");

    CensusArgs census_args;
    CLI::App* census = app.add_subcommand(
        "census", "index-class census for target 2n (even) or 2n+1 (odd)");
    census->add_option("--n", census_args.n, "target parameter n")->required();
    census->add_option("--parity", census_args.parity, "even | odd")->required();
    census->add_option("--cache", census_args.cache, "membership cache file");
    census->add_option("--format", census_args.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    census->add_option("--output", census_args.output,
                       "write output here instead of stdout");
    census->add_flag("--sets", census_args.sets,
                     "debug: also list the index sets (n <= 5000)");

    CensusArgs formula_args;
    CLI::App* formula = app.add_subcommand(
        "formula", "evaluate the collapsed smooth-sum formulation for one "
                   "target and compare with the census prediction");
    formula->add_option("--n", formula_args.n, "target parameter n")->required();
    formula->add_option("--parity", formula_args.parity, "even | odd")
        ->required();
    formula->add_option("--cache", formula_args.cache, "membership cache file");
    formula->add_option("--format", formula_args.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    formula->add_option("--output", formula_args.output,
                        "write output here instead of stdout");

    TaylorArgs taylor_args;
    CLI::App* taylor = app.add_subcommand(
        "taylor", "Taylor coefficients, remainder decay, and aggregation "
                  "residuals over an epsilon grid");
    taylor->add_option("--n", taylor_args.n, "target parameter n")->required();
    taylor->add_option("--parity", taylor_args.parity, "even | odd")->required();
    taylor->add_option("--eps-min", taylor_args.eps_min,
                       "smallest epsilon (decimal or 2^-k; default 2^-12)");
    taylor->add_option("--eps-max", taylor_args.eps_max,
                       "largest epsilon (decimal or 2^-k; default 2^-4)");
    taylor->add_option("--cache", taylor_args.cache, "membership cache file");
    taylor->add_option("--format", taylor_args.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    taylor->add_option("--output", taylor_args.output,
                       "write output here instead of stdout");

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand(
        "stats", "raw counts of figurate primes and classical primes <= --max");
    stats->add_option("--max", stats_args.max, "count bound")->required();
    stats->add_option("--cache", stats_args.cache, "membership cache file");
    stats->add_option("--format", stats_args.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(verify_args);
        if (sieve->parsed()) return run_sieve(sieve_args);
        if (census->parsed()) return run_census(census_args);
        if (formula->parsed()) return run_formula(formula_args);
        if (taylor->parsed()) return run_taylor(taylor_args);
        if (stats->parsed()) return run_stats(stats_args);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const CacheError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const IoFailure& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
}
