// Smooth reformulation of the two-sum property and its Taylor bookkeeping.
//
// Even target 2n: f(x) = sum_{i=1}^{2n-1} h(x_i) * x_{2n-i} with a weight
// family h (h(0) = 0, h(1) > 0, h''(0) > 0, h >= 0 on [0, inf)). At the
// indicator point x0 = (delta(1), ..., delta(2n-1)) the sum collapses to
// l2 * h(1), so f(x0) > 0 exactly when the target has a decomposition.
//
// Odd target 2n+1: g(x) = sum over unordered index pairs {i, 2n+1-i} of
// log(1 + x_i * x_{2n+1-i}); at the indicator point this is m2 * log 2.
// Note each unordered pair contributes the same log term twice when the sum
// is read literally over i = 1..2n, so a partial derivative of the literal
// sum is exactly twice the per-pair-term derivative; the audit below keeps
// that multiplicity explicit.
//
// Evaluation points replace every zero coordinate with a small epsilon.
// Expanding around epsilon = 0 gives cubic (even) / quadratic (odd)
// polynomials whose coefficients are census-linear; the remainder order is
// checked empirically by a log-log slope fit over an epsilon grid.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "figprime/census.hpp"
#include "figprime/figurate_set.hpp"

namespace figprime {

enum class Parity { even, odd };

inline const char* parity_name(Parity p) {
    return p == Parity::even ? "even" : "odd";
}

// Weight family for the even-parity sum, with closed-form derivatives. The
// evaluators must be defined on a neighbourhood of [0, 2] (finite-difference
// validation probes slightly below zero).
struct HFamily {
    std::string name;
    std::function<double(double)> h;
    std::function<double(double)> dh;
    std::function<double(double)> d2h;
    std::function<double(double)> d3h;
};

// Canonical instance h(x) = x * e^x.
HFamily make_x_exp_x();

struct HValidation {
    bool valid = true;
    std::vector<std::string> violations;
};

// Rejects families violating h(0) = 0, h(1) > 0, h''(0) > 0, or h >= 0 on a
// 1e-2-spaced grid of [0, 2], and cross-checks dh/d2h/d3h against central
// finite differences of h at x in {0, 1/16, 1}.
HValidation validate_h(const HFamily& family);

// Collapsed sums at the indicator point, evaluated literally term by term
// with compensated accumulation (no closed-form shortcut).
double h_sum_even(const FigurateSet& set, std::uint64_t n,
                  const HFamily& family);
double log_sum_odd(const FigurateSet& set, std::uint64_t n);

// Epsilon-structured evaluation point: x0 is the 0/1 indicator vector over
// the index range, x replaces each 0 with epsilon (figurate coordinates stay
// at 1), delta = x - x0 is epsilon exactly at non-figurate indices and 0
// elsewhere. Vectors are 0-based: x[i-1] is coordinate i.
struct EvaluationPoint {
    std::uint64_t n = 0;
    Parity parity = Parity::even;
    double epsilon = 0.0;
    std::vector<double> x0;
    std::vector<double> x;
    std::vector<double> delta;
};

// epsilon must lie in (0, 1); range requirements match census_even/odd.
EvaluationPoint make_point(const FigurateSet& set, std::uint64_t n,
                           Parity parity, double epsilon);

// Literal sums at an arbitrary coordinate vector (used by the finite
// difference audit). Size must be 2n-1 (even, odd length) resp. 2n (odd,
// even length); n is implied by the size.
double f_sum(const std::vector<double>& x, const HFamily& family);
double g_sum(const std::vector<double>& x);

// Literal sums at a structured point; the point is validated first
// (std::invalid_argument on a malformed one).
double f_direct(const EvaluationPoint& point, const HFamily& family);
double g_direct(const EvaluationPoint& point);

// Census-weighted closed forms; equal to the direct sums to rounding.
//   even: a4*h(e)*e + l1*h(e) + (l-l2)*h(1)*e + l2*h(1)
//   odd:  b4*log(1+e^2) + (m1 + m-m2)*log(1+e) + m2*log 2
double f_closed_form(const EvenCensus& census, const HFamily& family,
                     double epsilon);
double g_closed_form(const OddCensus& census, double epsilon);

// Taylor coefficients in epsilon around 0, lowest order first. Even parity
// is cubic (4 coefficients), odd quadratic (3):
//   even: c0 = l2*h(1)
//         c1 = l1*h'(0) + (l-l2)*h(1)
//         c2 = a4*h'(0) + l1*h''(0)/2
//         c3 = a4*h''(0)/2 + l1*h'''(0)/6
//   odd:  c0 = m2*log 2
//         c1 = m1 + (m - m2)
//         c2 = b4 - (m1 + m - m2)/2
// Taking the census by value keeps synthetic censuses testable.
std::vector<double> taylor_coeffs(const EvenCensus& census,
                                  const HFamily& family);
std::vector<double> taylor_coeffs(const OddCensus& census);

// Residuals of the first-order aggregation around the indicator point.
//
// Even: the aggregation step asserts that the epsilon-independent value at
// the indicator point is approximated by
//   l1*(-h(1)*e) + (l-l2)*h(1)*e + l2*h(1) + h''(0)/2 e^2 + h'''(0)/6 e^3;
// rho(e) is the exact gap (indicator value minus that display), which
// collapses to
//   rho(e) = (l1 - (l-l2))*h(1)*e - h''(0)/2 e^2 - h'''(0)/6 e^3,
// i.e. -e^2 - e^3/2 for h = x e^x since l1 = l - l2 always. The mismatch
// coefficient is computed in exact integer arithmetic (it is identically 0
// for censuses of a real membership set), so the value is clean to 1e-12
// instead of drowning in cancellation noise.
//
// Odd: Q(e) = b4*(log(1+e^2) - e^2/2) + m1*(log(1+e) - e + e^2/2)
//           + (m-m2)*log(1+e), with closed expansion
//   Q(e) = m1*e + (b4-m1)/2 e^2 + O(e^3).
double rho_residual(const EvenCensus& census, const HFamily& family,
                    double epsilon);
double q_residual(const OddCensus& census, double epsilon);

// Set-level entry point: computes the census for (n, parity) and dispatches
// to rho_residual / q_residual.
double aggregation_residual(const FigurateSet& set, std::uint64_t n,
                            Parity parity, const HFamily& family,
                            double epsilon);

// Finite-difference audit of the closed-form derivative expressions at the
// indicator point x0. Each entry reports the worst relative error
// |fd - mult*closed| / max(1, |mult*closed|) over the sampled coordinates,
// where mult is the pair multiplicity of the literal sum: 1 for even parity,
// 2 for odd (each unordered index pair appears twice in the odd sum, so the
// true partial of the literal sum is twice the per-pair-term expression).
struct DerivativeAuditEntry {
    std::string formula;     // e.g. "f_xi", "f_xi_xj", "g_xi_xi"
    int order = 0;           // 1, 2, or 3
    double tolerance = 0.0;  // 1e-6 for order 1, 1e-4 for orders 2 and 3
    double max_rel_error = 0.0;
    std::uint64_t samples = 0;

    bool passed() const { return samples == 0 || max_rel_error <= tolerance; }
};

struct DerivativeAuditOptions {
    unsigned random_indices = 6;     // extra sample coordinates per formula
    std::uint64_t seed = 0x5eedULL;  // deterministic sampling
};

std::vector<DerivativeAuditEntry> derivative_audit(
    const FigurateSet& set, std::uint64_t n, Parity parity,
    const HFamily& family, const DerivativeAuditOptions& options = {});

bool derivative_audit_passed(const std::vector<DerivativeAuditEntry>& entries);

// Remainder study over an epsilon grid.
struct ExpansionReport {
    std::uint64_t n = 0;
    Parity parity = Parity::even;
    std::uint64_t count_all = 0;    // l or m
    std::uint64_t count_cross = 0;  // l1 or m1
    std::uint64_t count_both = 0;   // l2 or m2
    std::vector<double> coeffs;
    std::vector<double> grid;       // decreasing epsilons
    std::vector<double> exact;      // literal sum at each grid point
    std::vector<double> truncated;  // Taylor polynomial at each grid point
    std::vector<double> remainder;  // exact - truncated, regrouped evaluation
    std::vector<double> ratio;      // |remainder| / eps^(order+1)
    std::vector<double> residual;   // rho (even) or Q (odd) at each grid point
    // Least-squares slope of log|remainder| against log eps; grid points with
    // |remainder| <= 1e-14 are discarded, and fewer than three surviving
    // points leave the fit inconclusive (nullopt) rather than wrong.
    std::optional<double> slope;
};

// Dyadic grid 2^-4, 2^-5, ..., 2^-12.
std::vector<double> default_epsilon_grid();

ExpansionReport remainder_scan(const FigurateSet& set, std::uint64_t n,
                               Parity parity, const HFamily& family,
                               std::vector<double> grid = {});

std::string expansion_report_to_json(const ExpansionReport& report);
// CSV: header "epsilon,exact,truncated,remainder,ratio", one row per grid
// point, full round-trip precision.
std::string expansion_report_to_csv(const ExpansionReport& report);

}  // namespace figprime
