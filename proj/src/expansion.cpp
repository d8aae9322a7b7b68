#include "figprime/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace figprime {

namespace {

// Neumaier-compensated accumulation: keeps each literal sum accurate to a
// couple of ulps of the true total, which is what lets the third-order
// finite differences (noise divided by 2e-9) stay inside their tolerance.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        const double t = sum + value;
        if (std::abs(sum) >= std::abs(value)) {
            comp += (sum - t) + value;
        } else {
            comp += (value - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

void require_even_range(const FigurateSet& set, std::uint64_t n) {
    if (n < 3) throw std::out_of_range("even parity requires n >= 3");
    if (2 * n - 1 > set.max_n()) {
        throw std::out_of_range("even parity requires 2n-1 <= max_n");
    }
}

void require_odd_range(const FigurateSet& set, std::uint64_t n) {
    if (n < 1) throw std::out_of_range("odd parity requires n >= 1");
    if (2 * n > set.max_n()) {
        throw std::out_of_range("odd parity requires 2n <= max_n");
    }
}

double rel_error(double measured, double reference) {
    return std::abs(measured - reference) / std::max(1.0, std::abs(reference));
}

}  // namespace

HFamily make_x_exp_x() {
    HFamily family;
    family.name = "x_exp_x";
    family.h = [](double x) { return x * std::exp(x); };
    family.dh = [](double x) { return (1.0 + x) * std::exp(x); };
    family.d2h = [](double x) { return (2.0 + x) * std::exp(x); };
    family.d3h = [](double x) { return (3.0 + x) * std::exp(x); };
    return family;
}

HValidation validate_h(const HFamily& family) {
    HValidation result;
    const auto flag = [&](std::string message) {
        result.valid = false;
        result.violations.push_back(std::move(message));
    };
    if (!family.h || !family.dh || !family.d2h || !family.d3h) {
        flag("missing evaluator");
        return result;
    }
    if (std::abs(family.h(0.0)) > 1e-12) flag("h(0) != 0");
    if (!(family.h(1.0) > 0.0)) flag("h(1) <= 0");
    if (!(family.d2h(0.0) > 0.0)) flag("h''(0) <= 0");
    for (int k = 0; k <= 200; ++k) {
        const double x = k * 1e-2;
        if (family.h(x) < 0.0) {
            std::ostringstream msg;
            msg << "h(" << x << ") < 0";
            flag(msg.str());
            break;
        }
    }
    // Each claimed derivative must track a central finite difference of h.
    for (const double x : {0.0, 0.0625, 1.0}) {
        const double s1 = 1e-5;
        const double fd1 = (family.h(x + s1) - family.h(x - s1)) / (2 * s1);
        const double s2 = 1e-4;
        const double fd2 =
            (family.h(x + s2) - 2 * family.h(x) + family.h(x - s2)) / (s2 * s2);
        const double s3 = 1e-3;
        const double fd3 = (family.h(x + 2 * s3) - 2 * family.h(x + s3) +
                            2 * family.h(x - s3) - family.h(x - 2 * s3)) /
                           (2 * s3 * s3 * s3);
        if (rel_error(fd1, family.dh(x)) > 1e-6) {
            std::ostringstream msg;
            msg << "h'(" << x << ") disagrees with finite difference";
            flag(msg.str());
        }
        if (rel_error(fd2, family.d2h(x)) > 1e-6) {
            std::ostringstream msg;
            msg << "h''(" << x << ") disagrees with finite difference";
            flag(msg.str());
        }
        if (rel_error(fd3, family.d3h(x)) > 1e-6) {
            std::ostringstream msg;
            msg << "h'''(" << x << ") disagrees with finite difference";
            flag(msg.str());
        }
    }
    return result;
}

double h_sum_even(const FigurateSet& set, std::uint64_t n,
                  const HFamily& family) {
    require_even_range(set, n);
    const double h0 = family.h(0.0);
    const double h1 = family.h(1.0);
    CompensatedSum acc;
    for (std::uint64_t i = 1; i <= 2 * n - 1; ++i) {
        if (!set.test_unchecked(2 * n - i)) continue;  // factor delta(2n-i) = 0
        acc.add(set.test_unchecked(i) ? h1 : h0);
    }
    return acc.value();
}

double log_sum_odd(const FigurateSet& set, std::uint64_t n) {
    require_odd_range(set, n);
    CompensatedSum acc;
    for (std::uint64_t i = 1; i <= 2 * n; ++i) {
        if (set.test_unchecked(i) && set.test_unchecked(2 * n + 1 - i)) {
            acc.add(std::log1p(1.0));
        }
    }
    return acc.value();
}

EvaluationPoint make_point(const FigurateSet& set, std::uint64_t n,
                           Parity parity, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("make_point: epsilon must lie in (0, 1)");
    }
    if (parity == Parity::even) {
        require_even_range(set, n);
    } else {
        require_odd_range(set, n);
    }
    const std::uint64_t size = parity == Parity::even ? 2 * n - 1 : 2 * n;
    EvaluationPoint point;
    point.n = n;
    point.parity = parity;
    point.epsilon = epsilon;
    point.x0.reserve(size);
    point.x.reserve(size);
    point.delta.reserve(size);
    for (std::uint64_t i = 1; i <= size; ++i) {
        const bool member = set.test_unchecked(i);
        point.x0.push_back(member ? 1.0 : 0.0);
        point.x.push_back(member ? 1.0 : epsilon);
        point.delta.push_back(member ? 0.0 : epsilon);
    }
    return point;
}

namespace {

void require_structured(const EvaluationPoint& point, Parity parity) {
    if (point.parity != parity) {
        throw std::invalid_argument("evaluation point has the wrong parity");
    }
    const std::uint64_t min_n = parity == Parity::even ? 3 : 1;
    if (point.n < min_n) {
        throw std::invalid_argument("evaluation point: n below parity minimum");
    }
    const std::size_t want =
        parity == Parity::even ? 2 * point.n - 1 : 2 * point.n;
    if (point.x0.size() != want || point.x.size() != want ||
        point.delta.size() != want) {
        throw std::invalid_argument("evaluation point: vector length mismatch");
    }
    if (!(point.epsilon > 0.0 && point.epsilon < 1.0)) {
        throw std::invalid_argument("evaluation point: epsilon outside (0, 1)");
    }
    for (std::size_t k = 0; k < want; ++k) {
        if (point.x0[k] != 0.0 && point.x0[k] != 1.0) {
            throw std::invalid_argument("evaluation point: x0 entry not 0/1");
        }
        const bool member = point.x0[k] == 1.0;
        if (point.x[k] != (member ? 1.0 : point.epsilon) ||
            point.delta[k] != (member ? 0.0 : point.epsilon)) {
            throw std::invalid_argument(
                "evaluation point: x / delta not epsilon-structured");
        }
    }
}

}  // namespace

double f_sum(const std::vector<double>& x, const HFamily& family) {
    if (x.size() % 2 == 0 || x.size() < 5) {
        throw std::invalid_argument("f_sum: length must be 2n-1 with n >= 3");
    }
    const std::uint64_t n = (x.size() + 1) / 2;
    CompensatedSum acc;
    for (std::uint64_t i = 1; i <= 2 * n - 1; ++i) {
        acc.add(family.h(x[i - 1]) * x[2 * n - i - 1]);
    }
    return acc.value();
}

double g_sum(const std::vector<double>& x) {
    if (x.size() % 2 != 0 || x.size() < 2) {
        throw std::invalid_argument("g_sum: length must be 2n with n >= 1");
    }
    const std::uint64_t n = x.size() / 2;
    CompensatedSum acc;
    for (std::uint64_t i = 1; i <= 2 * n; ++i) {
        acc.add(std::log1p(x[i - 1] * x[2 * n + 1 - i - 1]));
    }
    return acc.value();
}

double f_direct(const EvaluationPoint& point, const HFamily& family) {
    require_structured(point, Parity::even);
    return f_sum(point.x, family);
}

double g_direct(const EvaluationPoint& point) {
    require_structured(point, Parity::odd);
    return g_sum(point.x);
}

double f_closed_form(const EvenCensus& census, const HFamily& family,
                     double epsilon) {
    const double he = family.h(epsilon);
    const double h1 = family.h(1.0);
    return (double)census.a4() * he * epsilon + (double)census.l1 * he +
           (double)census.a6() * h1 * epsilon + (double)census.l2 * h1;
}

double g_closed_form(const OddCensus& census, double epsilon) {
    return (double)census.b4() * std::log1p(epsilon * epsilon) +
           ((double)census.m1 + (double)census.b6()) * std::log1p(epsilon) +
           (double)census.m2 * std::log(2.0);
}

std::vector<double> taylor_coeffs(const EvenCensus& census,
                                  const HFamily& family) {
    const double h1 = family.h(1.0);
    const double dh0 = family.dh(0.0);
    const double d2h0 = family.d2h(0.0);
    const double d3h0 = family.d3h(0.0);
    const double a4 = (double)census.a4();
    const double l1 = (double)census.l1;
    const double l6 = (double)census.a6();  // l - l2
    return {
        (double)census.l2 * h1,
        l1 * dh0 + l6 * h1,
        a4 * dh0 + 0.5 * l1 * d2h0,
        0.5 * a4 * d2h0 + l1 * d3h0 / 6.0,
    };
}

std::vector<double> taylor_coeffs(const OddCensus& census) {
    const double cross = (double)census.m1 + (double)census.b6();
    return {
        (double)census.m2 * std::log(2.0),
        cross,
        (double)census.b4() - 0.5 * cross,
    };
}

double rho_residual(const EvenCensus& census, const HFamily& family,
                    double epsilon) {
    // Exact integer mismatch l1 - (l - l2); identically zero for censuses of
    // a real membership set, so the epsilon term drops out without rounding.
    const double mismatch =
        (double)((std::int64_t)census.l1 -
                 ((std::int64_t)census.l - (std::int64_t)census.l2));
    const double e2 = epsilon * epsilon;
    return mismatch * family.h(1.0) * epsilon - 0.5 * family.d2h(0.0) * e2 -
           family.d3h(0.0) * e2 * epsilon / 6.0;
}

double q_residual(const OddCensus& census, double epsilon) {
    const double e2 = epsilon * epsilon;
    return (double)census.b4() * (std::log1p(e2) - 0.5 * e2) +
           (double)census.m1 * (std::log1p(epsilon) - epsilon + 0.5 * e2) +
           (double)census.b6() * std::log1p(epsilon);
}

double aggregation_residual(const FigurateSet& set, std::uint64_t n,
                            Parity parity, const HFamily& family,
                            double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument(
            "aggregation_residual: epsilon must lie in (0, 1)");
    }
    if (parity == Parity::even) {
        return rho_residual(census_even(set, n), family, epsilon);
    }
    return q_residual(census_odd(set, n), epsilon);
}

namespace {

// ---- Finite-difference stencils over the literal sums ------------------
//
// Steps are pinned: 1e-5 first order, 1e-4 second, 1e-3 third. Central
// stencils throughout; higher orders nest central differences.

constexpr double kStep1 = 1e-5;
constexpr double kStep2 = 1e-4;
constexpr double kStep3 = 1e-3;

template <typename F>
double fd1(const F& func, std::vector<double> x, std::size_t i) {
    x[i] += kStep1;
    const double plus = func(x);
    x[i] -= 2 * kStep1;
    const double minus = func(x);
    return (plus - minus) / (2 * kStep1);
}

template <typename F>
double fd2_diag(const F& func, std::vector<double> x, std::size_t i) {
    const double center = func(x);
    x[i] += kStep2;
    const double plus = func(x);
    x[i] -= 2 * kStep2;
    const double minus = func(x);
    return (plus - 2 * center + minus) / (kStep2 * kStep2);
}

template <typename F>
double fd2_cross(const F& func, std::vector<double> x, std::size_t i,
                 std::size_t j) {
    double total = 0.0;
    for (const double si : {kStep2, -kStep2}) {
        for (const double sj : {kStep2, -kStep2}) {
            std::vector<double> probe = x;
            probe[i] += si;
            probe[j] += sj;
            total += (si * sj > 0 ? 1.0 : -1.0) * func(probe);
        }
    }
    return total / (4 * kStep2 * kStep2);
}

template <typename F>
double fd3_diag(const F& func, std::vector<double> x, std::size_t i) {
    const auto at = [&](double offset) {
        std::vector<double> probe = x;
        probe[i] += offset;
        return func(probe);
    };
    return (at(2 * kStep3) - 2 * at(kStep3) + 2 * at(-kStep3) -
            at(-2 * kStep3)) /
           (2 * kStep3 * kStep3 * kStep3);
}

// d^3/dx_i^2 dx_j as a central difference (in j) of second diagonals (in i).
template <typename F>
double fd3_iij(const F& func, std::vector<double> x, std::size_t i,
               std::size_t j) {
    const auto d2_at = [&](double offset_j) {
        std::vector<double> probe = x;
        probe[j] += offset_j;
        const double center = func(probe);
        probe[i] += kStep3;
        const double plus = func(probe);
        probe[i] -= 2 * kStep3;
        const double minus = func(probe);
        return (plus - 2 * center + minus) / (kStep3 * kStep3);
    };
    return (d2_at(kStep3) - d2_at(-kStep3)) / (2 * kStep3);
}

struct FormulaCase {
    std::size_t i = 0;  // 0-based coordinate
    std::size_t j = 0;  // 0-based mirror (or unrelated index for zero cases)
};

}  // namespace

std::vector<DerivativeAuditEntry> derivative_audit(
    const FigurateSet& set, std::uint64_t n, Parity parity,
    const HFamily& family, const DerivativeAuditOptions& options) {
    // The audit anchors at the indicator point x0 itself.
    if (parity == Parity::even) {
        require_even_range(set, n);
    } else {
        require_odd_range(set, n);
    }
    const std::uint64_t size = parity == Parity::even ? 2 * n - 1 : 2 * n;
    std::vector<double> x0(size);
    for (std::uint64_t i = 1; i <= size; ++i) {
        x0[i - 1] = set.test_unchecked(i) ? 1.0 : 0.0;
    }

    // Sample coordinates: the first index of each (delta_i, delta_mirror)
    // class plus a deterministic batch of random indices. The diagonal i = n
    // (even parity only) is handled by its own formulas.
    std::vector<std::size_t> samples;
    {
        bool seen[2][2] = {{false, false}, {false, false}};
        const auto mirror_of = [&](std::uint64_t i) {
            return parity == Parity::even ? 2 * n - i : 2 * n + 1 - i;
        };
        for (std::uint64_t i = 1; i <= size; ++i) {
            if (parity == Parity::even && i == n) continue;
            const int a = x0[i - 1] == 1.0 ? 1 : 0;
            const int b = x0[mirror_of(i) - 1] == 1.0 ? 1 : 0;
            if (!seen[a][b]) {
                seen[a][b] = true;
                samples.push_back(i - 1);
            }
        }
        std::mt19937_64 rng(options.seed + n * 2 + (parity == Parity::odd));
        std::uniform_int_distribution<std::uint64_t> pick(1, size);
        for (unsigned k = 0; k < options.random_indices; ++k) {
            std::uint64_t i = pick(rng);
            if (parity == Parity::even && i == n) i = (i == 1) ? 2 : i - 1;
            samples.push_back(i - 1);
        }
        std::sort(samples.begin(), samples.end());
        samples.erase(std::unique(samples.begin(), samples.end()),
                      samples.end());
    }

    std::vector<DerivativeAuditEntry> entries;
    const auto record = [&](const char* formula, int order, double fd,
                            double closed, double multiplicity) {
        const double reference = multiplicity * closed;
        const double err = rel_error(fd, reference);
        for (DerivativeAuditEntry& entry : entries) {
            if (entry.formula == formula) {
                entry.max_rel_error = std::max(entry.max_rel_error, err);
                ++entry.samples;
                return;
            }
        }
        entries.push_back({formula, order, order == 1 ? 1e-6 : 1e-4, err, 1});
    };

    if (parity == Parity::even) {
        const auto func = [&](const std::vector<double>& x) {
            return f_sum(x, family);
        };
        const auto mirror = [&](std::size_t i) { return 2 * (n - 1) - i; };
        // An index unrelated to both i and its mirror, for the zero cases.
        const auto unrelated = [&](std::size_t i) {
            for (std::size_t k = 0; k < size; ++k) {
                if (k != i && k != mirror(i) && k != n - 1) return k;
            }
            return i;  // unreachable for n >= 3
        };
        for (const std::size_t i : samples) {
            const std::size_t j = mirror(i);
            const double xi = x0[i];
            const double xj = x0[j];
            record("f_xi", 1, fd1(func, x0, i),
                   family.dh(xi) * xj + family.h(xj), 1.0);
            record("f_xi_xi", 2, fd2_diag(func, x0, i), family.d2h(xi) * xj,
                   1.0);
            if (i != j) {
                record("f_xi_xj", 2, fd2_cross(func, x0, i, j),
                       family.dh(xi) + family.dh(xj), 1.0);
                record("f_xi_xi_xj", 3, fd3_iij(func, x0, i, j),
                       family.d2h(xi), 1.0);
                record("f_xi_xj_xj", 3, fd3_iij(func, x0, j, i),
                       family.d2h(xj), 1.0);
            }
            const std::size_t k = unrelated(i);
            if (k != i) {
                record("f_xi_xk_zero", 2, fd2_cross(func, x0, i, k), 0.0, 1.0);
            }
            record("f_xi_xi_xi", 3, fd3_diag(func, x0, i),
                   family.d3h(xi) * xj, 1.0);
        }
        // Self-mirrored diagonal i = n: the term h(x_n)x_n differentiates to
        // its own family of formulas.
        const std::size_t d = n - 1;
        const double xn = x0[d];
        record("f_xn", 1, fd1(func, x0, d),
               family.dh(xn) * xn + family.h(xn), 1.0);
        record("f_xn_xn", 2, fd2_diag(func, x0, d),
               family.d2h(xn) * xn + 2 * family.dh(xn), 1.0);
        record("f_xn_xn_xn", 3, fd3_diag(func, x0, d),
               family.d3h(xn) * xn + 3 * family.d2h(xn), 1.0);
    } else {
        const auto func = [&](const std::vector<double>& x) { return g_sum(x); };
        const auto mirror = [&](std::size_t i) { return 2 * n - 1 - i; };
        const auto unrelated = [&](std::size_t i) {
            for (std::size_t k = 0; k < size; ++k) {
                if (k != i && k != mirror(i)) return k;
            }
            return i;  // unreachable for n >= 1
        };
        // Each unordered pair {i, mirror} contributes two identical log
        // terms to the literal sum, so finite differences of g_sum see twice
        // the per-pair-term closed forms.
        const double mult = 2.0;
        for (const std::size_t i : samples) {
            const std::size_t j = mirror(i);
            const double xi = x0[i];
            const double xj = x0[j];
            const double denom = 1.0 + xi * xj;
            record("g_xi", 1, fd1(func, x0, i), xj / denom, mult);
            record("g_xi_xi", 2, fd2_diag(func, x0, i),
                   -(xj * xj) / (denom * denom), mult);
            record("g_xi_xj", 2, fd2_cross(func, x0, i, j),
                   1.0 / (denom * denom), mult);
            const std::size_t k = unrelated(i);
            if (k != i) {
                record("g_xi_xk_zero", 2, fd2_cross(func, x0, i, k), 0.0, mult);
            }
        }
    }
    return entries;
}

bool derivative_audit_passed(const std::vector<DerivativeAuditEntry>& entries) {
    return std::all_of(entries.begin(), entries.end(),
                       [](const DerivativeAuditEntry& e) { return e.passed(); });
}

std::vector<double> default_epsilon_grid() {
    std::vector<double> grid;
    for (int k = 4; k <= 12; ++k) grid.push_back(std::ldexp(1.0, -k));
    return grid;
}

namespace {

double poly_eval(const std::vector<double>& coeffs, double epsilon) {
    double value = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        value = value * epsilon + *it;
    }
    return value;
}

// Remainder exact(e) - truncated(e), evaluated per census class so the
// cancelling low-order parts are subtracted inside each analytic bracket
// instead of between two large nearly-equal totals. Algebraically identical
// to the naive difference; numerically clean down to the smallest grid eps.
double remainder_even(const EvenCensus& census, const HFamily& family,
                      double e) {
    const double dh0 = family.dh(0.0);
    const double d2h0 = family.d2h(0.0);
    const double d3h0 = family.d3h(0.0);
    const double he = family.h(e);
    const double a4_bracket = he * e - dh0 * e * e - 0.5 * d2h0 * e * e * e;
    const double l1_bracket =
        he - dh0 * e - 0.5 * d2h0 * e * e - d3h0 * e * e * e / 6.0;
    return (double)census.a4() * a4_bracket + (double)census.l1 * l1_bracket;
}

double remainder_odd(const OddCensus& census, double e) {
    const double pair_bracket = std::log1p(e * e) - e * e;
    const double cross_bracket = std::log1p(e) - e + 0.5 * e * e;
    return (double)census.b4() * pair_bracket +
           ((double)census.m1 + (double)census.b6()) * cross_bracket;
}

std::optional<double> fit_slope(const std::vector<double>& grid,
                                const std::vector<double>& remainder) {
    // Least squares of log|R| against log eps, skipping points at noise level.
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(remainder[k]) > 1e-14) {
            xs.push_back(std::log(grid[k]));
            ys.push_back(std::log(std::abs(remainder[k])));
        }
    }
    if (xs.size() < 3) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double count = (double)xs.size();
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (count * sxy - sx * sy) / denom;
}

}  // namespace

ExpansionReport remainder_scan(const FigurateSet& set, std::uint64_t n,
                               Parity parity, const HFamily& family,
                               std::vector<double> grid) {
    if (grid.empty()) grid = default_epsilon_grid();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0 && grid[k] < 1.0)) {
            throw std::invalid_argument("remainder_scan: grid outside (0, 1)");
        }
        if (k > 0 && grid[k] >= grid[k - 1]) {
            throw std::invalid_argument("remainder_scan: grid must decrease");
        }
    }
    ExpansionReport report;
    report.n = n;
    report.parity = parity;
    report.grid = grid;
    if (parity == Parity::even) {
        const EvenCensus census = census_even(set, n);
        report.count_all = census.l;
        report.count_cross = census.l1;
        report.count_both = census.l2;
        report.coeffs = taylor_coeffs(census, family);
        for (const double e : grid) {
            report.exact.push_back(
                f_direct(make_point(set, n, parity, e), family));
            report.truncated.push_back(poly_eval(report.coeffs, e));
            report.remainder.push_back(remainder_even(census, family, e));
            report.residual.push_back(rho_residual(census, family, e));
        }
    } else {
        const OddCensus census = census_odd(set, n);
        report.count_all = census.m;
        report.count_cross = census.m1;
        report.count_both = census.m2;
        report.coeffs = taylor_coeffs(census);
        for (const double e : grid) {
            report.exact.push_back(g_direct(make_point(set, n, parity, e)));
            report.truncated.push_back(poly_eval(report.coeffs, e));
            report.remainder.push_back(remainder_odd(census, e));
            report.residual.push_back(q_residual(census, e));
        }
    }
    const int degree = parity == Parity::even ? 3 : 2;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        report.ratio.push_back(std::abs(report.remainder[k]) /
                               std::pow(grid[k], degree + 1));
    }
    report.slope = fit_slope(report.grid, report.remainder);
    return report;
}

std::string expansion_report_to_json(const ExpansionReport& report) {
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["parity"] = parity_name(report.parity);
    j["target"] = report.parity == Parity::even ? 2 * report.n : 2 * report.n + 1;
    nlohmann::ordered_json census = nlohmann::ordered_json::object();
    if (report.parity == Parity::even) {
        census["l"] = report.count_all;
        census["l1"] = report.count_cross;
        census["l2"] = report.count_both;
    } else {
        census["m"] = report.count_all;
        census["m1"] = report.count_cross;
        census["m2"] = report.count_both;
    }
    j["census"] = std::move(census);
    j["coeffs"] = report.coeffs;
    j["grid"] = report.grid;
    j["exact"] = report.exact;
    j["truncated"] = report.truncated;
    j["remainder"] = report.remainder;
    j["ratio"] = report.ratio;
    j["residual"] = report.residual;
    if (report.slope) {
        j["slope"] = *report.slope;
    } else {
        j["slope"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string expansion_report_to_csv(const ExpansionReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "epsilon,exact,truncated,remainder,ratio\n";
    for (std::size_t k = 0; k < report.grid.size(); ++k) {
        out << report.grid[k] << ',' << report.exact[k] << ','
            << report.truncated[k] << ',' << report.remainder[k] << ','
            << report.ratio[k] << '\n';
    }
    return out.str();
}

}  // namespace figprime
