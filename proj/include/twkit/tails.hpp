#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twkit/painleve.hpp"

namespace twkit {

enum class TailSide { left, right };

/// Survival-type function x -> P(X > x), held as its logarithm so deep tails
/// (exp(-10^6) and beyond) stay representable. Outside [valid_min, valid_max]
/// the values are not trusted; callers check valid_at().
class TailFunction {
public:
    using LogFn = std::function<double(double)>;

    TailFunction(LogFn log_survival, std::string description,
                 double valid_min = -std::numeric_limits<double>::infinity(),
                 double valid_max = std::numeric_limits<double>::infinity());

    double log_survival(double x) const { return log_fn_(x); }
    double survival(double x) const;
    double operator()(double x) const { return survival(x); }

    bool valid_at(double x) const noexcept { return x >= valid_min_ && x <= valid_max_; }
    double valid_min() const noexcept { return valid_min_; }
    double valid_max() const noexcept { return valid_max_; }
    const std::string& description() const noexcept { return description_; }

private:
    LogFn log_fn_;
    std::string description_;
    double valid_min_;
    double valid_max_;
};

/// Leading-order tail logarithms, the o(1) factor dropped:
/// Left:  log P(TW_beta < -x) = -beta x^3 / 24
/// Right: log P(TW_beta >  x) = -(2/3) beta x^{3/2}
/// Throws std::domain_error unless beta > 0 and x > 0.
double tail_asymptote(double beta, TailSide side, double x);

/// log[P(TW < -x) + P(TW > x)] from the two asymptotes, computed in log space.
double two_sided_tail(double beta, double x);

// TailFunction factories --------------------------------------------------

/// x -> exp(tail_asymptote(beta, side, x)), valid for x > 0.
TailFunction asymptote_tail(double beta, TailSide side);
/// x -> exp(two_sided_tail(beta, x)), valid for x > 0.
TailFunction asymptote_two_sided_tail(double beta);

/// Painleve-backed tails of the edge law TW_beta (beta in {1, 2, 4}). The
/// returned function refers to sol, which must outlive it.
/// Right: P(TW > x); Left: P(TW < -x). Valid where the table covers the argument.
TailFunction painleve_tail(TwBeta beta, TailSide side, const PainleveSolution& sol);
/// P(|TW| > x) = left + right, valid for x >= 0 inside the table.
TailFunction painleve_two_sided_tail(TwBeta beta, const PainleveSolution& sol);

/// Empirical P(|X - center| / scale > x) from ascending samples, trusted on
/// [valid_min, valid_max]. Returns -infinity where no sample exceeds x.
TailFunction empirical_abs_tail(std::vector<double> sorted_samples, double center, double scale,
                                double valid_min, double valid_max);
/// Empirical P(X > x).
TailFunction empirical_tail_function(std::vector<double> sorted_samples, double valid_min, double valid_max);

// Criteria ------------------------------------------------------------------

/// -log P(|X| > x) / (x log x). +infinity when the tail is exactly zero.
/// Requires x > 1; throws std::domain_error if the tail is >= 1.
double id_gaussian_statistic(const TailFunction& abs_tail, double x);

struct BoundCheckRow {
    double x;
    double log_tail;
    double log_bound;
    bool pass;
};

struct BoundCheck {
    bool holds = true;
    std::optional<double> witness;  // first violating x
    std::vector<BoundCheckRow> rows;
};

/// Whether P(|X| > x) <= a exp(-b x^c) at every grid point (compared in log space).
BoundCheck check_exponential_bound(const TailFunction& abs_tail, double a, double b, double c,
                                   std::span<const double> x_grid);

enum class ConcentrationEnsemble { goe, gue };

/// Finite-N two-sided concentration bounds on the largest eigenvalue:
/// GOE: exp(-N x^2 / 9) for P(|lambda_max / sqrt(N)| >= x);
/// GUE: min(1, 2 exp(-2 N x^2)) for P(|lambda_max - E lambda_max| / sqrt(N) >= x).
/// Both apply to lambda_max normalized by sqrt(N) (spectrum near [-2, 2]).
double concentration_bound(ConcentrationEnsemble ensemble, std::size_t n, double x);

/// Necessary condition for infinite divisibility on the half line:
/// -log P(X > x) <= a x log x. holds == false carries the first violating x.
BoundCheck rplus_id_check(const TailFunction& tail, double a, std::span<const double> x_grid);

/// Wigner surmise (pi/2) s exp(-pi s^2 / 4), mean spacing 1. Throws for s <= 0.
double wigner_surmise_pdf(double s);
double wigner_surmise_cdf(double s);
/// exp(-pi s^2 / 4) as a TailFunction on s > 0.
TailFunction wigner_surmise_tail();

// Tail transforms -----------------------------------------------------------

/// Component tails of a real law: left(x) = P(X < -x), right(x) = P(X > x), x >= 0.
struct TailPair {
    TailFunction left;
    TailFunction right;
};

struct TailTransform {
    enum class Mode { absolute_value, truncate_left, truncate_right };
    Mode mode = Mode::absolute_value;
    double at = 0.0;  // truncation point

    static TailTransform absolute_value() { return {Mode::absolute_value, 0.0}; }
    /// Law of X conditioned on X >= t.
    static TailTransform truncate_left(double t) { return {Mode::truncate_left, t}; }
    /// Law of X conditioned on X <= t.
    static TailTransform truncate_right(double t) { return {Mode::truncate_right, t}; }
};

/// Survival function of |X| or of a truncation of X. Truncations that keep
/// zero mass throw std::domain_error.
TailFunction transform_tail(const TailPair& tails, TailTransform transform);

// Classification ------------------------------------------------------------

enum class IdVerdictKind { not_id_gaussian_criterion, not_id_subexponential_bound, not_id_rplus_criterion, inconclusive };

std::string to_string(IdVerdictKind kind);

struct IdVerdict {
    IdVerdictKind verdict = IdVerdictKind::inconclusive;
    std::vector<std::pair<double, double>> evidence;  // (x, statistic)
    double threshold_used = 0.0;
    std::string note;
};

/// Parameters of a bound a exp(-b x^c), checked on its own grid.
struct ExponentialBound {
    double a = 1.0;
    double b = 1.0;
    double c = 2.0;
    std::vector<double> grid;
};

struct ClassifyOptions {
    /// The caller asserts the law is non-Gaussian and non-degenerate. Without
    /// it no NotID verdict is issued.
    bool non_gaussian = false;
    std::optional<ExponentialBound> bound;
    /// For laws on the half line: a-values scanned by rplus_id_check on
    /// the evidence grid; all must fail for a NotID verdict.
    std::vector<double> rplus_scan;
};

/// Gaussian-tail criterion on evidence_grid: if the statistic's largest value
/// in the top decade exceeds threshold and the statistic increases across the
/// last half of the grid, NotID_GaussianCriterion. Otherwise the optional exponential bound,
/// then the optional half-line scan, else Inconclusive. Never certifies ID.
/// evidence_grid must be ascending, have >= 8 points > 1, and span a decade.
IdVerdict classify_id(const TailFunction& two_sided_tail, std::span<const double> evidence_grid, double threshold,
                      const ClassifyOptions& options);

/// Logarithmically spaced grid of `count` points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);
/// Evenly spaced grid of `count` points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace twkit
