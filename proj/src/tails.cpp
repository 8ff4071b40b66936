#include "twkit/tails.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace twkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log(1 - exp(a)) for a <= 0.
double log1m_exp(double a) {
    if (a == -kInf) return 0.0;
    if (a >= 0.0) return -kInf;
    return a > -std::numbers::ln2 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || std::isnan(v)) {
        throw std::domain_error(std::string(what) + " must be positive");
    }
}

}  // namespace

TailFunction::TailFunction(LogFn log_survival, std::string description, double valid_min, double valid_max)
    : log_fn_(std::move(log_survival)), description_(std::move(description)), valid_min_(valid_min),
      valid_max_(valid_max) {
    if (!log_fn_) throw std::invalid_argument("TailFunction: empty function");
    if (!(valid_min_ <= valid_max_)) throw std::invalid_argument("TailFunction: empty validity range");
}

double TailFunction::survival(double x) const {
    return std::clamp(std::exp(log_fn_(x)), 0.0, 1.0);
}

double tail_asymptote(double beta, TailSide side, double x) {
    require_positive(beta, "beta");
    require_positive(x, "x");
    if (side == TailSide::left) return -beta * x * x * x / 24.0;
    return -2.0 / 3.0 * beta * x * std::sqrt(x);
}

double two_sided_tail(double beta, double x) {
    return log_add(tail_asymptote(beta, TailSide::left, x), tail_asymptote(beta, TailSide::right, x));
}

TailFunction asymptote_tail(double beta, TailSide side) {
    require_positive(beta, "beta");
    std::ostringstream d;
    d << "asymptote " << (side == TailSide::left ? "left" : "right") << " tail, beta=" << beta;
    return TailFunction([beta, side](double x) { return tail_asymptote(beta, side, x); }, d.str(),
                        std::numeric_limits<double>::min(), kInf);
}

TailFunction asymptote_two_sided_tail(double beta) {
    require_positive(beta, "beta");
    std::ostringstream d;
    d << "asymptote two-sided tail, beta=" << beta;
    return TailFunction([beta](double x) { return two_sided_tail(beta, x); }, d.str(),
                        std::numeric_limits<double>::min(), kInf);
}

TailFunction painleve_tail(TwBeta beta, TailSide side, const PainleveSolution& sol) {
    const double scale = edge_argument_scale(beta);
    std::ostringstream d;
    d << "painleve " << (side == TailSide::left ? "left" : "right") << " tail, beta=" << to_int(beta);
    if (side == TailSide::right) {
        return TailFunction(
            [beta, &sol](double x) { return std::log(tw_edge_survival(beta, x, sol)); }, d.str(),
            std::max(0.0, sol.s_min() / scale), sol.s_max() / scale);
    }
    return TailFunction([beta, &sol](double x) { return tw_edge_log_cdf(beta, -x, sol); }, d.str(),
                        std::max(0.0, -sol.s_max() / scale), -sol.s_min() / scale);
}

TailFunction painleve_two_sided_tail(TwBeta beta, const PainleveSolution& sol) {
    const double scale = edge_argument_scale(beta);
    std::ostringstream d;
    d << "painleve two-sided tail, beta=" << to_int(beta);
    const double hi = std::min(sol.s_max(), -sol.s_min()) / scale;
    return TailFunction(
        [beta, &sol](double x) {
            return log_add(tw_edge_log_cdf(beta, -x, sol), std::log(tw_edge_survival(beta, x, sol)));
        },
        d.str(), 0.0, hi);
}

TailFunction empirical_abs_tail(std::vector<double> sorted_samples, double center, double scale,
                                double valid_min, double valid_max) {
    if (sorted_samples.empty()) throw std::invalid_argument("empirical_abs_tail: no samples");
    require_positive(scale, "scale");
    if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end())) {
        throw std::invalid_argument("empirical_abs_tail: samples must be sorted");
    }
    auto data = std::make_shared<const std::vector<double>>(std::move(sorted_samples));
    std::ostringstream d;
    d << "empirical |X - " << center << "| / " << scale << " tail, n=" << data->size();
    return TailFunction(
        [data, center, scale](double x) {
            const double reach = x * scale;
            const auto above = static_cast<double>(data->end() - std::upper_bound(data->begin(), data->end(),
                                                                                    center + reach));
            const auto below = static_cast<double>(std::lower_bound(data->begin(), data->end(), center - reach) -
                                                   data->begin());
            if (x < 0.0) return 0.0;
            const double count = above + below;
            return count == 0.0 ? -kInf : std::log(count / static_cast<double>(data->size()));
        },
        d.str(), valid_min, valid_max);
}

TailFunction empirical_tail_function(std::vector<double> sorted_samples, double valid_min, double valid_max) {
    if (sorted_samples.empty()) throw std::invalid_argument("empirical_tail_function: no samples");
    if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end())) {
        throw std::invalid_argument("empirical_tail_function: samples must be sorted");
    }
    auto data = std::make_shared<const std::vector<double>>(std::move(sorted_samples));
    std::ostringstream d;
    d << "empirical tail, n=" << data->size();
    return TailFunction(
        [data](double x) {
            const auto above =
                static_cast<double>(data->end() - std::upper_bound(data->begin(), data->end(), x));
            return above == 0.0 ? -kInf : std::log(above / static_cast<double>(data->size()));
        },
        d.str(), valid_min, valid_max);
}

double id_gaussian_statistic(const TailFunction& abs_tail, double x) {
    if (!(x > 1.0)) throw std::domain_error("id_gaussian_statistic: x must exceed 1");
    const double log_tail = abs_tail.log_survival(x);
    if (log_tail == -kInf) return kInf;
    if (!(log_tail < 0.0)) throw std::domain_error("id_gaussian_statistic: tail must be below 1");
    return -log_tail / (x * std::log(x));
}

BoundCheck check_exponential_bound(const TailFunction& abs_tail, double a, double b, double c,
                                   std::span<const double> x_grid) {
    require_positive(a, "a");
    require_positive(b, "b");
    if (!(c > 1.0)) throw std::domain_error("check_exponential_bound: c must exceed 1");
    if (x_grid.empty()) throw std::invalid_argument("check_exponential_bound: empty grid");
    BoundCheck out;
    for (double x : x_grid) {
        if (!(x > 0.0)) throw std::invalid_argument("check_exponential_bound: grid points must be positive");
        const double log_tail = abs_tail.log_survival(x);
        const double log_bound = std::log(a) - b * std::pow(x, c);
        const bool pass = log_tail <= log_bound;
        out.rows.push_back({x, log_tail, log_bound, pass});
        if (!pass && out.holds) {
            out.holds = false;
            out.witness = x;
        }
    }
    return out;
}

double concentration_bound(ConcentrationEnsemble ensemble, std::size_t n, double x) {
    if (n < 1) throw std::domain_error("concentration_bound: N must be at least 1");
    require_positive(x, "x");
    const double nd = static_cast<double>(n);
    if (ensemble == ConcentrationEnsemble::goe) return std::exp(-nd * x * x / 9.0);
    return std::min(1.0, 2.0 * std::exp(-2.0 * nd * x * x));
}

BoundCheck rplus_id_check(const TailFunction& tail, double a, std::span<const double> x_grid) {
    require_positive(a, "a");
    BoundCheck out;
    for (double x : x_grid) {
        if (!(x > 1.0)) throw std::invalid_argument("rplus_id_check: grid points must exceed 1");
        const double log_tail = tail.log_survival(x);
        const double log_bound = -a * x * std::log(x);
        const bool pass = log_tail >= log_bound;  // -log P <= a x log x
        out.rows.push_back({x, log_tail, log_bound, pass});
        if (!pass && out.holds) {
            out.holds = false;
            out.witness = x;
        }
    }
    return out;
}

double wigner_surmise_pdf(double s) {
    require_positive(s, "s");
    return std::numbers::pi / 2.0 * s * std::exp(-std::numbers::pi / 4.0 * s * s);
}

double wigner_surmise_cdf(double s) {
    if (s <= 0.0) return 0.0;
    return -std::expm1(-std::numbers::pi / 4.0 * s * s);
}

TailFunction wigner_surmise_tail() {
    return TailFunction([](double s) { return s <= 0.0 ? 0.0 : -std::numbers::pi / 4.0 * s * s; },
                        "wigner surmise survival", 0.0, kInf);
}

namespace {

// log P(X > x) for a law described by its two component tails.
double pair_log_survival(const TailPair& tails, double x) {
    if (x >= 0.0) return tails.right.log_survival(x);
    return log1m_exp(tails.left.log_survival(-x));
}

}  // namespace

TailFunction transform_tail(const TailPair& tails, TailTransform transform) {
    const double hi = tails.right.valid_max();
    const double lo = -tails.left.valid_max();
    switch (transform.mode) {
        case TailTransform::Mode::absolute_value:
            return TailFunction(
                [tails](double x) {
                    if (x < 0.0) return 0.0;
                    return log_add(tails.left.log_survival(x), tails.right.log_survival(x));
                },
                "|X| of (" + tails.left.description() + ", " + tails.right.description() + ")", 0.0,
                std::min(tails.left.valid_max(), hi));
        case TailTransform::Mode::truncate_left: {
            const double t = transform.at;
            const double log_kept = pair_log_survival(tails, t);
            if (log_kept == -kInf) throw std::domain_error("transform_tail: truncation keeps zero mass");
            return TailFunction(
                [tails, t, log_kept](double x) { return x < t ? 0.0 : pair_log_survival(tails, x) - log_kept; },
                "X | X >= " + std::to_string(t), std::max(lo, t), hi);
        }
        case TailTransform::Mode::truncate_right: {
            const double t = transform.at;
            const double log_st = pair_log_survival(tails, t);
            const double log_kept = log1m_exp(log_st);
            if (log_kept == -kInf) throw std::domain_error("transform_tail: truncation keeps zero mass");
            return TailFunction(
                [tails, t, log_st, log_kept](double x) {
                    if (x >= t) return -kInf;
                    const double log_sx = pair_log_survival(tails, x);
                    return log_sx + log1m_exp(log_st - log_sx) - log_kept;
                },
                "X | X <= " + std::to_string(t), lo, std::min(hi, t));
        }
    }
    throw std::invalid_argument("transform_tail: unknown mode");
}

std::string to_string(IdVerdictKind kind) {
    switch (kind) {
        case IdVerdictKind::not_id_gaussian_criterion: return "NotID_GaussianCriterion";
        case IdVerdictKind::not_id_subexponential_bound: return "NotID_SubexponentialBound";
        case IdVerdictKind::not_id_rplus_criterion: return "NotID_RPlusCriterion";
        case IdVerdictKind::inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

IdVerdict classify_id(const TailFunction& two_sided_tail, std::span<const double> evidence_grid, double threshold,
                      const ClassifyOptions& options) {
    if (evidence_grid.size() < 8) throw std::invalid_argument("classify_id: evidence grid needs at least 8 points");
    if (!(evidence_grid.front() > 1.0)) throw std::invalid_argument("classify_id: evidence grid must exceed 1");
    for (std::size_t i = 1; i < evidence_grid.size(); ++i) {
        if (!(evidence_grid[i] > evidence_grid[i - 1])) {
            throw std::invalid_argument("classify_id: evidence grid must be strictly ascending");
        }
    }
    if (evidence_grid.back() < 10.0 * evidence_grid.front()) {
        throw std::invalid_argument("classify_id: evidence grid must span at least one decade");
    }
    if (!(threshold > 0.0)) throw std::invalid_argument("classify_id: threshold must be positive");

    IdVerdict out;
    out.threshold_used = threshold;

    std::vector<std::pair<double, double>> usable;
    for (double x : evidence_grid) {
        if (!two_sided_tail.valid_at(x)) continue;
        if (!(two_sided_tail.log_survival(x) < 0.0)) continue;
        const double stat = id_gaussian_statistic(two_sided_tail, x);
        if (std::isfinite(stat)) usable.emplace_back(x, stat);
    }

    bool gaussian_criterion = false;
    if (usable.size() >= 8 && usable.back().first >= 10.0 * usable.front().first) {
        // The limsup is probed by the largest value reached in the top decade.
        const double top_start = usable.back().first / 10.0;
        double top_max = 0.0;
        for (const auto& [x, stat] : usable) {
            if (x >= top_start) top_max = std::max(top_max, stat);
        }
        const bool above = top_max > threshold;
        bool increasing = true;
        for (std::size_t i = usable.size() / 2 + 1; i < usable.size(); ++i) {
            if (!(usable[i].second > usable[i - 1].second)) increasing = false;
        }
        gaussian_criterion = above && increasing;
    }

    if (!options.non_gaussian) {
        out.evidence = usable;
        out.note = "non-Gaussian assertion withheld; no verdict issued";
        return out;
    }
    if (gaussian_criterion) {
        out.verdict = IdVerdictKind::not_id_gaussian_criterion;
        out.evidence = usable;
        out.note = "-log P(|X|>x)/(x log x) exceeds threshold in the top decade and is increasing";
        return out;
    }
    if (options.bound) {
        const auto& bound = *options.bound;
        const BoundCheck check = check_exponential_bound(two_sided_tail, bound.a, bound.b, bound.c, bound.grid);
        if (check.holds) {
            out.verdict = IdVerdictKind::not_id_subexponential_bound;
            out.threshold_used = 1.0;
            for (const auto& row : check.rows) out.evidence.emplace_back(row.x, std::exp(row.log_tail - row.log_bound));
            std::ostringstream note;
            note << "P(|X|>x) <= " << bound.a << " exp(-" << bound.b << " x^" << bound.c
                 << ") on the bound grid; evidence is tail/bound";
            out.note = note.str();
            return out;
        }
    }
    if (!options.rplus_scan.empty()) {
        std::vector<std::pair<double, double>> witnesses;
        bool all_fail = true;
        for (double a : options.rplus_scan) {
            const BoundCheck check = rplus_id_check(two_sided_tail, a, evidence_grid);
            if (check.holds) {
                all_fail = false;
                break;
            }
            witnesses.emplace_back(*check.witness, id_gaussian_statistic(two_sided_tail, *check.witness));
        }
        if (all_fail) {
            out.verdict = IdVerdictKind::not_id_rplus_criterion;
            out.evidence = witnesses;
            out.threshold_used = *std::max_element(options.rplus_scan.begin(), options.rplus_scan.end());
            out.note = "-log P(X>x) > a x log x at the witness for every scanned a";
            return out;
        }
    }
    out.evidence = usable;
    out.note = "no criterion met on the supplied grids";
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi, count >= 2");
    std::vector<double> out(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (!(hi > lo) || count < 2) throw std::invalid_argument("linear_grid: need lo < hi, count >= 2");
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

}  // namespace twkit
