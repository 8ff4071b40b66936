#include "twkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "twkit/ensembles.hpp"
#include "twkit/io.hpp"
#include "twkit/montecarlo.hpp"
#include "twkit/tails.hpp"

namespace twkit {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool quick(const VerifyContext& ctx) { return ctx.scale == VerifyScale::quick; }

const PainleveSolution& solution(const VerifyContext& ctx) {
    if (ctx.solution == nullptr) throw std::logic_error("verify: no Painleve solution supplied");
    return *ctx.solution;
}

Measurement measure(std::string name, double value, double lo, double hi) {
    Measurement m{std::move(name), value, lo, hi, false};
    m.pass = !std::isnan(value) && value >= lo && value <= hi;
    return m;
}

Measurement flag(std::string name, bool ok) { return measure(std::move(name), ok ? 1.0 : 0.0, 1.0, 1.0); }

CheckResult finish(int id, std::string title, std::vector<Measurement> ms, json detail = json::object()) {
    CheckResult r;
    r.id = id;
    r.title = std::move(title);
    r.pass = std::all_of(ms.begin(), ms.end(), [](const Measurement& m) { return m.pass; });
    r.measurements = std::move(ms);
    r.detail = std::move(detail);
    return r;
}

// Edge-law CDF with the table's range extended by the limits 0 and 1.
double edge_cdf(TwBeta beta, double x, const PainleveSolution& sol) {
    const double arg = edge_argument_scale(beta) * x;
    if (arg < sol.s_min()) return 0.0;
    if (arg > sol.s_max()) return 1.0;
    return tw_edge_cdf(beta, x, sol);
}

struct Moments {
    double mean;
    double variance;
    double se_mean;
    double se_variance;
};

Moments moments(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    const double var = m2 / (n - 1.0);
    m4 /= n;
    return {mean, var, std::sqrt(var / n), std::sqrt(std::max(0.0, m4 - var * var) / n)};
}

TailFit fit_on_window(const std::function<double(double)>& survival) {
    std::vector<TailPoint> pts;
    for (double x : linear_grid(4.0, 7.0, 13)) pts.push_back({x, survival(x)});
    return fit_tail_exponent(pts);
}

}  // namespace

// 1 ------------------------------------------------------------------------
CheckResult check_right_tail_law(const VerifyContext& ctx) {
    const auto& sol = solution(ctx);
    const TailFit fit = fit_on_window([&](double x) { return tw_survival(TwBeta::unitary, x, sol); });
    return finish(1, "right tail of F2 decays like exp(-(4/3) x^1.5)",
                  {measure("exponent", fit.exponent, 1.40, 1.60),
                   measure("coefficient/(4/3)", fit.coefficient() / (4.0 / 3.0), 0.85, 1.15)},
                  {{"fit", to_json(fit)}});
}

// 2 ------------------------------------------------------------------------
CheckResult check_left_tail_law(const VerifyContext& ctx) {
    const auto& sol = solution(ctx);
    const TailFit fit = fit_on_window([&](double x) { return tw_cdf(TwBeta::unitary, -x, sol); });
    return finish(2, "left tail of F2 decays like exp(-x^3 / 12)",
                  {measure("exponent", fit.exponent, 2.85, 3.15),
                   measure("coefficient/(1/12)", fit.coefficient() * 12.0, 0.85, 1.15)},
                  {{"fit", to_json(fit)}});
}

// 3 ------------------------------------------------------------------------
CheckResult check_edge_universality(const VerifyContext& ctx) {
    const auto& sol = solution(ctx);
    const std::size_t n_dim = quick(ctx) ? 100 : 200;
    const std::size_t count = quick(ctx) ? 5000 : 50000;
    const double tol = quick(ctx) ? 0.07 : 0.05;
    std::vector<Measurement> ms;
    json detail{{"n_dim", n_dim}, {"count", count}};
    for (TwBeta beta : {TwBeta::unitary, TwBeta::orthogonal, TwBeta::symplectic}) {
        EnsembleSpec spec;
        spec.kind = EnsembleKind::beta_hermite;
        spec.beta = to_int(beta);
        spec.n_dim = n_dim;
        const SampleBatch batch = run_batch(spec, count, ctx.seed + static_cast<std::uint64_t>(to_int(beta)), ctx.threads);
        const double ks = ks_statistic(batch, [&](double x) { return edge_cdf(beta, x, sol); });
        ms.push_back(measure("ks_beta" + std::to_string(to_int(beta)), ks, 0.0, tol));
        detail["mean_beta" + std::to_string(to_int(beta))] = batch.mean();
    }
    return finish(3, "scaled tridiagonal lambda_max matches F1, F2, F4", std::move(ms), detail);
}

// 4 ------------------------------------------------------------------------
CheckResult check_gaussian_criterion_limit(const VerifyContext&) {
    std::vector<Measurement> ms;
    const auto grid = log_grid(10.0, 1e6, 25);
    ClassifyOptions options;
    options.non_gaussian = true;
    json verdicts = json::object();
    for (double beta : {0.5, 1.0, 2.0, 4.0, 10.0}) {
        const TailFunction tail = asymptote_two_sided_tail(beta);
        const double x = 1e4;
        const double ratio = id_gaussian_statistic(tail, x) * std::log(x) / ((2.0 * beta / 3.0) * std::sqrt(x));
        const std::string tag = "beta" + format_double(beta);
        ms.push_back(measure("normalized_statistic_" + tag, ratio, 0.95, 1.05));
        const IdVerdict v = classify_id(tail, grid, 10.0, options);
        ms.push_back(flag("gaussian_criterion_" + tag, v.verdict == IdVerdictKind::not_id_gaussian_criterion));
        verdicts[tag] = to_string(v.verdict);
    }
    return finish(4, "Gaussian-tail statistic grows like (2 beta/3) sqrt(x)/log x", std::move(ms),
                  {{"verdicts", verdicts}, {"threshold", 10.0}});
}

// 5 ------------------------------------------------------------------------
CheckResult check_two_sided_tail(const VerifyContext&) {
    const double ratio = std::exp(two_sided_tail(2.0, 5.0) - tail_asymptote(2.0, TailSide::right, 5.0));
    return finish(5, "two-sided tail is dominated by the right tail", {measure("ratio_minus_one", ratio - 1.0, 0.0, 1e-6)},
                  {{"ratio", ratio}});
}

// 6 ------------------------------------------------------------------------
CheckResult check_concentration_pipeline(const VerifyContext& ctx) {
    const std::size_t n_dim = 50;
    const std::size_t count = quick(ctx) ? 20000 : 100000;
    const auto gue_grid = linear_grid(0.2, 0.8, 13);
    const auto goe_grid = linear_grid(2.0, 4.0, 9);
    const auto gue = concentration_pipeline(ConcentrationEnsemble::gue, n_dim, count, ctx.seed, gue_grid, 0.8, ctx.threads);
    const auto goe = concentration_pipeline(ConcentrationEnsemble::goe, n_dim, count, ctx.seed + 1, goe_grid, 1.0, ctx.threads);
    auto worst_margin = [](const BoundCheck& c) {
        double worst = -kInf;
        for (const auto& row : c.rows) worst = std::max(worst, row.log_tail - row.log_bound);
        return worst;
    };
    return finish(6, "finite-N GUE/GOE tails obey the concentration bounds",
                  {measure("gue_max_log_tail_over_bound", worst_margin(gue.check), -kInf, 0.0),
                   flag("gue_not_id_subexponential", gue.verdict.verdict == IdVerdictKind::not_id_subexponential_bound),
                   measure("goe_max_log_tail_over_bound", worst_margin(goe.check), -kInf, 0.0),
                   flag("goe_bound_holds", goe.check.holds)},
                  {{"gue", to_json(gue)}, {"goe", to_json(goe)}});
}

// 7 ------------------------------------------------------------------------
CheckResult check_wigner_surmise(const VerifyContext& ctx) {
    const std::size_t count = quick(ctx) ? 20000 : 100000;
    const double tol = quick(ctx) ? 0.03 : 0.02;
    EnsembleSpec spec;
    spec.kind = EnsembleKind::goe_dense;
    spec.beta = 1.0;
    spec.n_dim = 2;
    auto spacings = sample_spacings(spec, count, ctx.seed, ctx.threads);
    const double mean = moments(spacings).mean;
    for (double& s : spacings) s /= mean;
    const double ks = ks_statistic(spacings, [](double s) { return s > 0 ? wigner_surmise_cdf(s) : 0.0; });
    std::vector<Measurement> ms{measure("ks_spacing_vs_surmise", ks, 0.0, tol)};
    json witnesses = json::object();
    const auto grid = log_grid(2.0, 1e4, 200);
    const TailFunction surmise = wigner_surmise_tail();
    for (double a : {1.0, 10.0, 100.0}) {
        const BoundCheck c = rplus_id_check(surmise, a, grid);
        ms.push_back(flag("rplus_violated_a" + format_double(a), !c.holds && c.witness.has_value()));
        witnesses[format_double(a)] = c.witness ? json(*c.witness) : json(nullptr);
    }
    return finish(7, "2x2 GOE spacing follows the Wigner surmise, which fails the half-line criterion", std::move(ms),
                  {{"count", count}, {"mean_spacing", mean}, {"witnesses", witnesses}});
}

// 8 ------------------------------------------------------------------------
CheckResult check_stochastic_airy(const VerifyContext& ctx) {
    const std::size_t sao_count = quick(ctx) ? 500 : 2000;
    const std::size_t tri_count = quick(ctx) ? 5000 : 20000;
    const std::size_t tri_n = quick(ctx) ? 200 : 500;

    EnsembleSpec sao;
    sao.kind = EnsembleKind::stochastic_airy;
    sao.beta = 2.0;
    sao.sao = {10.0, 0.01};
    EnsembleSpec tri;
    tri.kind = EnsembleKind::beta_hermite;
    tri.beta = 2.0;
    tri.n_dim = tri_n;
    const auto a = run_batch(sao, sao_count, ctx.seed, ctx.threads);
    const auto b = run_batch(tri, tri_count, ctx.seed + 1, ctx.threads);
    const Moments ma = moments(a.samples);
    const Moments mb = moments(b.samples);
    const double z_mean = std::abs(ma.mean - mb.mean) / std::hypot(ma.se_mean, mb.se_mean);
    const double z_var = std::abs(ma.variance - mb.variance) / std::hypot(ma.se_variance, mb.se_variance);

    const double ground = sao_statistic(deterministic_sao_grid({10.0, 0.005}), 2.0);
    const double oracle = first_airy_zero();  // -lambda_min -> -|a1| = a1
    return finish(8, "stochastic Airy operator agrees with the tridiagonal model",
                  {measure("mean_difference_in_se", z_mean, 0.0, 3.0), measure("variance_difference_in_se", z_var, 0.0, 3.0),
                   measure("zero_noise_ground_state_error", std::abs(ground - oracle), 0.0, 0.01)},
                  {{"sao", {{"count", sao_count}, {"mean", ma.mean}, {"variance", ma.variance}}},
                   {"tridiagonal", {{"n_dim", tri_n}, {"count", tri_count}, {"mean", mb.mean}, {"variance", mb.variance}}},
                   {"zero_noise_statistic", ground},
                   {"airy_zero", oracle}});
}

// 9 ------------------------------------------------------------------------
CheckResult check_eigen_oracles(const VerifyContext& ctx) {
    RandomStream rng(ctx.seed, 9);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    double worst_tri = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<double> d(n), e(n - 1);
        for (double& v : d) v = uniform(-2.0, 2.0);
        for (double& v : e) v = uniform(-2.0, 2.0);
        const TridiagonalMatrix t(d, e);
        const auto bis = all_eigenvalues(t);
        const auto roots = characteristic_roots(t);
        for (std::size_t i = 0; i < n; ++i) worst_tri = std::max(worst_tri, std::abs(bis[i] - roots[i]));
    }
    double worst_house = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        DenseSymmetricMatrix m(10);
        for (std::size_t i = 0; i < 10; ++i) {
            for (std::size_t j = i; j < 10; ++j) m.set(i, j, uniform(-2.0, 2.0));
        }
        const auto reduced = all_eigenvalues(householder_tridiagonalize(m));
        const auto direct = jacobi_eigenvalues(m);
        for (std::size_t i = 0; i < 10; ++i) worst_house = std::max(worst_house, std::abs(reduced[i] - direct[i]));
    }
    return finish(9, "bisection and Householder agree with independent oracles",
                  {measure("max_error_vs_characteristic_roots", worst_tri, 0.0, 1e-9),
                   measure("max_error_householder_vs_jacobi", worst_house, 0.0, 1e-9)},
                  {{"tridiagonal_trials", 1000}, {"dense_trials", 100}});
}

// 10 -----------------------------------------------------------------------
CheckResult check_painleve_integrity(const VerifyContext& ctx) {
    const auto& sol = solution(ctx);
    std::vector<Measurement> ms;
    ms.push_back(measure("abs_q6_minus_ai6", std::abs(sol.q(6.0) - airy_ai(6.0)), 0.0, 1e-8));

    double order_violation = 0.0;
    double monotone_violation = 0.0;
    const TwBeta betas[] = {TwBeta::orthogonal, TwBeta::unitary, TwBeta::symplectic};
    double prev[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const double x = sol.grid(k);
        double f[3];
        for (int b = 0; b < 3; ++b) f[b] = tw_cdf(betas[b], x, sol);
        const double root2 = std::sqrt(f[1]);
        order_violation = std::max({order_violation, f[0] - root2, root2 - f[2]});
        if (k > 0) {
            for (int b = 0; b < 3; ++b) monotone_violation = std::max(monotone_violation, prev[b] - f[b]);
        }
        std::copy(f, f + 3, prev);
    }
    // Rounding alone can reorder values that agree to the last bit.
    constexpr double roundoff = 4.0 * std::numeric_limits<double>::epsilon();
    ms.push_back(measure("ordering_violation", order_violation, 0.0, roundoff));
    ms.push_back(measure("monotonicity_violation", monotone_violation, 0.0, roundoff));
    double left = 0.0, right = 0.0;
    for (TwBeta b : betas) {
        left = std::max(left, tw_cdf(b, sol.s_min(), sol));
        right = std::max(right, 1.0 - tw_cdf(b, sol.s_max(), sol));
    }
    ms.push_back(measure("max_F_at_left_edge", left, 0.0, 1e-6));
    ms.push_back(measure("max_one_minus_F_at_right_edge", right, 0.0, 1e-6));

    const PainleveSolution half = solve_hastings_mcleod(sol.s_min(), sol.s_max(), sol.step() / 2.0);
    double drift = 0.0;
    for (double x : {-5.0, -2.0, 0.0, 2.0}) {
        drift = std::max(drift, std::abs(tw_cdf(TwBeta::unitary, x, sol) - tw_cdf(TwBeta::unitary, x, half)));
    }
    ms.push_back(measure("step_halving_change_F2", drift, 0.0, 1e-8));
    return finish(10, "Painleve table is consistent", std::move(ms),
                  {{"s_min", sol.s_min()}, {"s_max", sol.s_max()}, {"step", sol.step()}});
}

// 11 -----------------------------------------------------------------------
CheckResult check_determinism(const VerifyContext& ctx) {
    std::vector<Measurement> ms;
    EnsembleSpec tri;
    tri.kind = EnsembleKind::beta_hermite;
    tri.beta = 2.0;
    tri.n_dim = 100;
    EnsembleSpec sao;
    sao.kind = EnsembleKind::stochastic_airy;
    sao.beta = 1.0;
    EnsembleSpec goe;
    goe.kind = EnsembleKind::goe_dense;
    goe.beta = 1.0;
    goe.n_dim = 20;
    const std::size_t scale = quick(ctx) ? 1 : 4;
    for (const auto& [name, spec, n] : {std::tuple{"beta_hermite", tri, 1000 * scale},
                                        std::tuple{"stochastic_airy", sao, 50 * scale},
                                        std::tuple{"goe_dense", goe, 500 * scale}}) {
        std::ostringstream one, eight;
        write_samples_csv(one, run_batch(spec, n, ctx.seed, 1));
        write_samples_csv(eight, run_batch(spec, n, ctx.seed, 8));
        ms.push_back(flag(std::string("identical_csv_") + name, one.str() == eight.str()));
    }
    return finish(11, "batches are byte-identical across thread counts", std::move(ms));
}

CheckResult run_check(int id, const VerifyContext& ctx) {
    using Fn = CheckResult (*)(const VerifyContext&);
    static constexpr Fn checks[] = {check_right_tail_law,          check_left_tail_law,      check_edge_universality,
                                    check_gaussian_criterion_limit, check_two_sided_tail,     check_concentration_pipeline,
                                    check_wigner_surmise,           check_stochastic_airy,    check_eigen_oracles,
                                    check_painleve_integrity,       check_determinism};
    if (id < 1 || id > 11) throw std::out_of_range("run_check: id must be in 1..11");
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = checks[id - 1](ctx);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CheckResult> run_verify(const VerifyContext& ctx) {
    std::vector<CheckResult> out;
    for (int id = 1; id <= 11; ++id) out.push_back(run_check(id, ctx));
    return out;
}

json to_json(const Measurement& m) {
    auto bound = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"name", m.name},
                {"value", std::isfinite(m.value) ? json(m.value) : json(format_double(m.value))},
                {"tolerance", {{"min", bound(m.lo)}, {"max", bound(m.hi)}}},
                {"pass", m.pass}};
}

json to_json(const CheckResult& r) {
    json ms = json::array();
    for (const auto& m : r.measurements) ms.push_back(to_json(m));
    return json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"measurements", ms}, {"detail", r.detail},
                {"seconds", r.seconds}};
}

json verify_report(const std::vector<CheckResult>& results, const VerifyContext& ctx) {
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        checks.push_back(to_json(r));
        all = all && r.pass;
    }
    return json{{"scale", quick(ctx) ? "quick" : "full"},
                {"seed", ctx.seed},
                {"version", kToolVersion},
                {"all_pass", all},
                {"checks", checks}};
}

std::string summary_line(const CheckResult& r) {
    std::ostringstream out;
    out << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.title << "  [";
    for (std::size_t i = 0; i < r.measurements.size(); ++i) {
        const auto& m = r.measurements[i];
        if (i > 0) out << "; ";
        out << m.name << '=' << format_double(m.value) << " in [" << format_double(m.lo) << ", " << format_double(m.hi)
            << ']';
    }
    out << "]";
    return out.str();
}

std::vector<double> characteristic_roots(const TridiagonalMatrix& t) {
    using Poly = std::vector<long double>;  // coefficients, lowest degree first
    const auto d = t.diag();
    const auto e = t.offdiag();
    const std::size_t n = t.size();
    // p_k(l) = (l - d_k) p_{k-1}(l) - e_{k-1}^2 p_{k-2}(l)
    Poly prev2{1.0L};
    Poly prev{-static_cast<long double>(d[0]), 1.0L};
    for (std::size_t k = 1; k < n; ++k) {
        Poly next(k + 2, 0.0L);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            next[i + 1] += prev[i];
            next[i] -= static_cast<long double>(d[k]) * prev[i];
        }
        const long double e2 = static_cast<long double>(e[k - 1]) * e[k - 1];
        for (std::size_t i = 0; i < prev2.size(); ++i) next[i] -= e2 * prev2[i];
        prev2 = std::move(prev);
        prev = std::move(next);
    }
    const Poly& p = prev;
    auto eval = [&](std::complex<long double> z) {
        std::complex<long double> acc = 0.0L;
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
        return acc;
    };
    std::vector<std::complex<long double>> z(n);
    const std::complex<long double> seed(0.4L, 0.9L);
    z[0] = 1.0L;
    for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(seed, static_cast<int>(i)) * 3.0L;
    for (int iter = 0; iter < 2000; ++iter) {
        long double change = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<long double> denom = 1.0L;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= z[i] - z[j];
            }
            const auto delta = eval(z[i]) / denom;
            z[i] -= delta;
            change = std::max(change, std::abs(delta));
        }
        if (change < 1e-30L) break;
    }
    std::vector<double> roots;
    for (const auto& r : z) roots.push_back(static_cast<double>(r.real()));
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> jacobi_eigenvalues(const DenseSymmetricMatrix& m) {
    const std::size_t n = m.order();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                total += at(i, j) * at(i, j);
                if (i != j) off += at(i, j) * at(i, j);
            }
        }
        if (off <= 1e-30 * total) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (at(p, q) == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double first_airy_zero() {
    double lo = -2.5, hi = -2.2;  // Ai(lo) < 0 < Ai(hi)
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (airy_ai(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace twkit
