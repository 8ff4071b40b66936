#include "twkit/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/beta.hpp>

namespace twkit {

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

double SampleBatch::mean() const {
    if (samples.empty()) throw std::logic_error("SampleBatch::mean: empty batch");
    return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double SampleBatch::variance() const {
    if (samples.size() < 2) throw std::logic_error("SampleBatch::variance: need two samples");
    const double m = mean();
    double ss = 0.0;
    for (double v : samples) ss += (v - m) * (v - m);
    return ss / static_cast<double>(samples.size() - 1);
}

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<double> parallel_draws(std::size_t n, std::uint64_t master_seed, unsigned threads,
                                   const std::function<double(std::size_t, RandomStream&)>& fn) {
    std::vector<double> out(n);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&](unsigned w) {
        try {
            // Strided assignment; each index owns its substream.
            for (std::size_t i = w; i < n; i += workers) {
                RandomStream stream(master_seed, i);
                out[i] = fn(i, stream);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

SampleBatch run_batch(const EnsembleSpec& spec, std::size_t n, std::uint64_t master_seed, unsigned threads) {
    if (n < 1) throw std::invalid_argument("run_batch: count must be at least 1");
    spec.validate();
    SampleBatch batch;
    batch.spec = spec;
    batch.master_seed = master_seed;
    batch.timestamp = utc_timestamp();
    batch.samples = parallel_draws(n, master_seed, threads,
                                   [&spec](std::size_t, RandomStream& s) { return sample_scaled_statistic(spec, s); });
    for (double v : batch.samples) {
        if (!std::isfinite(v)) throw std::runtime_error("run_batch: sampler produced a non-finite value");
    }
    std::sort(batch.samples.begin(), batch.samples.end());
    return batch;
}

std::vector<double> sample_spacings(const EnsembleSpec& spec, std::size_t n, std::uint64_t master_seed,
                                    unsigned threads) {
    spec.validate();
    if (spec.kind == EnsembleKind::stochastic_airy || spec.n_dim < 2) {
        throw std::invalid_argument("sample_spacings: needs a matrix ensemble with N >= 2");
    }
    auto out = parallel_draws(n, master_seed, threads, [&spec](std::size_t, RandomStream& s) {
        const TridiagonalMatrix t = spec.kind == EnsembleKind::goe_dense
                                        ? householder_tridiagonalize(sample_goe_dense(spec.n_dim, s))
                                        : sample_beta_hermite(spec, s);
        const auto ev = all_eigenvalues(t);
        const std::size_t mid = ev.size() / 2;
        return ev[mid] - ev[mid - 1];
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double confidence) {
    if (n == 0 || k > n) throw std::invalid_argument("clopper_pearson: need 0 <= k <= n, n >= 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("clopper_pearson: confidence in (0,1)");
    const double alpha = 1.0 - confidence;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    double lo = 0.0;
    double hi = 1.0;
    if (k > 0) lo = boost::math::quantile(boost::math::beta_distribution<double>(kd, nd - kd + 1.0), alpha / 2.0);
    if (k < n) hi = boost::math::quantile(boost::math::beta_distribution<double>(kd + 1.0, nd - kd), 1.0 - alpha / 2.0);
    return {lo, hi};
}

TailEstimate empirical_tail(std::span<const double> sorted_samples, double x) {
    if (sorted_samples.empty()) throw std::invalid_argument("empirical_tail: empty batch");
    TailEstimate t;
    t.n = sorted_samples.size();
    t.exceed = static_cast<std::size_t>(sorted_samples.end() -
                                        std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x));
    t.estimate = static_cast<double>(t.exceed) / static_cast<double>(t.n);
    std::tie(t.ci_low, t.ci_high) = clopper_pearson(t.exceed, t.n);
    return t;
}

TailEstimate empirical_tail(const SampleBatch& batch, double x) { return empirical_tail(batch.samples, x); }

double TailFit::coefficient() const { return std::exp(log_coefficient); }

TailFit fit_tail_exponent(std::span<const TailPoint> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_tail_exponent: need at least 3 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.x > 1.0)) throw std::invalid_argument("fit_tail_exponent: x must exceed 1");
        if (!(p.survival > 0.0 && p.survival < 1.0)) {
            throw std::invalid_argument("fit_tail_exponent: survival must lie in (0, 1)");
        }
        if (i > 0 && !(p.x > points[i - 1].x && p.survival < points[i - 1].survival)) {
            throw std::invalid_argument("fit_tail_exponent: survival must be strictly decreasing in x");
        }
    }
    const auto n = static_cast<double>(points.size());
    double mx = 0, my = 0;
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        xs.push_back(std::log(p.x));
        ys.push_back(std::log(-std::log(p.survival)));
        mx += xs.back();
        my += ys.back();
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    TailFit fit;
    fit.exponent = sxy / sxx;
    fit.log_coefficient = my - fit.exponent * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.log_coefficient + fit.exponent * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.x_low = points.front().x;
    fit.x_high = points.back().x;
    fit.point_count = points.size();
    return fit;
}

double ks_statistic(std::span<const double> sorted_samples, const std::function<double(double)>& cdf) {
    if (sorted_samples.empty()) throw std::invalid_argument("ks_statistic: empty batch");
    const auto n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return std::clamp(d, 0.0, 1.0);
}

double ks_statistic(const SampleBatch& batch, const std::function<double(double)>& cdf) {
    return ks_statistic(batch.samples, cdf);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_two_sample_critical: alpha in (0,1)");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const auto nd = static_cast<double>(n);
    const auto md = static_cast<double>(m);
    return c * std::sqrt((nd + md) / (nd * md));
}

ConcentrationReport concentration_pipeline(ConcentrationEnsemble ensemble, std::size_t n_dim, std::size_t count,
                                           std::uint64_t master_seed, std::span<const double> grid, double slack,
                                           unsigned threads) {
    if (n_dim < 2) throw std::invalid_argument("concentration_pipeline: N must be at least 2");
    if (grid.empty()) throw std::invalid_argument("concentration_pipeline: empty grid");
    if (!(slack > 0.0)) throw std::invalid_argument("concentration_pipeline: slack must be positive");

    ConcentrationReport report;
    report.ensemble = ensemble;
    report.n_dim = n_dim;
    report.count = count;
    const double nd = static_cast<double>(n_dim);
    // Scaled samples s = N^{1/6} (lambda - 2 sqrt N)  =>  lambda / sqrt N = 2 + s N^{-2/3}.
    const double unit = std::pow(nd, 2.0 / 3.0);

    EnsembleSpec spec;
    spec.kind = EnsembleKind::beta_hermite;
    spec.n_dim = n_dim;
    spec.beta = ensemble == ConcentrationEnsemble::goe ? 1.0 : 2.0;
    const SampleBatch batch = run_batch(spec, count, master_seed, threads);

    double center_scaled = 0.0;
    if (ensemble == ConcentrationEnsemble::gue) {
        report.center_count = std::max<std::size_t>(10000, count);
        std::uint64_t key = master_seed;
        const SampleBatch centering = run_batch(spec, report.center_count, splitmix64(key), threads);
        center_scaled = centering.mean();
        report.center = center_scaled / unit;
        report.a = 2.0;
        report.b = slack * 2.0 * nd;
    } else {
        center_scaled = -2.0 * unit;  // lambda / sqrt N about 0
        report.center = 0.0;
        report.a = 1.0;
        report.b = slack * nd / 9.0;
        report.enforce_from = 2.5;
    }
    report.c = 2.0;

    const TailFunction tail =
        empirical_abs_tail(batch.samples, center_scaled, unit, *std::min_element(grid.begin(), grid.end()),
                           *std::max_element(grid.begin(), grid.end()));

    std::vector<double> enforced;
    for (double x : grid) {
        if (x >= report.enforce_from) enforced.push_back(x);
        // |X - c| / unit > x  <=>  samples outside [c - x unit, c + x unit]
        TailEstimate est;
        est.n = batch.count();
        est.estimate = tail.survival(x);
        est.exceed = static_cast<std::size_t>(std::llround(est.estimate * static_cast<double>(est.n)));
        std::tie(est.ci_low, est.ci_high) = clopper_pearson(est.exceed, est.n);
        report.estimates.push_back(est);
    }
    if (enforced.empty()) throw std::invalid_argument("concentration_pipeline: no grid point in the enforced range");
    report.check = check_exponential_bound(tail, report.a, report.b, report.c, enforced);

    ClassifyOptions options;
    options.non_gaussian = true;  // lambda_max of GOE/GUE has a non-Gaussian law for N >= 2
    options.bound = ExponentialBound{report.a, report.b, report.c, enforced};
    const auto evidence = log_grid(1.5, 150.0, 12);
    report.verdict = classify_id(tail, evidence, 10.0, options);
    return report;
}

}  // namespace twkit
