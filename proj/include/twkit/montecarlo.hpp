#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "twkit/ensembles.hpp"
#include "twkit/tails.hpp"

namespace twkit {

inline constexpr const char* kToolVersion = "1.0.0";

/// Sorted scaled largest-eigenvalue samples plus the provenance needed to
/// regenerate them bit for bit.
struct SampleBatch {
    EnsembleSpec spec;
    std::uint64_t master_seed = 0;
    std::vector<double> samples;  // ascending
    std::string tool_version = kToolVersion;
    std::string timestamp;  // ISO-8601 UTC, informational only

    std::size_t count() const noexcept { return samples.size(); }
    double mean() const;
    double variance() const;  // unbiased
};

/// Resolves a requested worker count; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

/// Draws n statistics; sample i uses RandomStream(master_seed, i), so the
/// result does not depend on the number of worker threads.
SampleBatch run_batch(const EnsembleSpec& spec, std::size_t n, std::uint64_t master_seed, unsigned threads = 0);

/// Runs fn(i, stream_i) for i in [0, n) across workers and returns the values
/// in index order. Stream i is RandomStream(master_seed, i).
std::vector<double> parallel_draws(std::size_t n, std::uint64_t master_seed, unsigned threads,
                                   const std::function<double(std::size_t, RandomStream&)>& fn);

/// Central nearest-neighbour spacing (between eigenvalues N/2 - 1 and N/2,
/// 0-based) of n independent matrices, sorted ascending. N >= 2.
std::vector<double> sample_spacings(const EnsembleSpec& spec, std::size_t n, std::uint64_t master_seed,
                                    unsigned threads = 0);

struct TailEstimate {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t exceed = 0;
    std::size_t n = 0;
};

/// Exact Clopper-Pearson interval for k successes in n trials.
std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double confidence = 0.95);

/// Fraction of samples strictly above x with a 95% Clopper-Pearson interval.
TailEstimate empirical_tail(const SampleBatch& batch, double x);
TailEstimate empirical_tail(std::span<const double> sorted_samples, double x);

struct TailPoint {
    double x;
    double survival;
};

/// Least-squares fit of survival = exp(-k x^c) on (log x, log(-log survival)).
struct TailFit {
    double exponent = 0.0;         // c
    double log_coefficient = 0.0;  // log k
    double r_squared = 0.0;
    double x_low = 0.0;
    double x_high = 0.0;
    std::size_t point_count = 0;

    double coefficient() const;
};

/// Requires >= 3 points, x > 1, survival in (0, 1) and strictly decreasing;
/// throws std::invalid_argument otherwise.
TailFit fit_tail_exponent(std::span<const TailPoint> points);

/// Two-sided one-sample Kolmogorov-Smirnov distance between the empirical
/// CDF of sorted_samples and cdf, evaluated at both edges of every step.
double ks_statistic(std::span<const double> sorted_samples, const std::function<double(double)>& cdf);
double ks_statistic(const SampleBatch& batch, const std::function<double(double)>& cdf);

/// Two-sample KS distance between two ascending samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value c(alpha) sqrt((n + m) / (n m)).
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

// Finite-N concentration pipeline -----------------------------------------

struct ConcentrationReport {
    ConcentrationEnsemble ensemble = ConcentrationEnsemble::gue;
    std::size_t n_dim = 0;
    std::size_t count = 0;
    std::size_t center_count = 0;
    double center = 0.0;  // normalized units
    double a = 0.0;
    double b = 0.0;
    double c = 2.0;
    double enforce_from = 0.0;  // grid points below this are reported but not enforced
    BoundCheck check;
    std::vector<TailEstimate> estimates;  // one per grid point
    IdVerdict verdict;
};

/// Samples lambda_max of the GOE (beta = 1) or GUE (beta = 2) law through the
/// tridiagonal model, normalizes by sqrt(N) (GUE additionally centred at the
/// mean of an independent batch of max(10^4, count) draws), and checks the
/// empirical two-sided tail against a exp(-slack b0 x^2) with
/// (a, b0) = (1, N/9) for GOE and (2, 2N) for GUE. GOE points below x = 2.5
/// are reported but not enforced.
ConcentrationReport concentration_pipeline(ConcentrationEnsemble ensemble, std::size_t n_dim, std::size_t count,
                                           std::uint64_t master_seed, std::span<const double> grid, double slack,
                                           unsigned threads = 0);

}  // namespace twkit
