#include "twkit/trilinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace twkit {

TridiagonalMatrix::TridiagonalMatrix(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty()) {
        throw std::invalid_argument("TridiagonalMatrix: order must be at least 1");
    }
    if (offdiag_.size() + 1 != diag_.size()) {
        throw std::invalid_argument("TridiagonalMatrix: off-diagonal length must be N - 1");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(diag_.begin(), diag_.end(), finite) ||
        !std::all_of(offdiag_.begin(), offdiag_.end(), finite)) {
        throw std::invalid_argument("TridiagonalMatrix: entries must be finite");
    }
}

std::pair<double, double> TridiagonalMatrix::gershgorin_bounds() const noexcept {
    const std::size_t n = diag_.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(offdiag_[i - 1]);
        if (i + 1 < n) radius += std::abs(offdiag_[i]);
        lo = std::min(lo, diag_[i] - radius);
        hi = std::max(hi, diag_[i] + radius);
    }
    return {lo, hi};
}

double TridiagonalMatrix::default_tolerance() const noexcept {
    const auto [lo, hi] = gershgorin_bounds();
    return 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

DenseSymmetricMatrix::DenseSymmetricMatrix(std::size_t order) : order_(order), data_(order * order, 0.0) {
    if (order == 0) {
        throw std::invalid_argument("DenseSymmetricMatrix: order must be at least 1");
    }
}

std::size_t sturm_count(const TridiagonalMatrix& t, double x) noexcept {
    const auto d = t.diag();
    const auto e = t.offdiag();
    double max_e2 = 1.0;
    for (double v : e) max_e2 = std::max(max_e2, v * v);
    // A pivot this small is replaced by +pivmin, i.e. the shift is nudged
    // below x so an eigenvalue exactly at x is not counted.
    const double pivmin = std::numeric_limits<double>::min() * max_e2;

    std::size_t count = 0;
    double q = d[0] - x;
    if (std::abs(q) < pivmin) q = std::signbit(q) && q != 0.0 ? -pivmin : pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if (std::abs(q) < pivmin) q = std::signbit(q) && q != 0.0 ? -pivmin : pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

namespace {

void require_tolerance(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw std::invalid_argument("eigenvalue tolerance must be positive and finite");
    }
}

// Bracket [lo, hi] with sturm_count(lo) == 0 and sturm_count(hi) == N.
std::pair<double, double> spectral_bracket(const TridiagonalMatrix& t, double tol) {
    auto [lo, hi] = t.gershgorin_bounds();
    const double pad = tol + 4.0 * std::numeric_limits<double>::epsilon() *
                                 std::max({1.0, std::abs(lo), std::abs(hi)});
    return {lo - pad, hi + pad};
}

// k-th smallest eigenvalue (0-based): the point where sturm_count crosses k + 1.
double bisect_kth(const TridiagonalMatrix& t, std::size_t k, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) >= k + 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double largest_eigenvalue(const TridiagonalMatrix& t, double tol) {
    require_tolerance(tol);
    const auto [lo, hi] = spectral_bracket(t, tol);
    return bisect_kth(t, t.size() - 1, lo, hi, tol);
}

double largest_eigenvalue(const TridiagonalMatrix& t) {
    return largest_eigenvalue(t, t.default_tolerance());
}

double smallest_eigenvalue(const TridiagonalMatrix& t, double tol) {
    require_tolerance(tol);
    const auto [lo, hi] = spectral_bracket(t, tol);
    return bisect_kth(t, 0, lo, hi, tol);
}

double smallest_eigenvalue(const TridiagonalMatrix& t) {
    return smallest_eigenvalue(t, t.default_tolerance());
}

std::vector<double> all_eigenvalues(const TridiagonalMatrix& t, double tol) {
    require_tolerance(tol);
    const auto [lo, hi] = spectral_bracket(t, tol);
    const std::size_t n = t.size();
    // Every eigenvalue must be accounted for inside the bracket.
    if (sturm_count(t, lo) != 0 || sturm_count(t, hi) != n) {
        throw std::runtime_error("all_eigenvalues: Sturm count inconsistent with Gershgorin bracket");
    }
    std::vector<double> values(n);
    double floor = lo;
    for (std::size_t k = 0; k < n; ++k) {
        // lambda_k >= lambda_{k-1}, so the previous estimate minus tol still
        // has at most k eigenvalues below it.
        double start = floor;
        if (sturm_count(t, start) > k) start = lo;
        values[k] = bisect_kth(t, k, start, hi, tol);
        floor = std::max(lo, values[k] - tol);
    }
    std::sort(values.begin(), values.end());
    return values;
}

std::vector<double> all_eigenvalues(const TridiagonalMatrix& t) {
    return all_eigenvalues(t, t.default_tolerance());
}

TridiagonalMatrix householder_tridiagonalize(const DenseSymmetricMatrix& m) {
    const std::size_t n = m.order();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    std::vector<double> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm2 += at(i, k) * at(i, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;

        const double alpha = -std::copysign(norm, at(k + 1, k));
        double vv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = at(i, k);
            if (i == k + 1) v[i] -= alpha;
            vv += v[i] * v[i];
        }
        if (vv == 0.0) continue;

        // Two-sided update of the trailing block: B <- B - v w^T - w v^T with
        // p = 2 B v / (v.v), w = p - (v.p / v.v) v.
        double vp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += at(i, j) * v[j];
            p[i] = 2.0 * s / vv;
            vp += v[i] * p[i];
        }
        const double c = vp / vv;
        for (std::size_t i = k + 1; i < n; ++i) p[i] -= c * v[i];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) at(i, j) -= v[i] * p[j] + p[i] * v[j];

        at(k + 1, k) = alpha;
        at(k, k + 1) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            at(i, k) = 0.0;
            at(k, i) = 0.0;
        }
    }

    std::vector<double> diag(n), off(n - 1);
    for (std::size_t i = 0; i < n; ++i) diag[i] = at(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = at(i + 1, i);
    return TridiagonalMatrix(std::move(diag), std::move(off));
}

}  // namespace twkit
