#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace twkit {

/// Real symmetric tridiagonal matrix stored as its diagonal (length N) and
/// first off-diagonal (length N - 1). Entries are validated finite on
/// construction.
class TridiagonalMatrix {
public:
    TridiagonalMatrix(std::vector<double> diag, std::vector<double> offdiag);

    std::size_t size() const noexcept { return diag_.size(); }
    std::span<const double> diag() const noexcept { return diag_; }
    std::span<const double> offdiag() const noexcept { return offdiag_; }

    /// Lower and upper Gershgorin bounds; every eigenvalue lies in [first, second].
    std::pair<double, double> gershgorin_bounds() const noexcept;

    /// Bisection tolerance used when callers do not supply one:
    /// 1e-12 * max(1, largest Gershgorin bound magnitude).
    double default_tolerance() const noexcept;

    friend bool operator==(const TridiagonalMatrix&, const TridiagonalMatrix&) = default;

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
};

/// Dense real symmetric matrix, row-major. set() writes both (i, j) and
/// (j, i) so the stored entries stay exactly symmetric.
class DenseSymmetricMatrix {
public:
    explicit DenseSymmetricMatrix(std::size_t order);

    std::size_t order() const noexcept { return order_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * order_ + j]; }
    void set(std::size_t i, std::size_t j, double value) noexcept {
        data_[i * order_ + j] = value;
        data_[j * order_ + i] = value;
    }

private:
    std::size_t order_;
    std::vector<double> data_;
};

/// Number of eigenvalues of t strictly less than x.
std::size_t sturm_count(const TridiagonalMatrix& t, double x) noexcept;

/// Largest eigenvalue to within tol, by bisection on sturm_count.
double largest_eigenvalue(const TridiagonalMatrix& t, double tol);
double largest_eigenvalue(const TridiagonalMatrix& t);

/// Smallest eigenvalue to within tol.
double smallest_eigenvalue(const TridiagonalMatrix& t, double tol);
double smallest_eigenvalue(const TridiagonalMatrix& t);

/// All eigenvalues in ascending order, each to within tol.
std::vector<double> all_eigenvalues(const TridiagonalMatrix& t, double tol);
std::vector<double> all_eigenvalues(const TridiagonalMatrix& t);

/// Orthogonal reduction of a dense symmetric matrix to tridiagonal form by
/// Householder reflections. Eigenvectors are not accumulated.
TridiagonalMatrix householder_tridiagonalize(const DenseSymmetricMatrix& m);

}  // namespace twkit
