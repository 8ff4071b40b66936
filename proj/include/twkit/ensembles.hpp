#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "twkit/random.hpp"
#include "twkit/trilinalg.hpp"

namespace twkit {

enum class EnsembleKind { beta_hermite, goe_dense, stochastic_airy };

std::string to_string(EnsembleKind kind);
/// Accepts "beta-hermite", "goe-dense", "stochastic-airy"; throws std::invalid_argument.
EnsembleKind ensemble_kind_from(const std::string& name);

/// Discretization of the stochastic Airy operator on [0, L] with step h.
struct SaoParams {
    double domain_length = 10.0;
    double step = 0.01;

    friend bool operator==(const SaoParams&, const SaoParams&) = default;
};

/// Which random-matrix model to sample and at what size.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::beta_hermite;
    double beta = 2.0;
    std::size_t n_dim = 100;  // unused by stochastic_airy
    SaoParams sao{};

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

/// One chi_t draw as sqrt(2 G), G ~ Gamma(t / 2, 1).
double sample_chi(double dof, RandomStream& stream);

/// chi_t density 2^{1 - t/2} x^{t-1} e^{-x^2/2} / Gamma(t/2).
double chi_pdf(double dof, double x);

/// Tridiagonal beta-Hermite matrix: diagonal N(0, 2) / sqrt(beta), k-th
/// off-diagonal (1-based from the top) chi_{(N-k) beta} / sqrt(beta).
TridiagonalMatrix sample_beta_hermite(const EnsembleSpec& spec, RandomStream& stream);

/// Dense GOE matrix with density proportional to exp(-tr H^2 / 4): diagonal
/// N(0, 2), off-diagonal N(0, 1).
DenseSymmetricMatrix sample_goe_dense(std::size_t n, RandomStream& stream);

/// Edge scaling N^{1/6} (lambda_max - 2 sqrt(N)).
double scale_largest(double lambda_max, std::size_t n);

/// Unnormalized log joint density of ordered eigenvalues,
/// beta sum_{i<j} log|l_i - l_j| - (beta / 4) sum l_i^2.
/// Returns -infinity on a repeated eigenvalue; throws std::invalid_argument
/// if the input is not nondecreasing.
double log_joint_eigen_density(std::span<const double> lambdas, double beta);

/// Grid x_k = k h, k = 0..K with K = ceil(L / h), and one Brownian increment
/// (variance h) per interior node k = 1..K-1.
struct SaoGrid {
    std::vector<double> points;
    std::vector<double> increments;
    double step = 0.0;
};

SaoGrid sample_sao_grid(const SaoParams& params, RandomStream& stream);
/// Same grid with all increments zero.
SaoGrid deterministic_sao_grid(const SaoParams& params);

/// Finite-difference stochastic Airy operator on the interior nodes with
/// Dirichlet ends: diagonal 2/h^2 + x_k + (2/sqrt(beta)) dB_k / h,
/// off-diagonal -1/h^2.
TridiagonalMatrix sao_operator(const SaoGrid& grid, double beta);

/// Negated ground-state eigenvalue of the discretized operator.
double sao_statistic(const SaoGrid& grid, double beta);

/// One approximate TW_beta draw from the stochastic Airy operator.
double sample_tw_sao(const EnsembleSpec& spec, RandomStream& stream);

/// Largest eigenvalue of one draw of a matrix kind (BetaHermite or GOEDense),
/// unscaled.
double sample_largest_eigenvalue(const EnsembleSpec& spec, RandomStream& stream);

/// The per-sample statistic of a batch: edge-scaled lambda_max for matrix
/// kinds, the SAO statistic for stochastic_airy.
double sample_scaled_statistic(const EnsembleSpec& spec, RandomStream& stream);

}  // namespace twkit
