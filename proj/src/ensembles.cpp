#include "twkit/ensembles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "twkit/painleve.hpp"

namespace twkit {

std::string to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::beta_hermite: return "beta-hermite";
        case EnsembleKind::goe_dense: return "goe-dense";
        case EnsembleKind::stochastic_airy: return "stochastic-airy";
    }
    return "unknown";
}

EnsembleKind ensemble_kind_from(const std::string& name) {
    if (name == "beta-hermite") return EnsembleKind::beta_hermite;
    if (name == "goe-dense") return EnsembleKind::goe_dense;
    if (name == "stochastic-airy") return EnsembleKind::stochastic_airy;
    throw std::invalid_argument("unknown ensemble kind '" + name + "'");
}

void EnsembleSpec::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be positive and finite");
    }
    if (kind == EnsembleKind::goe_dense && beta != 1.0) {
        throw std::invalid_argument("beta must be 1 for the dense GOE ensemble");
    }
    if (kind != EnsembleKind::stochastic_airy && n_dim < 1) {
        throw std::invalid_argument("n_dim must be at least 1");
    }
    if (kind == EnsembleKind::stochastic_airy) {
        if (!(sao.domain_length > 0.0) || !std::isfinite(sao.domain_length)) {
            throw std::invalid_argument("sao domain_length must be positive");
        }
        if (!(sao.step > 0.0) || !(sao.step < sao.domain_length)) {
            throw std::invalid_argument("sao step must satisfy 0 < h < L");
        }
        if (sao.domain_length / sao.step < 2.0) {
            throw std::invalid_argument("sao grid needs at least one interior node");
        }
    }
}

double sample_chi(double dof, RandomStream& stream) {
    if (!(dof > 0.0) || !std::isfinite(dof)) {
        throw std::domain_error("sample_chi: degrees of freedom must be positive");
    }
    for (;;) {
        const double x = std::sqrt(2.0 * stream.gamma(0.5 * dof));
        if (x > 0.0) return x;
    }
}

double chi_pdf(double dof, double x) {
    if (!(dof > 0.0) || !(x > 0.0) || !std::isfinite(dof) || !std::isfinite(x)) {
        throw std::domain_error("chi_pdf: requires t > 0 and x > 0");
    }
    const double log_f = (1.0 - 0.5 * dof) * std::numbers::ln2 + (dof - 1.0) * std::log(x) - 0.5 * x * x -
                         log_gamma(0.5 * dof);
    return std::exp(log_f);
}

TridiagonalMatrix sample_beta_hermite(const EnsembleSpec& spec, RandomStream& stream) {
    spec.validate();
    const std::size_t n = spec.n_dim;
    const double inv_root_beta = 1.0 / std::sqrt(spec.beta);
    std::vector<double> diag(n), off(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = std::numbers::sqrt2 * stream.normal() * inv_root_beta;
    }
    for (std::size_t k = 1; k < n; ++k) {
        off[k - 1] = sample_chi(static_cast<double>(n - k) * spec.beta, stream) * inv_root_beta;
    }
    return TridiagonalMatrix(std::move(diag), std::move(off));
}

DenseSymmetricMatrix sample_goe_dense(std::size_t n, RandomStream& stream) {
    DenseSymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, std::numbers::sqrt2 * stream.normal());
        for (std::size_t j = i + 1; j < n; ++j) {
            m.set(i, j, stream.normal());
        }
    }
    return m;
}

double scale_largest(double lambda_max, std::size_t n) {
    if (n < 1) throw std::invalid_argument("scale_largest: N must be at least 1");
    const double nd = static_cast<double>(n);
    return std::pow(nd, 1.0 / 6.0) * (lambda_max - 2.0 * std::sqrt(nd));
}

double log_joint_eigen_density(std::span<const double> lambdas, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("log_joint_eigen_density: beta must be positive");
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] < lambdas[i - 1]) {
            throw std::invalid_argument("log_joint_eigen_density: eigenvalues must be nondecreasing");
        }
    }
    double vandermonde = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        quadratic += lambdas[i] * lambdas[i];
        for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
            const double gap = lambdas[j] - lambdas[i];
            if (gap == 0.0) return -std::numeric_limits<double>::infinity();
            vandermonde += std::log(gap);
        }
    }
    return beta * vandermonde - 0.25 * beta * quadratic;
}

namespace {

SaoGrid make_sao_points(const SaoParams& params) {
    const auto intervals = static_cast<std::size_t>(std::ceil(params.domain_length / params.step - 1e-9));
    SaoGrid grid;
    grid.step = params.step;
    grid.points.resize(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) grid.points[k] = params.step * static_cast<double>(k);
    grid.increments.assign(intervals - 1, 0.0);
    return grid;
}

}  // namespace

SaoGrid sample_sao_grid(const SaoParams& params, RandomStream& stream) {
    SaoGrid grid = make_sao_points(params);
    const double sd = std::sqrt(params.step);
    for (double& db : grid.increments) db = sd * stream.normal();
    return grid;
}

SaoGrid deterministic_sao_grid(const SaoParams& params) { return make_sao_points(params); }

TridiagonalMatrix sao_operator(const SaoGrid& grid, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("sao_operator: beta must be positive");
    const std::size_t interior = grid.increments.size();
    if (interior == 0 || grid.points.size() != interior + 2) {
        throw std::invalid_argument("sao_operator: malformed grid");
    }
    const double h = grid.step;
    const double inv_h2 = 1.0 / (h * h);
    const double noise_scale = 2.0 / std::sqrt(beta) / h;
    std::vector<double> diag(interior), off(interior - 1, -inv_h2);
    for (std::size_t i = 0; i < interior; ++i) {
        diag[i] = 2.0 * inv_h2 + grid.points[i + 1] + noise_scale * grid.increments[i];
    }
    return TridiagonalMatrix(std::move(diag), std::move(off));
}

double sao_statistic(const SaoGrid& grid, double beta) {
    return -smallest_eigenvalue(sao_operator(grid, beta));
}

double sample_tw_sao(const EnsembleSpec& spec, RandomStream& stream) {
    spec.validate();
    if (spec.kind != EnsembleKind::stochastic_airy) {
        throw std::invalid_argument("sample_tw_sao: spec kind must be stochastic-airy");
    }
    return sao_statistic(sample_sao_grid(spec.sao, stream), spec.beta);
}

double sample_largest_eigenvalue(const EnsembleSpec& spec, RandomStream& stream) {
    switch (spec.kind) {
        case EnsembleKind::beta_hermite:
            return largest_eigenvalue(sample_beta_hermite(spec, stream));
        case EnsembleKind::goe_dense:
            spec.validate();
            return largest_eigenvalue(householder_tridiagonalize(sample_goe_dense(spec.n_dim, stream)));
        case EnsembleKind::stochastic_airy:
            break;
    }
    throw std::invalid_argument("sample_largest_eigenvalue: not a matrix ensemble");
}

double sample_scaled_statistic(const EnsembleSpec& spec, RandomStream& stream) {
    if (spec.kind == EnsembleKind::stochastic_airy) return sample_tw_sao(spec, stream);
    return scale_largest(sample_largest_eigenvalue(spec, stream), spec.n_dim);
}

}  // namespace twkit
