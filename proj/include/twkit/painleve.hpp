#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twkit {

/// Airy function Ai and its derivative, relative accuracy about 1e-10 on
/// [-10, 10]. Maclaurin series on [-7, 2], the K_{1/3} / K_{2/3} integral
/// representation above 2, and the oscillatory asymptotic expansion below -7.
double airy_ai(double x);
double airy_ai_prime(double x);

/// log Gamma(alpha) for alpha > 0; throws std::domain_error otherwise.
double log_gamma(double alpha);

/// The three classical symmetry classes with closed Painleve formulas.
enum class TwBeta : int { orthogonal = 1, unitary = 2, symplectic = 4 };

/// Maps 1, 2, 4 to TwBeta; anything else is std::invalid_argument.
TwBeta tw_beta_from(double beta);
inline int to_int(TwBeta b) noexcept { return static_cast<int>(b); }

class PainleveSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hastings-McLeod solution q of q'' = s q + 2 q^3, q ~ Ai at +infinity,
/// tabulated on a uniform grid together with the tail integrals
///   I1(x)  = int_x^inf q ds
///   I2(x)  = int_x^inf q^2 ds
///   I2w(x) = int_x^inf (s - x) q^2 ds.
/// Values between nodes use cubic Hermite interpolation with the exact
/// derivatives supplied by the ODE. Immutable after construction.
class PainleveSolution {
public:
    struct Node {
        double q;
        double qprime;
        double i1;
        double i2;
        double i2w;
    };

    PainleveSolution(double s_min, double step, std::vector<Node> nodes);

    double s_min() const noexcept { return s_min_; }
    double s_max() const noexcept { return s_min_ + step_ * static_cast<double>(nodes_.size() - 1); }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double grid(std::size_t k) const noexcept { return s_min_ + step_ * static_cast<double>(k); }
    const Node& node(std::size_t k) const noexcept { return nodes_[k]; }

    bool contains(double x) const noexcept;

    // Interpolated values; throw std::out_of_range outside [s_min, s_max].
    double q(double x) const;
    double qprime(double x) const;
    double i1(double x) const;
    double i2(double x) const;
    double i2w(double x) const;

    /// CSV with header "s,q,qprime,I1,I2,I2w", 17 significant digits.
    void write_csv(std::ostream& out) const;
    /// Parses write_csv output; throws std::runtime_error on malformed or
    /// inconsistent data (non-uniform grid, q not positive and decreasing).
    static PainleveSolution read_csv(std::istream& in);

private:
    std::size_t locate(double x, double& t) const;

    double s_min_;
    double step_;
    std::vector<Node> nodes_;
};

/// Integrates the Hastings-McLeod problem right to left with classical RK4
/// (four substeps per table step, extended precision) from Airy data at
/// max(s_max, 12). The integrals are carried as extra ODE components and
/// seeded with their exact Airy tails. The step is shrunk so that it divides
/// (s_max - s_min) exactly. Throws PainleveSolverError if q blows up or
/// reaches zero.
PainleveSolution solve_hastings_mcleod(double s_min = -10.0, double s_max = 8.0, double step = 1e-3);

/// As above with the Airy boundary data multiplied by boundary_scale; any
/// value other than 1 leaves the separatrix (blow-up above 1, a zero of q
/// below 1). Used for sensitivity checks.
PainleveSolution solve_hastings_mcleod(double s_min, double s_max, double step, double boundary_scale);

/// Tracy-Widom CDF from the Painleve formulas:
///   F2 = exp(-I2w), E = -I1 / 2, F1 = exp(E) sqrt(F2), F4 = cosh(E) sqrt(F2).
double tw_cdf(TwBeta beta, double x, const PainleveSolution& sol);
double tw_log_cdf(TwBeta beta, double x, const PainleveSolution& sol);
/// 1 - F_beta(x) without cancellation in the right tail.
double tw_survival(TwBeta beta, double x, const PainleveSolution& sol);
/// d/dx tw_cdf.
double tw_pdf(TwBeta beta, double x, const PainleveSolution& sol);

/// Argument scale mapping the largest-eigenvalue edge law of the beta-Hermite
/// model, N^(1/6) (lambda_max - 2 sqrt(N)), onto the classical formulas:
/// P(TW_beta <= x) = F_beta(edge_argument_scale(beta) * x).
/// 1 for beta = 1, 2 and 2^(2/3) for beta = 4.
double edge_argument_scale(TwBeta beta) noexcept;

/// Distribution of the edge-scaled largest eigenvalue of the beta-Hermite
/// ensemble for beta in {1, 2, 4}.
double tw_edge_cdf(TwBeta beta, double x, const PainleveSolution& sol);
double tw_edge_survival(TwBeta beta, double x, const PainleveSolution& sol);
double tw_edge_log_cdf(TwBeta beta, double x, const PainleveSolution& sol);

}  // namespace twkit
