#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "twkit/painleve.hpp"
#include "twkit/trilinalg.hpp"

namespace twkit {

enum class VerifyScale { full, quick };

/// One measured quantity and its accepted interval [lo, hi].
struct Measurement {
    std::string name;
    double value = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool pass = false;
};

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<Measurement> measurements;
    nlohmann::json detail = nlohmann::json::object();
    double seconds = 0.0;
};

struct VerifyContext {
    VerifyScale scale = VerifyScale::full;
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    const PainleveSolution* solution = nullptr;
};

// The acceptance checks, numbered 1..11.
CheckResult check_right_tail_law(const VerifyContext& ctx);
CheckResult check_left_tail_law(const VerifyContext& ctx);
CheckResult check_edge_universality(const VerifyContext& ctx);
CheckResult check_gaussian_criterion_limit(const VerifyContext& ctx);
CheckResult check_two_sided_tail(const VerifyContext& ctx);
CheckResult check_concentration_pipeline(const VerifyContext& ctx);
CheckResult check_wigner_surmise(const VerifyContext& ctx);
CheckResult check_stochastic_airy(const VerifyContext& ctx);
CheckResult check_eigen_oracles(const VerifyContext& ctx);
CheckResult check_painleve_integrity(const VerifyContext& ctx);
CheckResult check_determinism(const VerifyContext& ctx);

/// Runs check id (1..11); throws std::out_of_range for other ids.
CheckResult run_check(int id, const VerifyContext& ctx);
std::vector<CheckResult> run_verify(const VerifyContext& ctx);

nlohmann::json to_json(const Measurement& m);
nlohmann::json to_json(const CheckResult& r);
nlohmann::json verify_report(const std::vector<CheckResult>& results, const VerifyContext& ctx);

/// "criterion N: PASS|FAIL  title  [name=value in [lo, hi]; ...]".
std::string summary_line(const CheckResult& r);

// Independent oracles, exposed for tests.

/// Real roots of det(lambda I - T) by Durand-Kerner on the expanded
/// characteristic polynomial, ascending. Intended for N <= 6.
std::vector<double> characteristic_roots(const TridiagonalMatrix& t);

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(const DenseSymmetricMatrix& m);

/// Smallest-magnitude zero of Ai (about -2.338107), by bisection on airy_ai.
double first_airy_zero();

}  // namespace twkit
