#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "twkit/ensembles.hpp"
#include "twkit/montecarlo.hpp"
#include "twkit/painleve.hpp"

using namespace twkit;

namespace {

const PainleveSolution& table() {
    static const PainleveSolution sol = solve_hastings_mcleod();
    return sol;
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

std::string replace_line(const std::string& csv, std::size_t line_no, const std::string& replacement) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    for (std::size_t i = 0; std::getline(in, line); ++i) out << (i == line_no ? replacement : line) << '\n';
    return out.str();
}

}  // namespace

TEST_CASE("airy_ai") {
    CHECK(airy_ai(0.0) == doctest::Approx(0.35502805388781724).epsilon(1e-14));
    CHECK(airy_ai(5.0) > 0.0);
    CHECK(airy_ai(5.0) < 1e-3);
    SUBCASE("matches boost::math::airy_ai to 1e-10 relative on [-10, 10]") {
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = -10.0 + i * 0.01;
            const double ref = boost::math::airy_ai(x);
            const double refp = boost::math::airy_ai_prime(x);
            // Relative error, measured against the local envelope near zeros.
            const double scale_ai = std::max(std::abs(ref), 1e-3 * std::pow(std::max(1.0, std::abs(x)), -0.25));
            const double scale_aip = std::max(std::abs(refp), 1e-3 * std::pow(std::max(1.0, std::abs(x)), 0.25));
            worst = std::max({worst, std::abs(airy_ai(x) - ref) / (x > 0 ? std::abs(ref) : scale_ai),
                              std::abs(airy_ai_prime(x) - refp) / (x > 0 ? std::abs(refp) : scale_aip)});
        }
        CHECK(worst <= 1e-10);
    }
    SUBCASE("satisfies Ai'' = x Ai") {
        const double h = 1e-3;
        for (double x = -9.5; x <= 9.5; x += 0.25) {
            const double second = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
            // Central difference truncation is h^2 Ai''''/12, and Ai'''' grows like x^2.
            CHECK(std::abs(second - x * airy_ai(x)) <= 2e-7 * (1.0 + x * x));
        }
    }
    SUBCASE("continuous across method switches") {
        for (double x : {-7.0, 2.0}) {
            CHECK(airy_ai(x - 1e-12) == doctest::Approx(airy_ai(x + 1e-12)).epsilon(1e-10));
            CHECK(airy_ai_prime(x - 1e-12) == doctest::Approx(airy_ai_prime(x + 1e-12)).epsilon(1e-10));
        }
    }
}

TEST_CASE("log_gamma") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
}

TEST_CASE("solve_hastings_mcleod") {
    const auto& sol = table();
    CHECK(sol.s_min() == doctest::Approx(-10.0));
    CHECK(sol.s_max() == doctest::Approx(8.0));
    CHECK(std::abs(sol.q(6.0) - airy_ai(6.0)) <= 1e-8);
    CHECK(std::abs(sol.q(sol.s_max()) - airy_ai(sol.s_max())) <= 1e-8);
    const double ratio = sol.q(-8.0) / 2.0;
    CHECK(ratio >= 0.99);
    CHECK(ratio <= 1.01);
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const auto& n = sol.node(k);
        CHECK(n.q > 0.0);
        CHECK(n.i1 >= 0.0);
        CHECK(n.i2 >= 0.0);
        CHECK(n.i2w >= 0.0);
        if (k > 0) {
            const auto& p = sol.node(k - 1);
            CHECK(n.q < p.q);
            CHECK(n.i1 <= p.i1);
            CHECK(n.i2 <= p.i2);
            CHECK(n.i2w <= p.i2w);
        }
    }
    CHECK_THROWS_AS(solve_hastings_mcleod(-10.0, 5.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_hastings_mcleod(8.0, 8.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_hastings_mcleod(-10.0, 8.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sol.q(8.5), std::out_of_range);
    CHECK_THROWS_AS(sol.i2w(-10.5), std::out_of_range);
}

TEST_CASE("perturbed boundary data leaves the separatrix") {
    CHECK_THROWS_AS(solve_hastings_mcleod(-10.0, 8.0, 1e-3, 1.001), PainleveSolverError);
    CHECK_THROWS_AS(solve_hastings_mcleod(-10.0, 8.0, 1e-3, 0.999), PainleveSolverError);
}

TEST_CASE("tw_cdf examples and invariants") {
    const auto& sol = table();
    for (TwBeta b : {TwBeta::orthogonal, TwBeta::unitary, TwBeta::symplectic}) {
        CHECK(tw_cdf(b, sol.s_max(), sol) >= 1.0 - 1e-6);
        CHECK(tw_cdf(b, sol.s_min(), sol) <= 1e-6);
        double prev = 0.0;
        for (std::size_t k = 0; k < sol.size(); k += 7) {
            const double f = tw_cdf(b, sol.grid(k), sol);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(f >= prev - 1e-15);
            prev = f;
        }
        CHECK_THROWS_AS(tw_cdf(b, 9.0, sol), std::out_of_range);
    }
    for (double x = -9.0; x <= 7.5; x += 0.5) {
        const double r = std::sqrt(tw_cdf(TwBeta::unitary, x, sol));
        CHECK(tw_cdf(TwBeta::orthogonal, x, sol) <= r);
        CHECK(r <= tw_cdf(TwBeta::symplectic, x, sol));
    }
    // Published values: F2(-2) and F1, F2 moments.
    CHECK(tw_cdf(TwBeta::unitary, -2.0, sol) == doctest::Approx(0.413224142505).epsilon(1e-9));
    const double mean2 = simpson([&](double x) { return x * tw_pdf(TwBeta::unitary, x, sol); }, -10.0, 8.0, 18000);
    const double second2 = simpson([&](double x) { return x * x * tw_pdf(TwBeta::unitary, x, sol); }, -10.0, 8.0, 18000);
    const double mean1 = simpson([&](double x) { return x * tw_pdf(TwBeta::orthogonal, x, sol); }, -10.0, 8.0, 18000);
    CHECK(mean2 == doctest::Approx(-1.7710868074).epsilon(1e-8));
    CHECK(second2 - mean2 * mean2 == doctest::Approx(0.8131947928).epsilon(1e-8));
    // F1 keeps about 8e-9 of mass beyond s = 8; add its first moment back.
    const double s8 = tw_survival(TwBeta::orthogonal, 8.0, sol);
    CHECK(mean1 + s8 * (8.0 + 1.0 / std::sqrt(8.0)) == doctest::Approx(-1.2065335746).epsilon(1e-8));
}

TEST_CASE("tw_pdf") {
    const auto& sol = table();
    for (TwBeta b : {TwBeta::orthogonal, TwBeta::unitary, TwBeta::symplectic}) {
        const double total = simpson([&](double x) { return tw_pdf(b, x, sol); }, -10.0, 8.0, 18000);
        CHECK(std::abs(total - 1.0) <= 1e-4);
    }
    const double h = 1e-4;
    for (TwBeta b : {TwBeta::orthogonal, TwBeta::unitary, TwBeta::symplectic}) {
        for (double x : {-3.0, 0.0, 2.0}) {
            const double fd = (tw_cdf(b, x + h, sol) - tw_cdf(b, x - h, sol)) / (2.0 * h);
            CHECK(std::abs(tw_pdf(b, x, sol) - fd) <= 1e-5);
        }
    }
    CHECK(tw_pdf(TwBeta::unitary, 7.9, sol) < 1e-6);
    for (double x = -9.9; x < 8.0; x += 0.1) CHECK(tw_pdf(TwBeta::unitary, x, sol) >= 0.0);
}

TEST_CASE("tail asymptotics of F2") {
    const auto& sol = table();
    const double left = tw_log_cdf(TwBeta::unitary, -7.0, sol) / (-343.0 / 12.0);
    CHECK(left >= 0.85);
    CHECK(left <= 1.15);
    // With the 1/(16 pi x^1.5) prefactor divided out.
    const double right = std::log(16.0 * std::numbers::pi * std::pow(7.0, 1.5) * tw_survival(TwBeta::unitary, 7.0, sol)) /
                         (-(4.0 / 3.0) * std::pow(7.0, 1.5));
    CHECK(right >= 0.9);
    CHECK(right <= 1.1);
    CHECK(tw_survival(TwBeta::unitary, 0.0, sol) == doctest::Approx(1.0 - tw_cdf(TwBeta::unitary, 0.0, sol)).epsilon(1e-12));
}

TEST_CASE("step halving changes F2 by at most 1e-8") {
    const auto& sol = table();
    const PainleveSolution half = solve_hastings_mcleod(-10.0, 8.0, 5e-4);
    for (double x : {-5.0, -2.0, 0.0, 2.0}) {
        CHECK(std::abs(tw_cdf(TwBeta::unitary, x, sol) - tw_cdf(TwBeta::unitary, x, half)) <= 1e-8);
    }
}

TEST_CASE("edge law for beta = 4 uses the 2^(2/3) argument scale") {
    const auto& sol = table();
    CHECK(edge_argument_scale(TwBeta::unitary) == 1.0);
    CHECK(edge_argument_scale(TwBeta::symplectic) == doctest::Approx(std::cbrt(4.0)));
    CHECK(tw_edge_cdf(TwBeta::symplectic, -1.0, sol) ==
          doctest::Approx(tw_cdf(TwBeta::symplectic, -std::cbrt(4.0), sol)).epsilon(1e-14));
    CHECK(tw_beta_from(4.0) == TwBeta::symplectic);
    CHECK_THROWS_AS(tw_beta_from(3.0), std::invalid_argument);
}

TEST_CASE("F2(0) agrees with Monte Carlo at N = 400" * doctest::description("slow")) {
    const auto& sol = table();
    EnsembleSpec spec;
    spec.beta = 2.0;
    spec.n_dim = 400;
    const auto batch = run_batch(spec, 200000, 2701);
    const double empirical = 1.0 - empirical_tail(batch, 0.0).estimate;
    CHECK(std::abs(empirical - tw_cdf(TwBeta::unitary, 0.0, sol)) <= 0.01);
}

TEST_CASE("PainleveSolution CSV round trip and corruption") {
    const PainleveSolution small = solve_hastings_mcleod(-4.0, 8.0, 0.01);
    std::ostringstream out;
    small.write_csv(out);
    const std::string csv = out.str();
    std::istringstream in(csv);
    const PainleveSolution back = PainleveSolution::read_csv(in);
    REQUIRE(back.size() == small.size());
    for (std::size_t k = 0; k < small.size(); ++k) {
        CHECK(back.grid(k) == doctest::Approx(small.grid(k)).epsilon(1e-15));
        CHECK(back.node(k).q == small.node(k).q);
        CHECK(back.node(k).qprime == small.node(k).qprime);
        CHECK(back.node(k).i1 == small.node(k).i1);
        CHECK(back.node(k).i2 == small.node(k).i2);
        CHECK(back.node(k).i2w == small.node(k).i2w);
    }
    auto rejects = [](const std::string& text) {
        std::istringstream bad(text);
        CHECK_THROWS_AS(PainleveSolution::read_csv(bad), std::runtime_error);
    };
    rejects("");
    rejects("s,q\n1,2\n");
    rejects(replace_line(csv, 5, "garbage"));
    rejects(replace_line(csv, 5, "-3.96,nan,0,0,0,0"));
    rejects(replace_line(csv, 5, "-3.9,0.5,0,0,0,0"));     // off the uniform grid
    rejects(replace_line(csv, 5, "-3.96,-0.5,0,0,0,0"));   // q not positive
    rejects(replace_line(csv, 5, "-3.96,1,2,3"));          // too few columns
}
