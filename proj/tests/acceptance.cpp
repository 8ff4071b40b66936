#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>

#include "twkit/painleve.hpp"
#include "twkit/verify.hpp"

int main(int argc, char** argv) {
    twkit::VerifyContext ctx;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) ctx.scale = twkit::VerifyScale::quick;
    }
    try {
        const twkit::PainleveSolution sol = twkit::solve_hastings_mcleod();
        ctx.solution = &sol;
        int failures = 0;
        for (int id = 1; id <= 11; ++id) {
            const auto r = twkit::run_check(id, ctx);
            std::printf("%s\n", twkit::summary_line(r).c_str());
            std::fflush(stdout);
            if (!r.pass) ++failures;
        }
        std::printf("%d of 11 criteria passed\n", 11 - failures);
        return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 3;
    }
}
