#include "twkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twkit/io.hpp"
#include "twkit/montecarlo.hpp"
#include "twkit/painleve.hpp"
#include "twkit/tails.hpp"
#include "twkit/verify.hpp"

namespace twkit {

using nlohmann::json;

namespace {

struct Grid {
    double lo;
    double hi;
    double step;
};

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw UsageError("--" + key + ": " + what);
}

void validate(RunConfig& c) {
    require(c.spec.beta > 0.0 && std::isfinite(c.spec.beta), "beta", "must be a positive number");
    require(c.count >= 1, "count", "must be at least 1");
    require(c.format == "csv" || c.format == "json", "format", "must be csv or json");
    if (c.command == Command::sample) {
        require(c.spec.n_dim >= 1, "n-dim", "must be at least 1");
        require(c.spec.kind != EnsembleKind::goe_dense || c.spec.beta == 1.0, "beta", "goe-dense requires beta = 1");
        if (c.spec.kind == EnsembleKind::stochastic_airy) {
            require(c.spec.sao.domain_length > 0.0, "sao-length", "must be positive");
            require(c.spec.sao.step > 0.0 && c.spec.sao.step < c.spec.sao.domain_length, "sao-step",
                    "must lie in (0, sao-length)");
        }
        try {
            c.spec.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("ensemble: ") + e.what());
        }
    }
    if (c.x_step) require(*c.x_step > 0.0, "x-step", "must be positive");
    if (c.x_min && c.x_max) require(*c.x_min < *c.x_max, "x-max", "must exceed x-min");
    if (c.command == Command::tails && c.x_min) require(*c.x_min > 0.0, "x-min", "tails need x > 0");
    if (c.command == Command::idcheck) {
        require(c.tail == "asymptote" || c.tail == "painleve" || c.tail == "samples", "tail",
                "must be asymptote, painleve or samples");
        require(c.threshold > 0.0, "threshold", "must be positive");
        require(c.x_count >= 8, "x-count", "the evidence grid needs at least 8 points");
        if (c.x_min) require(*c.x_min > 1.0, "x-min", "the evidence grid must exceed 1");
        if (c.tail == "painleve") {
            require(c.spec.beta == 1.0 || c.spec.beta == 2.0 || c.spec.beta == 4.0, "beta",
                    "painleve tails exist for beta 1, 2, 4");
        }
        if (c.tail == "samples") {
            require(!c.input.empty(), "input", "required with --tail samples");
            require(c.scale > 0.0, "scale", "must be positive");
            require(c.bound_a && c.bound_b && c.bound_c, "bound-a", "samples need --bound-a, --bound-b and --bound-c");
            require(c.bound_min && c.bound_max, "bound-min", "samples need --bound-min and --bound-max");
        }
        if (c.bound_a) require(*c.bound_a > 0.0, "bound-a", "must be positive");
        if (c.bound_b) require(*c.bound_b > 0.0, "bound-b", "must be positive");
        if (c.bound_c) require(*c.bound_c > 1.0, "bound-c", "must exceed 1");
        if (c.bound_min && c.bound_max) {
            require(*c.bound_min > 0.0 && *c.bound_min < *c.bound_max, "bound-max", "need 0 < bound-min < bound-max");
        }
    }
}

Grid linear_range(const RunConfig& c, Grid fallback) {
    return {c.x_min.value_or(fallback.lo), c.x_max.value_or(fallback.hi), c.x_step.value_or(fallback.step)};
}

std::vector<double> expand(const Grid& g) {
    std::vector<double> xs;
    const auto n = static_cast<std::size_t>(std::floor((g.hi - g.lo) / g.step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) xs.push_back(g.lo + g.step * static_cast<double>(i));
    return xs;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

PainleveSolution load_solution(const RunConfig& c) {
    if (c.painleve_snapshot.empty()) return solve_hastings_mcleod();
    std::ifstream in(c.painleve_snapshot);
    if (!in) throw std::runtime_error("cannot open Painleve snapshot '" + c.painleve_snapshot + "'");
    try {
        return PainleveSolution::read_csv(in);
    } catch (const std::exception& e) {
        throw std::runtime_error("Painleve snapshot '" + c.painleve_snapshot + "': " + e.what());
    }
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
    const SampleBatch batch = run_batch(c.spec, c.count, c.seed, c.threads);
    {
        Output o(c.out, out);
        if (c.format == "csv") {
            write_samples_csv(*o, batch);
        } else {
            json rows = json::array();
            for (std::size_t i = 0; i < batch.samples.size(); ++i) rows.push_back({{"index", i}, {"scaled_value", batch.samples[i]}});
            *o << rows.dump(2) << '\n';
        }
    }
    if (!c.out.empty()) {
        std::ofstream side(c.out + ".json");
        if (!side) throw std::runtime_error("cannot write sidecar '" + c.out + ".json'");
        side << sidecar_json(batch).dump(2) << '\n';
    }
    return exit_ok;
}

int cmd_cdf(const RunConfig& c, std::ostream& out) {
    const PainleveSolution sol = load_solution(c);
    const Grid g = linear_range(c, {-8.0, 6.0, 0.1});
    if (g.lo < sol.s_min() || g.hi > sol.s_max()) {
        throw UsageError("--x-min/--x-max: the table covers [" + format_double(sol.s_min()) + ", " +
                         format_double(sol.s_max()) + "]");
    }
    const auto xs = expand(g);
    Output o(c.out, out);
    if (c.format == "csv") {
        write_cdf_csv(*o, xs, sol);
    } else {
        json rows = json::array();
        for (double x : xs) {
            rows.push_back({{"x", x},
                            {"F1", tw_cdf(TwBeta::orthogonal, x, sol)},
                            {"F2", tw_cdf(TwBeta::unitary, x, sol)},
                            {"F4", tw_cdf(TwBeta::symplectic, x, sol)}});
        }
        *o << rows.dump(2) << '\n';
    }
    return exit_ok;
}

int cmd_tails(const RunConfig& c, std::ostream& out) {
    const auto xs = expand(linear_range(c, {0.5, 10.0, 0.5}));
    Output o(c.out, out);
    if (c.format == "csv") {
        write_tails_csv(*o, c.spec.beta, xs);
    } else {
        json rows = json::array();
        for (double x : xs) {
            for (TailSide side : {TailSide::left, TailSide::right}) {
                rows.push_back({{"x", x},
                                {"side", side == TailSide::left ? "left" : "right"},
                                {"log_asymptote", tail_asymptote(c.spec.beta, side, x)}});
            }
        }
        *o << rows.dump(2) << '\n';
    }
    return exit_ok;
}

int cmd_idcheck(const RunConfig& c, std::ostream& out) {
    std::optional<PainleveSolution> sol;
    std::optional<TailFunction> tail;
    if (c.tail == "asymptote") {
        tail.emplace(asymptote_two_sided_tail(c.spec.beta));
    } else if (c.tail == "painleve") {
        sol.emplace(load_solution(c));
        tail.emplace(painleve_two_sided_tail(tw_beta_from(c.spec.beta), *sol));
    } else {
        std::ifstream in(c.input);
        if (!in) throw std::runtime_error("cannot open samples '" + c.input + "'");
        auto samples = read_samples_csv(in);
        if (samples.empty()) throw std::runtime_error("samples '" + c.input + "' hold no rows");
        std::sort(samples.begin(), samples.end());
        double mean = 0.0;
        for (double v : samples) mean += v;
        mean /= static_cast<double>(samples.size());
        tail.emplace(empirical_abs_tail(std::move(samples), mean, c.scale, *c.bound_min, *c.bound_max));
    }
    const double lo = c.x_min.value_or(c.tail == "painleve" ? 1.5 : 10.0);
    const double hi = c.x_max.value_or(c.tail == "painleve" ? 15.0 : 1e6);
    std::vector<double> evidence;
    try {
        evidence = log_grid(lo, hi, c.x_count);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--x-min/--x-max: ") + e.what());
    }
    ClassifyOptions options;
    options.non_gaussian = c.non_gaussian;
    if (c.bound_a && c.bound_b && c.bound_c && c.bound_min && c.bound_max) {
        options.bound = ExponentialBound{*c.bound_a, *c.bound_b, *c.bound_c,
                                         linear_grid(*c.bound_min, *c.bound_max, c.bound_count)};
    }
    IdVerdict verdict;
    try {
        verdict = classify_id(*tail, evidence, c.threshold, options);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--x-min/--x-max/--x-count: ") + e.what());
    }
    json j = to_json(verdict);
    j["tail"] = tail->description();
    Output o(c.out, out);
    *o << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const PainleveSolution sol = load_solution(c);
    VerifyContext ctx;
    ctx.scale = c.quick ? VerifyScale::quick : VerifyScale::full;
    ctx.seed = c.seed;
    ctx.threads = c.threads;
    ctx.solution = &sol;
    std::vector<CheckResult> results;
    for (int id = 1; id <= 11; ++id) {
        results.push_back(run_check(id, ctx));
        err << summary_line(results.back()) << '\n';
    }
    const json report = verify_report(results, ctx);
    Output o(c.out, out);
    *o << report.dump(2) << '\n';
    return report.at("all_pass").get<bool>() ? exit_ok : exit_check_failed;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig c;
    c.seed = 1;
    CLI::App app{"Tracy-Widom and beta-Hermite toolkit", "twkit"};
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.allow_config_extras(false);
    app.require_subcommand(1, 1);

    std::string kind = to_string(c.spec.kind);
    double sao_length = c.spec.sao.domain_length;
    double sao_step = c.spec.sao.step;

    app.add_option("--kind", kind, "beta-hermite, goe-dense or stochastic-airy")
        ->check(CLI::IsMember({"beta-hermite", "goe-dense", "stochastic-airy"}));
    app.add_option("--beta", c.spec.beta, "Dyson index (> 0)");
    app.add_option("--n-dim", c.spec.n_dim, "matrix order N");
    app.add_option("--sao-length", sao_length, "stochastic Airy domain length");
    app.add_option("--sao-step", sao_step, "stochastic Airy grid step");
    app.add_option("--count", c.count, "number of samples");
    app.add_option("--seed", c.seed, "master seed");
    app.add_option("--threads", c.threads, "worker threads, 0 = auto (never changes results)");
    app.add_option("--x-min", c.x_min, "grid start");
    app.add_option("--x-max", c.x_max, "grid end");
    app.add_option("--x-step", c.x_step, "grid step (linear grids)");
    app.add_option("--x-count", c.x_count, "points of the logarithmic evidence grid (idcheck)");
    app.add_option("--out", c.out, "output file (default: standard output)");
    app.add_option("--format", c.format, "csv or json");
    app.add_flag("--quick", c.quick, "reduced sample sizes and looser tolerances (verify)");
    app.add_option("--painleve-snapshot", c.painleve_snapshot, "read the Painleve table from this CSV");
    app.add_option("--tail", c.tail, "asymptote, painleve or samples (idcheck)");
    app.add_option("--threshold", c.threshold, "Gaussian-criterion threshold (idcheck)");
    app.add_option("--non-gaussian", c.non_gaussian, "assert the law is non-Gaussian (idcheck)");
    app.add_option("--input", c.input, "samples CSV for --tail samples");
    app.add_option("--scale", c.scale, "divide |X - mean| by this before the tail (samples)");
    app.add_option("--bound-a", c.bound_a, "exponential bound prefactor a");
    app.add_option("--bound-b", c.bound_b, "exponential bound rate b");
    app.add_option("--bound-c", c.bound_c, "exponential bound power c (> 1)");
    app.add_option("--bound-min", c.bound_min, "bound grid start");
    app.add_option("--bound-max", c.bound_max, "bound grid end");
    app.add_option("--bound-count", c.bound_count, "bound grid points");

    const std::pair<const char*, Command> commands[] = {{"sample", Command::sample},
                                                        {"cdf", Command::cdf},
                                                        {"tails", Command::tails},
                                                        {"idcheck", Command::idcheck},
                                                        {"verify", Command::verify}};
    const char* help[] = {"draw scaled largest-eigenvalue samples", "tabulate F1, F2, F4",
                          "tabulate the leading-order tail logarithms", "run the infinite-divisibility diagnostic",
                          "run the acceptance checks"};
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->fallthrough();
        sub->callback([&c, cmd = commands[i].second] { c.command = cmd; });
    }

    if (args.empty()) throw UsageError(app.help());
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    try {
        c.spec.kind = ensemble_kind_from(kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--kind: ") + e.what());
    }
    c.spec.sao = {sao_length, sao_step};
    validate(c);
    return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& h) {
        out << h.what();
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        if (args.empty()) return exit_usage;  // the message is the full help text
        err << "run 'twkit --help' for the list of commands and flags\n";
        return exit_usage;
    }
    try {
        switch (config.command) {
            case Command::sample: return cmd_sample(config, out);
            case Command::cdf: return cmd_cdf(config, out);
            case Command::tails: return cmd_tails(config, out);
            case Command::idcheck: return cmd_idcheck(config, out);
            case Command::verify: return cmd_verify(config, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_runtime;
}

}  // namespace twkit
