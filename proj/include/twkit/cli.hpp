#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twkit/ensembles.hpp"

namespace twkit {

enum class Command { sample, cdf, tails, idcheck, verify };

enum ExitStatus : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_runtime = 3 };

struct RunConfig {
    Command command = Command::verify;
    EnsembleSpec spec;
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::optional<double> x_step;
    std::size_t x_count = 25;
    std::string out;  // empty: standard output
    std::string format = "csv";
    bool quick = false;
    std::string painleve_snapshot;
    // idcheck
    std::string tail = "asymptote";
    double threshold = 10.0;
    bool non_gaussian = true;
    std::string input;
    double scale = 1.0;
    std::optional<double> bound_a;
    std::optional<double> bound_b;
    std::optional<double> bound_c;
    std::optional<double> bound_min;
    std::optional<double> bound_max;
    std::size_t bound_count = 13;
};

/// Raised for anything the user must fix on the command line or in the
/// config file; the message names the offending key.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when parsing stopped to show help; carries the rendered text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Command line over config file (--config, flat key=value lines) over defaults.
RunConfig parse_config(const std::vector<std::string>& args);

/// Parses and executes; returns an ExitStatus. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twkit
