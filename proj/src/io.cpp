#include "twkit/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twkit {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

json to_json(const EnsembleSpec& spec) {
    json j{{"kind", to_string(spec.kind)}, {"beta", spec.beta}};
    if (spec.kind == EnsembleKind::stochastic_airy) {
        j["sao"] = {{"domain_length", spec.sao.domain_length}, {"step", spec.sao.step}};
    } else {
        j["n_dim"] = spec.n_dim;
    }
    return j;
}

EnsembleSpec spec_from_json(const json& j) {
    EnsembleSpec spec;
    spec.kind = ensemble_kind_from(j.at("kind").get<std::string>());
    spec.beta = j.at("beta").get<double>();
    if (spec.kind == EnsembleKind::stochastic_airy) {
        spec.sao.domain_length = j.at("sao").at("domain_length").get<double>();
        spec.sao.step = j.at("sao").at("step").get<double>();
    } else {
        spec.n_dim = j.at("n_dim").get<std::size_t>();
    }
    spec.validate();
    return spec;
}

void write_samples_csv(std::ostream& out, const SampleBatch& batch) {
    out << "index,scaled_value\n";
    for (std::size_t i = 0; i < batch.samples.size(); ++i) out << i << ',' << format_double(batch.samples[i]) << '\n';
}

std::vector<double> read_samples_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "index,scaled_value") {
        throw std::runtime_error("samples csv: expected header 'index,scaled_value'");
    }
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("samples csv: row " + std::to_string(row) + " lacks a comma");
        if (line.substr(0, comma) != std::to_string(row)) {
            throw std::runtime_error("samples csv: row " + std::to_string(row) + " has index '" + line.substr(0, comma) + "'");
        }
        try {
            values.push_back(parse_double(std::string_view(line).substr(comma + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("samples csv: row " + std::to_string(row) + ": " + e.what());
        }
        ++row;
    }
    return values;
}

json sidecar_json(const SampleBatch& batch) {
    return json{{"spec", to_json(batch.spec)},
                {"seed", batch.master_seed},
                {"n", batch.samples.size()},
                {"version", batch.tool_version},
                {"timestamp", batch.timestamp}};
}

SampleBatch read_batch(std::istream& csv, std::istream& sidecar) {
    SampleBatch batch;
    json meta;
    try {
        meta = json::parse(sidecar);
        batch.spec = spec_from_json(meta.at("spec"));
        batch.master_seed = meta.at("seed").get<std::uint64_t>();
        batch.tool_version = meta.at("version").get<std::string>();
        batch.timestamp = meta.value("timestamp", "");
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("sidecar: ") + e.what());
    }
    batch.samples = read_samples_csv(csv);
    if (batch.samples.size() != meta.at("n").get<std::size_t>()) {
        throw std::runtime_error("sidecar count does not match the csv rows");
    }
    for (std::size_t i = 1; i < batch.samples.size(); ++i) {
        if (batch.samples[i] < batch.samples[i - 1]) throw std::runtime_error("samples csv: values not ascending");
    }
    return batch;
}

json to_json(const IdVerdict& verdict) {
    json evidence = json::array();
    for (const auto& [x, stat] : verdict.evidence) evidence.push_back({{"x", x}, {"statistic", stat}});
    return json{{"verdict", to_string(verdict.verdict)},
                {"threshold_used", verdict.threshold_used},
                {"evidence", evidence},
                {"note", verdict.note}};
}

json to_json(const TailFit& fit) {
    return json{{"exponent", fit.exponent},
                {"log_coefficient", fit.log_coefficient},
                {"coefficient", fit.coefficient()},
                {"r_squared", fit.r_squared},
                {"window", {fit.x_low, fit.x_high}},
                {"point_count", fit.point_count}};
}

json to_json(const BoundCheck& check) {
    json rows = json::array();
    for (const auto& r : check.rows) {
        // JSON has no infinities; an exactly zero tail is reported as null.
        rows.push_back({{"x", r.x},
                        {"log_tail", std::isfinite(r.log_tail) ? json(r.log_tail) : json(nullptr)},
                        {"log_bound", r.log_bound},
                        {"pass", r.pass}});
    }
    json j{{"holds", check.holds}, {"rows", rows}};
    j["witness"] = check.witness ? json(*check.witness) : json(nullptr);
    return j;
}

json to_json(const TailEstimate& e) {
    return json{{"estimate", e.estimate}, {"ci95", {e.ci_low, e.ci_high}}, {"exceed", e.exceed}, {"n", e.n}};
}

json to_json(const ConcentrationReport& r) {
    json estimates = json::array();
    for (const auto& e : r.estimates) estimates.push_back(to_json(e));
    return json{{"ensemble", r.ensemble == ConcentrationEnsemble::goe ? "GOE" : "GUE"},
                {"normalization", r.ensemble == ConcentrationEnsemble::goe
                                      ? "lambda_max / sqrt(N)"
                                      : "(lambda_max - sample mean) / sqrt(N)"},
                {"n_dim", r.n_dim},
                {"count", r.count},
                {"center_count", r.center_count},
                {"center", r.center},
                {"a", r.a},
                {"b", r.b},
                {"c", r.c},
                {"enforce_from", r.enforce_from},
                {"check", to_json(r.check)},
                {"estimates", estimates},
                {"verdict", to_json(r.verdict)}};
}

void write_bound_check_csv(std::ostream& out, const BoundCheck& check) {
    out << "x,tail,bound,pass\n";
    for (const auto& r : check.rows) {
        out << format_double(r.x) << ',' << format_double(std::exp(r.log_tail)) << ','
            << format_double(std::exp(r.log_bound)) << ',' << (r.pass ? "true" : "false") << '\n';
    }
}

void write_cdf_csv(std::ostream& out, std::span<const double> xs, const PainleveSolution& sol) {
    out << "x,F1,F2,F4\n";
    for (double x : xs) {
        out << format_double(x) << ',' << format_double(tw_cdf(TwBeta::orthogonal, x, sol)) << ','
            << format_double(tw_cdf(TwBeta::unitary, x, sol)) << ','
            << format_double(tw_cdf(TwBeta::symplectic, x, sol)) << '\n';
    }
}

void write_tails_csv(std::ostream& out, double beta, std::span<const double> xs) {
    out << "x,side,log_asymptote\n";
    for (double x : xs) {
        out << format_double(x) << ",left," << format_double(tail_asymptote(beta, TailSide::left, x)) << '\n';
        out << format_double(x) << ",right," << format_double(tail_asymptote(beta, TailSide::right, x)) << '\n';
    }
}

}  // namespace twkit
