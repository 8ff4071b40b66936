#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twkit/montecarlo.hpp"
#include "twkit/painleve.hpp"
#include "twkit/tails.hpp"

namespace twkit {

/// Shortest decimal text that parses back to exactly v ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);
/// Parses the whole of text as a double; throws std::invalid_argument otherwise.
double parse_double(std::string_view text);

nlohmann::json to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const nlohmann::json& j);

/// "index,scaled_value" rows in batch order.
void write_samples_csv(std::ostream& out, const SampleBatch& batch);
/// Reads write_samples_csv output; throws std::runtime_error on malformed rows.
std::vector<double> read_samples_csv(std::istream& in);

/// {spec, seed, n, version, timestamp}.
nlohmann::json sidecar_json(const SampleBatch& batch);
/// Rebuilds a batch from its CSV and sidecar; checks count and ordering.
SampleBatch read_batch(std::istream& csv, std::istream& sidecar);

nlohmann::json to_json(const IdVerdict& verdict);
nlohmann::json to_json(const TailFit& fit);
nlohmann::json to_json(const BoundCheck& check);
nlohmann::json to_json(const TailEstimate& estimate);
nlohmann::json to_json(const ConcentrationReport& report);

/// "x,tail,bound,pass" with tail and bound as probabilities.
void write_bound_check_csv(std::ostream& out, const BoundCheck& check);

/// "x,F1,F2,F4" rows of the classical Painleve formulas.
void write_cdf_csv(std::ostream& out, std::span<const double> xs, const PainleveSolution& sol);
/// "x,side,log_asymptote" rows, left then right for each x.
void write_tails_csv(std::ostream& out, double beta, std::span<const double> xs);

}  // namespace twkit
