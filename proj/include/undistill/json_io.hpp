#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "undistill/channels.hpp"
#include "undistill/distill.hpp"
#include "undistill/sampling.hpp"

namespace undistill::io {

using Json = nlohmann::ordered_json;

/// Any document the CLI accepts as input, discriminated by its keys:
/// "choi" -> channel, "vector" -> tripartite pure state, "matrix" -> state.
using InputDocument = std::variant<DensityMatrix, TripartitePureState, ChoiChannel>;

/// Throws Error(kParse) on malformed JSON or schema violations and the
/// state/channel validation errors on invariant violations.
InputDocument parse_document(const std::string& text);

DensityMatrix state_from_json(const Json& j);
TripartitePureState pure_state_from_json(const Json& j);
ChoiChannel channel_from_json(const Json& j);

Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);
Json to_json(const DensityMatrix& rho);
Json to_json(const TripartitePureState& psi);
Json to_json(const ChoiChannel& channel);
Json to_json(const states::PptVerdict& v);
Json to_json(const distill::DistillabilityReport& report);
Json to_json(const distill::RankRegimeRecord& rec);
Json to_json(const EnsembleReport& report);

/// Serializes with every floating-point number printed to 17 significant
/// digits, so doubles round-trip exactly. Object keys keep insertion order.
std::string dump(const Json& j, int indent = 2);

/// One CSV row per sample, with a header line.
std::string ensemble_csv(const EnsembleReport& report);

/// Flattens a document to "path,value" rows (csv) or "path = value" lines.
std::string flatten(const Json& j, bool csv);

}  // namespace undistill::io
