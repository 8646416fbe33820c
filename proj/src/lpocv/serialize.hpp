#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "lpocv/bases.hpp"
#include "lpocv/estimator.hpp"
#include "lpocv/lpo.hpp"
#include "lpocv/moments.hpp"
#include "lpocv/penalty.hpp"
#include "lpocv/selection.hpp"
#include "lpocv/simulation.hpp"

namespace lpocv {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// %.17g, so every double round-trips; non-finite values become null.
std::string format_number(double v);

/// Serializes with format_number for floating values; object keys come out sorted.
std::string dump_json(const Json& j, int indent = 2);

/// Throws Parse with the parser's message.
Json parse_json(std::string_view text);

/// {"family": "histogram", "params": {"D": 4}}; params use D, K, j, J, depth and r.
Json model_to_json(const Model& m);
Model model_from_json(const Json& j);

CollectionKind collection_kind_from_string(std::string_view s);

/// {"kind": "uniform"} | {"kind": "piecewise_constant", "heights", "breaks"}
/// | {"kind": "holder_cusp", "L", "alpha"} | {"kind": "trig_smooth", "cos", "sin"}
Json density_to_json(const DensitySpec& d);
DensitySpec density_from_json(const Json& j);

/// "auto" | "half" | "loo" | {"rule": "fixed"|"fraction"|"auto", "value": x}
PRule p_rule_from_json(const Json& j);
Json p_rule_to_json(const PRule& r);

ExperimentConfig experiment_from_json(const Json& j);
Json experiment_to_json(const ExperimentConfig& c);

Json to_json(const LpoRisk& r);
Json to_json(const ProjectionEstimate& e);
Json to_json(const SelectionResult& r, const Collection& c);
Json to_json(const AssumptionReport& r, const Collection& c, std::size_t n);
Json to_json(const MomentReport& r, const Model& m);
Json to_json(const PenaltyDecomposition& d, const Model& m);
Json to_json(const EpsilonSolution& e);
Json to_json(const PRange& r);
Json to_json(const RatioReport& r, const ExperimentConfig& c);
Json to_json(const SlopeReport& r, const ExperimentConfig& c);

}  // namespace lpocv
