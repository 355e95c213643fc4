#pragma once

#include <string>

#include <json.hpp>

#include "semidecay/verify.hpp"

namespace semidecay {

using Json = nlohmann::ordered_json;

// Complex numbers are always [re, im]; block-diagonal data is a list of
// row-major block matrices.
Json operator_to_json(const OperatorModel& A);
OperatorModel operator_from_json(const Json& j);

Json experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const Json& j);

Json report_to_json(const DecayReport& rep);
Json prediction_to_json(const DecayPrediction& pred);
Json profile_to_json(const GrowthProfile& prof);
Json check_to_json(const CheckReport& rep);

std::string curve_to_csv(const DecayCurve& curve);
std::string profile_to_csv(const GrowthProfile& prof);

/// Deterministic serialization used for all file outputs.
std::string dump_json(const Json& j);

}  // namespace semidecay
