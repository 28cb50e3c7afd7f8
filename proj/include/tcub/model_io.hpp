#pragma once

// JSON model documents:
//
//   {"d": 2, "spots": [50, 50], "vols": 0.2, "rate": 0.05, "maturity": 1,
//    "correlation": {"rho": 0.1}, "strike": 45, "payoff": "put_on_min"}
//
// spots, vols, weights and barriers accept a scalar (broadcast to d entries)
// or an array. weights defaults to 1/d. correlation is {"rho": x} or
// {"matrix": [[...], ...]}.

#include <string>
#include <utility>

#include <json.hpp>

#include "tcub/model.hpp"

namespace tcub {

std::pair<ModelSpec, PayoffSpec> model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelSpec& model, const PayoffSpec& payoff);

/// Reads and validates a model file; ConfigError names the path on failure.
std::pair<ModelSpec, PayoffSpec> load_model(const std::string& path);

}  // namespace tcub
