#pragma once

#include <nlohmann/json.hpp>

#include "unidemand/anchoring.hpp"
#include "unidemand/discretization.hpp"
#include "unidemand/pipeline.hpp"
#include "unidemand/stats.hpp"

namespace unidemand {

// Rationals are written as "p/q" strings, binary64 values as shortest
// round-trip decimals (nlohmann's default number formatting).
nlohmann::json rational_json(const Rational& value);
nlohmann::json prices_json(const PriceVector& prices);
nlohmann::json estimate_json(const Estimate& estimate);

nlohmann::json to_json(const MhrAnchor& anchor);
nlohmann::json to_json(const RegularAnchor& anchor);
nlohmann::json to_json(const AnchorReport& report);
nlohmann::json to_json(const DiscretizationPlan& plan);
nlohmann::json to_json(const RestrictedInstance& ri);
nlohmann::json to_json(const SolveReport& report);

}  // namespace unidemand
