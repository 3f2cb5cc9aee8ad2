#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "unidemand/instance.hpp"

namespace unidemand {

// Parses JSON keeping every non-integer number as its original text (stored
// as a JSON string), so decimals such as 0.1 convert to rationals exactly.
// Syntax errors raise InputError carrying the line and column.
nlohmann::json parse_json_exact(std::string_view text);

// Number, numeric string, or "p/q" string -> exact rational.
Rational json_rational(const nlohmann::json& value, const std::string& what);
double json_double(const nlohmann::json& value, const std::string& what);

// Instance schema:
//   {"tie_break": "lowest"|"highest", "class": "mhr"|"regular" (optional),
//    "items": [{"kind": "discrete", "support": [...], "masses": [...]},
//              {"kind": "exponential", "lambda": 1},
//              {"kind": "uniform", "a": 0, "b": 1},
//              {"kind": "truncated_normal", "mu": 1, "sigma": 0.5},
//              {"kind": "power_tail", "alpha": 2}]}
Instance instance_from_json(const nlohmann::json& document);
Instance load_instance(std::string_view text);
Instance load_instance_file(const std::string& path);

nlohmann::json item_to_json(const ValueDistribution& item);
nlohmann::json instance_to_json(const Instance& instance);

}  // namespace unidemand
