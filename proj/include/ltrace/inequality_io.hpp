#pragma once

#include <string>

#include <json.hpp>

#include "ltrace/demos.hpp"
#include "ltrace/harness.hpp"

namespace ltrace {

inline constexpr const char* kInequalitySchema = "ltrace.inequality/1";
inline constexpr const char* kDemoSchema = "ltrace.demo/1";

/// Report document: schema, tool_version, test, operator {name, n, k}, s,
/// q, beta, theta, alpha, morrey {value, estimator, family}, ratios,
/// sup_ratio, spread, verdict, growth [{parameter, lhs, rhs, ratio}],
/// resolutions, box_sizes, seeds, metrics, notes, exploratory, config.
nlohmann::json inequality_to_json(const InequalityReport& r, const nlohmann::json& config = nlohmann::json::object());
InequalityReport inequality_from_json(const nlohmann::json& doc);

/// parameter,LHS,RHS,ratio
std::string growth_csv(const std::vector<GrowthRow>& rows);

nlohmann::json discontinuity_to_json(const DiscontinuityReport& r);
std::string discontinuity_csv(const DiscontinuityReport& r);
nlohmann::json strict_to_json(const StrictReport& r);
std::string strict_csv(const StrictReport& r);

}  // namespace ltrace
