#pragma once

#include <nlohmann/json.hpp>

#include "ves/exclusion.hpp"
#include "ves/pipeline.hpp"
#include "ves/regression.hpp"

// JSON forms of the report types. Non-finite numbers (the perfect-fit
// sentinels) are written as the strings "inf", "-inf" and "nan"; absent
// optionals as null.

namespace ves {

nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExclusionReport& r);
nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const HlForm& h);
nlohmann::json to_json(const VesParams& p);
nlohmann::json to_json(const GroupEstimate& g);
nlohmann::json to_json(const IndustryComparison& c);
nlohmann::json to_json(const BatchReport& r);

FitResult fit_result_from_json(const nlohmann::json& j);
GroupEstimate group_estimate_from_json(const nlohmann::json& j);
BatchReport batch_report_from_json(const nlohmann::json& j);

}  // namespace ves
