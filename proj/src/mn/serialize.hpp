#pragma once

#include <json.hpp>

#include "mn/certify.hpp"
#include "mn/scalar_majorant.hpp"

namespace mn {

nlohmann::json to_json(const RadiiReport& report);
nlohmann::json to_json(const HypothesisReport& report);
nlohmann::json to_json(const CheckResult& result);
nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const CertificationReport& report);

}  // namespace mn
