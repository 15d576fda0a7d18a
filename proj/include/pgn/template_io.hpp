#pragma once

#include <json.hpp>

#include "pgn/template.hpp"

namespace pgn {

// {"m","n","breakpoints":["p/q",...],"values":[[...],...],"tail":{"kind":...}}
nlohmann::json template_to_json(const Template& t);
Template template_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ValidationReport& rep);
nlohmann::json analysis_to_json(const IntervalAnalysis& a);

nlohmann::json rvec_to_json(const RVec& v);
RVec rvec_from_json(const nlohmann::json& j);

}  // namespace pgn
