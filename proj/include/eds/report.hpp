#pragma once

#include <json.hpp>
#include <string>

#include "eds/jets.hpp"
#include "eds/pfaffian.hpp"
#include "eds/scenarios.hpp"
#include "eds/unicorn.hpp"

namespace eds {

using Json = nlohmann::ordered_json;

Json to_json(const LinearPfaffianSystem& sys, const InvolutivityReport& r);
Json to_json(const ScenarioReport& r);
Json to_json(const JetState& s);
Json to_json(const VerificationReport& r, bool with_points = false);
Json error_json(const std::string& kind, const std::string& message);

std::string schema_path();

}  // namespace eds
