#pragma once

// JSON and text renderings of results. Every report carries the group name
// and the presentation fingerprint.

#include <string>

#include <json.hpp>

#include "b0kit/acceptance.hpp"
#include "b0kit/bogomolov.hpp"
#include "b0kit/certificate.hpp"
#include "b0kit/linalg.hpp"

namespace b0kit::report {

using nlohmann::json;

json to_json(const AbelianInvariants& a);
/// Throws std::invalid_argument on malformed input or a broken divisor chain.
AbelianInvariants invariants_from_json(const json& j);

json to_json(const Element& e);

json to_json(const bogomolov::B0Result& r);
bogomolov::B0Result b0_from_json(const json& j);

json to_json(const certificate::Certificate& c);
json to_json(const certificate::LemfReport& r);
json to_json(const acceptance::CriterionResult& r);

std::string to_text(const bogomolov::B0Result& r);
std::string to_text(const certificate::Certificate& c);

}  // namespace b0kit::report
