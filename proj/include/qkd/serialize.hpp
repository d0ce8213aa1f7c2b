#pragma once

#include <string>

#include <json.hpp>

#include "qkd/mcharness.hpp"
#include "qkd/optimize.hpp"

namespace qkd {

using Json = nlohmann::ordered_json;

Json to_json(const SystemParams& p);
Json to_json(const RateBreakdown& b);
Json to_json(const CurvePoint& pt);
Json to_json(const McCounts& c);
/// Report body: protocol, strategy, counts, rates, standard_errors, analytic.
Json to_json(const McReport& r);

/// Locale-independent, `digits` significant digits.
std::string format_number(double value, int digits);

}  // namespace qkd
