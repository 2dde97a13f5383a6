#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fkdet/fk.hpp"

namespace fkdet::app {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers, non-finite ones as "inf" / "-inf" / "nan".
Json json_number(double v);
double json_to_double(const Json& j);

/// Deterministic part of a trace; per-point wall times go to `wall_ms`.
Json trace_json(const ApproximationTrace& t, std::vector<double>* wall_ms);

/// Two-column aligned text.
std::string aligned(const std::vector<std::pair<std::string, std::string>>& rows);

}  // namespace fkdet::app
