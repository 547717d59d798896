#pragma once

#include <string>

#include <json.hpp>

namespace wordrange::detail {

using Json = nlohmann::ordered_json;

/// JSON pretty-printed, or a two-line CSV (flattened keys, values).
std::string render(const Json& j, const std::string& format);

}  // namespace wordrange::detail
