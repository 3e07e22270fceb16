#pragma once

#include <string_view>

namespace factions {

inline constexpr std::string_view kToolName = "factions";
inline constexpr std::string_view kToolVersion = "0.1.0";

} // namespace factions
