#pragma once

#include <string_view>

namespace tailguard {

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace tailguard
