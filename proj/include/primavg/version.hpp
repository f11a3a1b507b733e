#pragma once

namespace primavg {

inline constexpr const char* version = "0.1.0";

}  // namespace primavg
