#pragma once

namespace zbwg {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace zbwg
