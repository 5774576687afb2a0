#pragma once

namespace gravmc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gravmc
