#pragma once

namespace awf {

inline constexpr const char* kVersion = "0.1.0";

} // namespace awf
