#pragma once

namespace hypoharnack {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hypoharnack
