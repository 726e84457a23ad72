#pragma once

namespace kvisim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kvisim
