#pragma once

namespace dhw {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dhw
