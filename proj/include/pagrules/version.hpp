#pragma once

namespace pagrules {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pagrules
