#pragma once

namespace maxident {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace maxident
