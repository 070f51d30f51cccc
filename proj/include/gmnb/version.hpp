#pragma once

namespace gmnb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gmnb
