#pragma once

namespace siltlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace siltlab
