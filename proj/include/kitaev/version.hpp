#pragma once

namespace kitaev {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kitaev
