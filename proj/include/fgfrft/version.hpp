#pragma once

namespace fgfrft {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fgfrft
