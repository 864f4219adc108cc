#pragma once

namespace coolcav {
inline constexpr const char* kVersion = "0.1.0";
}
