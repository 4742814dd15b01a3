#pragma once

namespace strongdet {
inline constexpr const char* kVersion = "0.1.0";
}
