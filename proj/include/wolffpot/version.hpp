#pragma once

namespace wolffpot {
inline constexpr const char* kVersion = "0.1.0";
}
