#pragma once

namespace catapult {
inline constexpr const char* kVersion = "0.1.0";
}
