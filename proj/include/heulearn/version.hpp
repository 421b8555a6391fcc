#pragma once

namespace heulearn {

inline constexpr const char* kVersion = "0.1.0";

} // namespace heulearn
