#pragma once

namespace defcyc {

inline constexpr const char* kToolkitVersion = "1.0.0";

} // namespace defcyc
