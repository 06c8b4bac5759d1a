// version.hpp

#pragma once

namespace catgate {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace catgate
