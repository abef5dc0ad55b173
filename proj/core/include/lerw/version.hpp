#pragma once

namespace lerw {

inline constexpr const char* kCodeVersion = "lerwlab-0.1.0";

}  // namespace lerw
