#pragma once

namespace driftbif {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace driftbif
