#pragma once

#include "netsplit/rng.hpp"

namespace netsplit {

inline constexpr const char* kVersion = "0.1.0";

inline std::string version_string() {
  return std::string("netsplit ") + kVersion + " (rng=" + rng::kGeneratorName + ")";
}

}  // namespace netsplit
