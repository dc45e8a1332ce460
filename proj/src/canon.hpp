// Shared serialization helper: doubles holding whole numbers are emitted as
// JSON integers so equal values always serialize to equal bytes.
#pragma once

#include <cmath>
#include <cstdint>

#include <json.hpp>

namespace aep {

inline nlohmann::json canonical_number(double v) {
  if (std::floor(v) == v && std::abs(v) < 9.007199254740992e15)
    return nlohmann::json(static_cast<std::int64_t>(v));
  return nlohmann::json(v);
}

}  // namespace aep
