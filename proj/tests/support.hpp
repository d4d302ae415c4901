#pragma once

#include <optional>
#include <utility>

#include "alexprobe/error.hpp"
#include "alexprobe/metric.hpp"

namespace support {

// Code of the alexprobe::Error thrown by f, or nullopt if nothing was thrown.
template <class F>
std::optional<alexprobe::ErrorCode> error_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const alexprobe::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline alexprobe::DistanceMatrix metric(const alexprobe::RawMatrix& raw) {
  return alexprobe::require_metric(raw);
}

// Center first, leaves at distance 1 from it and 2 from each other.
inline alexprobe::RawMatrix tripod() { return {{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}}; }

// Tripod plus the midpoint of the first leg (index 4).
inline alexprobe::RawMatrix tripod_midpoint() {
  return {{0, 1, 1, 1, 0.5},
          {1, 0, 2, 2, 0.5},
          {1, 2, 0, 2, 1.5},
          {1, 2, 2, 0, 1.5},
          {0.5, 0.5, 1.5, 1.5, 0}};
}

inline alexprobe::RawMatrix equilateral() { return {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}; }

}  // namespace support
