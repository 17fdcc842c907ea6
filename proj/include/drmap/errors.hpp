#pragma once

#include <stdexcept>
#include <string>

namespace drmap {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear address or tile size outside the device word space.
struct CapacityError : Error {
  using Error::Error;
};

// Coordinate component outside its geometry bound.
struct BoundsError : Error {
  using Error::Error;
};

// Malformed input file or option set.
struct ConfigError : Error {
  using Error::Error;
};

// Not even the (1,1,1,1) tile fits the on-chip buffers.
struct InfeasibleLayerError : Error {
  explicit InfeasibleLayerError(const std::string& layer)
      : Error("no buffer-feasible tiling for layer '" + layer + "'"),
        layer_name(layer) {}
  std::string layer_name;
};

// Closed-form result disagrees with trace replay.
struct OracleMismatchError : Error {
  using Error::Error;
};

}  // namespace drmap
