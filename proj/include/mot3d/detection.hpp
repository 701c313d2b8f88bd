#pragma once

#include <string>

#include "mot3d/geometry.hpp"

namespace mot3d {

/// One detector output for one frame. Scores are raw detector confidences
/// and may exceed 1; only their order matters downstream.
struct Detection {
  int frame = 0;
  Box3D box;
  double score = 0.0;
  std::string category;
};

}  // namespace mot3d
