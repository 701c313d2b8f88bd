// Deterministic synthetic driving scenes for benchmarks and tests: cars on
// parallel lanes 4 m apart moving at constant velocity along z.

#pragma once

#include <cstdint>

#include "mot3d/kitti_io.hpp"
#include "mot3d/tracker.hpp"

namespace mot3d {

struct ScenarioOptions {
  int frames = 1000;
  int objects = 5;
  std::uint64_t seed = 0;
  /// Standard deviation of detection position noise, meters.
  double position_noise = 0.05;
  std::string category = "Car";
};

struct Scenario {
  int num_frames = 0;
  FrameMap<Detection> detections;
  /// Ground truth; object k carries track id k.
  FrameMap<GtObject> ground_truth;
};

Scenario make_scenario(const ScenarioOptions& options);

}  // namespace mot3d
