// Synthetic ground truth and tracker output for evaluation tests.

#pragma once

#include <cstdint>
#include <vector>

#include "mot3d/evaluation.hpp"

namespace fixtures {

mot3d::GtObject gt_object(int frame, int id, const mot3d::Box3D& box);
mot3d::TrackReport report(int frame, int id, const mot3d::Box3D& box,
                          double score = 1.0);

/// A car footprint of length 4 along x at (x, z).
mot3d::Box3D car(double x, double z = 20.0);

struct NoisyOptions {
  int frames = 20;
  int objects = 3;
  double miss_rate = 0.15;
  double swap_rate = 0.05;
  double clutter_rate = 0.3;
  /// Distinct score levels; small values force many ties.
  int score_levels = 12;
};

/// Objects moving on nearby lanes, tracked with jitter, misses, id swaps,
/// fragmented ids, and scored clutter.
mot3d::EvalSequence noisy_sequence(std::uint64_t seed, const NoisyOptions& opt = {});

/// Ground truth copied into predictions with fresh ids and the given score.
mot3d::EvalSequence self_sequence(const mot3d::EvalSequence& seq);

}  // namespace fixtures
