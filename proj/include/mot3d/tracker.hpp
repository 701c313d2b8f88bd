// Online per-frame tracking loop: predict, associate by 3D IoU, update,
// then manage track births and deaths.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mot3d/detection.hpp"
#include "mot3d/kalman.hpp"

namespace mot3d {

struct TrackerConfig {
  /// Minimum 3D IoU for a track-detection pair to count as a match.
  double iou_gate = 0.1;
  /// Frames a track may go unmatched before it is deleted.
  int max_age = 2;
  /// Consecutive matches before a track is reported. Waived while the
  /// frame index is below min_hits.
  int min_hits = 3;
  NoiseConfig noise;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct TrackReport {
  int frame = 0;
  int id = 0;
  Box3D box;
  double score = 0.0;
  std::string category;
};

template <typename T>
using FrameMap = std::map<int, std::vector<T>>;

class Tracker {
 public:
  explicit Tracker(TrackerConfig config);

  /// Processes one frame. Frames must arrive in strictly increasing order
  /// and every detection must carry `frame`; violations throw
  /// std::logic_error. Reports are ordered by track id.
  std::vector<TrackReport> step(int frame, std::span<const Detection> detections);

  const std::vector<KalmanTrack>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  /// Total size clamps applied by updates, including deleted tracks.
  int size_clamp_count() const;

 private:
  TrackerConfig config_;
  KalmanModel model_;
  std::vector<KalmanTrack> tracks_;
  int next_id_ = 1;
  std::optional<int> last_frame_;
  int retired_clamps_ = 0;
};

/// Runs a fresh tracker over frames 0..N, where N is the last frame holding
/// detections or `num_frames - 1`, whichever is larger. Frames absent from
/// the map are processed as empty.
std::vector<TrackReport> run_sequence(const TrackerConfig& config,
                                      const FrameMap<Detection>& detections,
                                      int num_frames = 0);

}  // namespace mot3d
