#include "mot3d/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mot3d/assignment.hpp"

namespace mot3d {

void TrackerConfig::validate() const {
  if (!(iou_gate >= 0.0 && iou_gate <= 1.0)) {
    throw std::invalid_argument("iou_gate must lie in [0, 1]");
  }
  if (max_age < 0) throw std::invalid_argument("max_age must be >= 0");
  if (min_hits < 1) throw std::invalid_argument("min_hits must be >= 1");
  for (double s : {noise.initial_scale, noise.process_scale,
                   noise.measurement_scale}) {
    if (!(s > 0.0 && std::isfinite(s))) {
      throw std::invalid_argument("noise scales must be positive and finite");
    }
  }
}

Tracker::Tracker(TrackerConfig config)
    : config_(config), model_(KalmanModel::constant_velocity(config.noise)) {
  config_.validate();
}

int Tracker::size_clamp_count() const {
  int n = retired_clamps_;
  for (const KalmanTrack& t : tracks_) n += t.size_clamps();
  return n;
}

std::vector<TrackReport> Tracker::step(int frame,
                                       std::span<const Detection> detections) {
  if (frame < 0) throw std::logic_error("frame index must be non-negative");
  if (last_frame_ && frame <= *last_frame_) {
    throw std::logic_error("frame " + std::to_string(frame) +
                           " received after frame " +
                           std::to_string(*last_frame_));
  }
  for (const Detection& d : detections) {
    if (d.frame != frame) {
      throw std::logic_error("detection for frame " + std::to_string(d.frame) +
                             " passed to step for frame " +
                             std::to_string(frame));
    }
  }
  last_frame_ = frame;

  for (KalmanTrack& t : tracks_) t.predict(model_);

  const std::size_t nt = tracks_.size();
  const std::size_t nd = detections.size();
  std::vector<char> track_matched(nt, 0), det_matched(nd, 0);
  if (nt > 0 && nd > 0) {
    CostMatrix cost(nt, nd);
    for (std::size_t i = 0; i < nt; ++i) {
      const Box3D predicted = tracks_[i].box();
      for (std::size_t j = 0; j < nd; ++j) {
        cost(i, j) = -iou3d(predicted, detections[j].box);
      }
    }
    for (const auto& [i, j] : solve_min_cost(cost).pairs) {
      if (-cost(i, j) < config_.iou_gate) continue;
      tracks_[i].update(detections[j], model_);
      track_matched[i] = 1;
      det_matched[j] = 1;
    }
  }
  for (std::size_t i = 0; i < nt; ++i) {
    if (!track_matched[i]) tracks_[i].mark_missed();
  }

  for (std::size_t j = 0; j < nd; ++j) {
    if (!det_matched[j]) tracks_.emplace_back(detections[j], next_id_++, model_);
  }

  std::erase_if(tracks_, [&](const KalmanTrack& t) {
    if (t.time_since_update() > config_.max_age) {
      retired_clamps_ += t.size_clamps();
      return true;
    }
    return false;
  });

  std::vector<TrackReport> reports;
  for (const KalmanTrack& t : tracks_) {
    if (t.time_since_update() != 0) continue;
    if (t.hit_streak() < config_.min_hits && frame >= config_.min_hits) continue;
    reports.push_back({frame, t.id(), t.box(), t.score(), t.category()});
  }
  return reports;
}

std::vector<TrackReport> run_sequence(const TrackerConfig& config,
                                      const FrameMap<Detection>& detections,
                                      int num_frames) {
  int last = num_frames - 1;
  if (!detections.empty()) last = std::max(last, detections.rbegin()->first);

  Tracker tracker(config);
  std::vector<TrackReport> out;
  const std::vector<Detection> none;
  for (int f = 0; f <= last; ++f) {
    auto it = detections.find(f);
    const std::vector<Detection>& dets = it == detections.end() ? none : it->second;
    std::vector<TrackReport> r = tracker.step(f, dets);
    out.insert(out.end(), std::make_move_iterator(r.begin()),
               std::make_move_iterator(r.end()));
  }
  return out;
}

}  // namespace mot3d
