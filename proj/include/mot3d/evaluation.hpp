// 3D MOT evaluation: CLEAR matching against ground truth with a 3D IoU
// gate, CLEAR counts, and recall-integrated sAMOTA / AMOTA / AMOTP.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mot3d/kitti_io.hpp"
#include "mot3d/tracker.hpp"

namespace mot3d {

inline constexpr double kDefaultEvalIou = 0.25;
inline constexpr int kDefaultRecallPoints = 40;

struct ClearCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t ids = 0;
  std::int64_t frag = 0;
  double iou_sum = 0.0;
  std::int64_t num_gt = 0;

  ClearCounts& operator+=(const ClearCounts& o);
  friend bool operator==(const ClearCounts&, const ClearCounts&) = default;
};

/// gt track id -> predicted track id, for the pairs matched in a frame.
using Correspondence = std::map<int, int>;

struct MatchedPair {
  std::size_t gt_index = 0;
  std::size_t pred_index = 0;
  double iou = 0.0;
};

struct FrameMatch {
  /// Sorted by gt index.
  std::vector<MatchedPair> matches;
  /// Indices of non-DontCare gt objects left unmatched.
  std::vector<std::size_t> unmatched_gt;
  std::vector<std::size_t> unmatched_pred;
  Correspondence correspondence;
};

/// Matches one frame. Pairs from `previous` whose members are both present
/// and still overlap by at least `min_iou` are kept first; the rest are
/// matched by maximum number of gated pairs, then maximum total IoU.
/// DontCare gt rows are ignored.
FrameMatch match_frame(std::span<const GtObject> gt,
                       std::span<const TrackReport> preds,
                       const Correspondence& previous,
                       double min_iou = kDefaultEvalIou);

/// CLEAR counts for one sequence. Predictions scoring below
/// `score_threshold` are dropped before matching.
ClearCounts accumulate_clear(const FrameMap<GtObject>& gt,
                             const FrameMap<TrackReport>& preds,
                             double min_iou = kDefaultEvalIou,
                             std::optional<double> score_threshold = {});

struct ClearMetrics {
  double mota = 0.0;  ///< may be negative
  double motp = 0.0;  ///< mean IoU of matched pairs, 0 when tp == 0
};

/// Throws std::domain_error when num_gt == 0.
ClearMetrics metrics_from_counts(const ClearCounts& counts);

struct EvalSequence {
  std::string name;
  FrameMap<GtObject> gt;
  FrameMap<TrackReport> preds;
};

struct EvalOptions {
  double min_iou = kDefaultEvalIou;
  int recall_points = kDefaultRecallPoints;
  /// Worker threads for the threshold sweep.
  int jobs = 1;
};

struct RecallPoint {
  double target_recall = 0.0;
  /// False when no threshold reaches the target; all values are then 0.
  bool reached = false;
  double threshold = 0.0;
  double achieved_recall = 0.0;
  double mota = 0.0;            ///< floored at 0
  double mota_unfloored = 0.0;
  double smota = 0.0;
  double motp = 0.0;
  ClearCounts counts;
};

struct ThresholdResult {
  /// Unset when the dataset has no predictions at all.
  std::optional<double> threshold;
  ClearCounts counts;
  ClearMetrics metrics;
};

struct IntegralMetrics {
  double samota = 0.0;
  double amota = 0.0;
  double amotp = 0.0;
  std::vector<RecallPoint> curve;
  /// Threshold with the highest MOTA; the highest threshold wins ties.
  ThresholdResult best;
  /// Number of distinct score thresholds evaluated.
  std::size_t thresholds_evaluated = 0;
};

/// Sweeps every distinct prediction score as a confidence threshold
/// (counts summed over sequences) and integrates MOTA, sMOTA and MOTP over
/// `recall_points` evenly spaced recall targets. For target r the threshold
/// with the smallest recall >= r is used (highest threshold among equal
/// recalls); sMOTA_r = clamp(1 - (fp + fn + ids - (1 - r) num_gt) /
/// (r num_gt), 0, 1). Throws std::domain_error when the ground truth is
/// empty.
IntegralMetrics sweep_thresholds(std::span<const EvalSequence> dataset,
                                 const EvalOptions& options = {});

}  // namespace mot3d
