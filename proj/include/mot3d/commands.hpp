// The `track`, `eval` and `bench` commands behind the command-line tool.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mot3d/evaluation.hpp"

namespace mot3d {

inline constexpr const char* kToolVersion = "0.1.0";

struct SequenceRun {
  std::string name;
  int frames = 0;
  std::size_t detections = 0;
  std::size_t reports = 0;
  double tracker_seconds = 0.0;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::filesystem::path detections_dir;
  std::filesystem::path output_dir;
  std::string category;
  std::optional<std::filesystem::path> config_path;
  std::vector<SequenceRun> sequences;
  double wall_seconds = 0.0;

  int total_frames() const;
  double tracker_seconds() const;
  /// Frames per second of the tracking loop alone, file I/O excluded.
  double tracker_fps() const;
  std::string to_json() const;
};

struct TrackOptions {
  std::filesystem::path detections_dir;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> config_path;
  std::string category = "Car";
  int jobs = 1;
};

/// Tracks every NNNN.txt sequence, writing one result file per sequence and
/// `manifest.json` into the output directory. On failure every file this
/// call wrote is removed and the error is rethrown.
RunManifest run_track(const TrackOptions& options);

struct EvalCommandOptions {
  std::filesystem::path gt_dir;
  std::filesystem::path results_dir;
  std::string category = "Car";
  double min_iou = kDefaultEvalIou;
  int recall_points = kDefaultRecallPoints;
  std::optional<std::filesystem::path> csv_path;
  int jobs = 1;
};

/// Loads both directories (sequence sets must be identical), evaluates, and
/// writes the per-recall-point CSV when requested.
IntegralMetrics run_eval(const EvalCommandOptions& options);

/// sAMOTA AMOTA AMOTP MOTA MOTP IDS FRAG as a fixed-width text table.
std::string format_metrics_table(const IntegralMetrics& metrics);

/// Columns: recall_target,reached,threshold,recall,mota,mota_unfloored,
/// smota,motp,tp,fp,fn,ids; followed by one summary row.
std::string format_curve_csv(const IntegralMetrics& metrics);

struct BenchOptions {
  int frames = 1000;
  int objects = 5;
  int repetitions = 5;
  std::uint64_t seed = 0;
};

struct BenchReport {
  int frames = 0;
  int objects = 0;
  std::vector<double> fps;  // one per repetition
  double mean_fps = 0.0;
  double median_fps = 0.0;
};

/// Times the tracking loop over a synthetic scene. Throws
/// std::invalid_argument unless frames and repetitions are >= 1 and
/// objects >= 0.
BenchReport run_bench(const BenchOptions& options);

}  // namespace mot3d
