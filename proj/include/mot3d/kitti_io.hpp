// KITTI-style text formats. Fields are whitespace separated; see FORMATS.md
// for the column contracts.
//
//   detections: frame type truncated occluded alpha x1 y1 x2 y2
//               h w l x y z rotation_y score                      (17 fields)
//   labels:     frame id type truncated occluded alpha x1 y1 x2 y2
//               h w l x y z rotation_y                            (17 fields)
//   results:    labels layout followed by score                   (18 fields)

#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mot3d/detection.hpp"
#include "mot3d/tracker.hpp"

namespace mot3d {

/// Ground-truth label row. DontCare rows keep their raw numbers but carry
/// no box and never take part in matching.
struct GtObject {
  int frame = 0;
  int track_id = 0;
  std::string category;
  double truncated = 0.0;
  int occluded = 0;
  double alpha = 0.0;
  std::array<double, 4> bbox2d{};
  /// h, w, l, x, y, z, rotation_y exactly as read.
  std::array<double, 7> raw_3d{};
  std::optional<Box3D> box;

  bool dont_care() const { return !box.has_value(); }
};

/// Placeholder values written for fields the tracker does not estimate.
inline constexpr int kUnsetTruncated = -1;
inline constexpr int kUnsetOccluded = -1;
inline constexpr double kUnsetAlpha = -10.0;
inline constexpr double kUnsetBbox = -1.0;

/// Case-insensitive category match; an empty filter accepts everything.
bool category_matches(const std::string& category, const std::string& filter);

/// Rows whose type does not match `category` are skipped. Row order within
/// a frame is preserved. Malformed rows throw ParseError.
FrameMap<Detection> parse_detections(std::istream& in, const std::string& source,
                                     const std::string& category = "");
FrameMap<Detection> read_detections(const std::filesystem::path& path,
                                    const std::string& category = "");

/// DontCare rows are always kept, whatever the category filter.
FrameMap<GtObject> parse_gt_labels(std::istream& in, const std::string& source,
                                   const std::string& category = "");
FrameMap<GtObject> read_gt_labels(const std::filesystem::path& path,
                                  const std::string& category = "");

FrameMap<TrackReport> parse_tracking_results(std::istream& in,
                                             const std::string& source,
                                             const std::string& category = "");
FrameMap<TrackReport> read_tracking_results(const std::filesystem::path& path,
                                            const std::string& category = "");

/// One result row without the trailing newline. Numbers use the shortest
/// representation that parses back to the same double.
std::string format_result_row(const TrackReport& report);

/// Reports must be sorted by (frame, id); throws std::invalid_argument
/// otherwise and std::runtime_error if the file cannot be written. An empty
/// list produces an empty file.
void write_tracking_results(const std::vector<TrackReport>& reports,
                            const std::filesystem::path& path);

/// Files named NNNN.txt in `dir`, keyed by the four-digit sequence name.
std::map<std::string, std::filesystem::path> list_sequences(
    const std::filesystem::path& dir);

}  // namespace mot3d
