// Tracker configuration files: one `key = value` pair per line, `#` starts
// a comment. Every key is optional.
//
//   iou_gate  minimum association IoU                 (0.1)
//   max_age   frames a track may coast                (2)
//   min_hits  consecutive matches before reporting    (3)
//   p0_scale  multiplier on the initial covariance    (1)
//   q_scale   multiplier on the process noise         (1)
//   r_scale   multiplier on the measurement noise     (1)

#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "mot3d/tracker.hpp"

namespace mot3d {

TrackerConfig parse_tracker_config(std::istream& in,
                                   const std::string& source = "<config>");

/// Throws std::runtime_error if the file cannot be opened and ParseError on
/// unknown keys, bad values, or duplicate keys.
TrackerConfig load_tracker_config(const std::filesystem::path& path);

}  // namespace mot3d
