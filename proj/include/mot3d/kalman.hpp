// Constant-velocity Kalman filter over a 10-dimensional 3D box state.
//
// State layout: [x, y, z, theta, l, w, h, vx, vy, vz], velocities in meters
// per frame. The first seven components are observed directly.

#pragma once

#include <Eigen/Core>
#include <string>

#include "mot3d/detection.hpp"

namespace mot3d {

inline constexpr int kStateDim = 10;
inline constexpr int kObsDim = 7;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;
using ObsVector = Eigen::Matrix<double, kObsDim, 1>;
using ObsMatrix = Eigen::Matrix<double, kObsDim, kStateDim>;

enum StateIndex : int { kX = 0, kY, kZ, kTheta, kL, kW, kH, kVx, kVy, kVz };

/// Smallest size a box dimension is allowed to take after an update.
inline constexpr double kMinBoxSize = 0.01;

/// Multipliers applied to the default noise matrices. With all ones:
///   P0 = 10 I with the velocity diagonal scaled by 1000,
///   Q  = I with the velocity diagonal at 0.01 and no noise on l, w, h,
///   R  = I.
struct NoiseConfig {
  double initial_scale = 1.0;
  double process_scale = 1.0;
  double measurement_scale = 1.0;
};

struct KalmanModel {
  StateMatrix transition;       // F
  ObsMatrix observation;        // H
  StateMatrix initial_cov;      // P0
  StateMatrix process_noise;    // Q
  Eigen::Matrix<double, kObsDim, kObsDim> measurement_noise;  // R

  static KalmanModel constant_velocity(const NoiseConfig& noise = {});
};

class KalmanTrack {
 public:
  /// Positions, size and heading copied from the detection, zero velocity.
  KalmanTrack(const Detection& det, int id, const KalmanModel& model);

  /// One-frame constant-velocity step.
  void predict(const KalmanModel& model);

  /// Kalman correction with the detection's box. A heading residual larger
  /// than pi/2 after wrapping is treated as a detector heading flip: the
  /// detection heading is turned by pi before correcting.
  void update(const Detection& det, const KalmanModel& model);

  /// Ends a frame in which the track received no detection.
  void mark_missed() { hit_streak_ = 0; }

  /// Current box estimate.
  Box3D box() const;

  int id() const { return id_; }
  const StateVector& state() const { return state_; }
  const StateMatrix& covariance() const { return cov_; }
  int hits() const { return hits_; }
  int hit_streak() const { return hit_streak_; }
  int time_since_update() const { return time_since_update_; }
  double score() const { return score_; }
  const std::string& category() const { return category_; }
  /// Number of updates that had to clamp a non-positive size.
  int size_clamps() const { return size_clamps_; }

 private:
  int id_;
  StateVector state_;
  StateMatrix cov_;
  int hits_ = 1;
  int hit_streak_ = 1;
  int time_since_update_ = 0;
  double score_;
  std::string category_;
  int size_clamps_ = 0;
};

}  // namespace mot3d
