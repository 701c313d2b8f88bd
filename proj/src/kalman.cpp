#include "mot3d/kalman.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

namespace mot3d {

KalmanModel KalmanModel::constant_velocity(const NoiseConfig& noise) {
  KalmanModel m;
  m.transition.setIdentity();
  m.transition(kX, kVx) = 1.0;
  m.transition(kY, kVy) = 1.0;
  m.transition(kZ, kVz) = 1.0;

  m.observation.setZero();
  for (int i = 0; i < kObsDim; ++i) m.observation(i, i) = 1.0;

  m.initial_cov = StateMatrix::Identity() * 10.0;
  for (int i = kVx; i <= kVz; ++i) m.initial_cov(i, i) *= 1000.0;
  m.initial_cov *= noise.initial_scale;

  m.process_noise.setIdentity();
  for (int i = kL; i <= kH; ++i) m.process_noise(i, i) = 0.0;
  for (int i = kVx; i <= kVz; ++i) m.process_noise(i, i) = 0.01;
  m.process_noise *= noise.process_scale;

  m.measurement_noise.setIdentity();
  m.measurement_noise *= noise.measurement_scale;
  return m;
}

KalmanTrack::KalmanTrack(const Detection& det, int id, const KalmanModel& model)
    : id_(id), cov_(model.initial_cov), score_(det.score), category_(det.category) {
  const Box3D& b = det.box;
  state_ << b.x(), b.y(), b.z(), b.theta(), b.l(), b.w(), b.h(), 0.0, 0.0, 0.0;
}

void KalmanTrack::predict(const KalmanModel& model) {
  state_ = model.transition * state_;
  state_(kTheta) = normalize_angle(state_(kTheta));
  cov_ = model.transition * cov_ * model.transition.transpose() +
         model.process_noise;
  ++time_since_update_;
}

void KalmanTrack::update(const Detection& det, const KalmanModel& model) {
  const Box3D& b = det.box;
  ObsVector z;
  z << b.x(), b.y(), b.z(), b.theta(), b.l(), b.w(), b.h();

  const ObsMatrix& H = model.observation;
  ObsVector residual = z - H * state_;
  residual(kTheta) = normalize_angle(residual(kTheta));
  if (std::abs(residual(kTheta)) > std::numbers::pi / 2.0) {
    residual(kTheta) = normalize_angle(residual(kTheta) + std::numbers::pi);
  }

  const Eigen::Matrix<double, kObsDim, kObsDim> S =
      H * cov_ * H.transpose() + model.measurement_noise;
  // K^T = S^-1 H P, since S and P are symmetric.
  const Eigen::Matrix<double, kStateDim, kObsDim> gain =
      S.ldlt().solve(H * cov_).transpose();

  state_ += gain * residual;
  state_(kTheta) = normalize_angle(state_(kTheta));

  // Joseph form keeps the covariance positive semidefinite.
  const StateMatrix a = StateMatrix::Identity() - gain * H;
  cov_ = a * cov_ * a.transpose() +
         gain * model.measurement_noise * gain.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();

  bool clamped = false;
  for (int i = kL; i <= kH; ++i) {
    if (!(state_(i) > 0.0)) {
      state_(i) = kMinBoxSize;
      clamped = true;
    }
  }
  if (clamped) ++size_clamps_;

  ++hits_;
  ++hit_streak_;
  time_since_update_ = 0;
  score_ = det.score;
}

Box3D KalmanTrack::box() const {
  return Box3D(state_(kX), state_(kY), state_(kZ), state_(kL), state_(kW),
               state_(kH), state_(kTheta));
}

}  // namespace mot3d
