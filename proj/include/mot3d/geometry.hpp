// Oriented 3D boxes in KITTI camera coordinates and their exact 3D IoU.
//
// Camera frame: x right, y down, z forward. A box is anchored at the center
// of its bottom face and rotated by `theta` (KITTI rotation_y) about the y
// axis. The footprint lives in the (x, z) ground plane.

#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace mot3d {

/// Wraps an angle to (-pi, pi].
double normalize_angle(double radians);

class Box3D {
 public:
  /// Throws std::invalid_argument on non-positive or non-finite fields.
  Box3D(double x, double y, double z, double l, double w, double h,
        double theta);

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double l() const { return l_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double theta() const { return theta_; }

  double volume() const { return l_ * w_ * h_; }

  friend bool operator==(const Box3D&, const Box3D&) = default;

 private:
  double x_, y_, z_;
  double l_, w_, h_;
  double theta_;
};

struct Point2 {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Convex counter-clockwise polygon in the ground plane with inline storage.
///
/// Clipping a quadrilateral by four half-planes at most doubles the vertex
/// count per pass under adversarial rounding, so 64 slots can never
/// overflow. Exact arithmetic keeps the count at 8 or below.
class Polygon2D {
 public:
  static constexpr std::size_t kCapacity = 64;

  Polygon2D() = default;
  Polygon2D(std::initializer_list<Point2> points);

  void push_back(Point2 p);
  void clear() { size_ = 0; }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point2> vertices() const { return {points_.data(), size_}; }

  /// Shoelace area; positive for counter-clockwise winding.
  double signed_area() const;

 private:
  std::array<Point2, kCapacity> points_{};
  std::size_t size_ = 0;
};

/// Footprint rectangle in the (x, z) plane, counter-clockwise. At theta = 0
/// the length runs along +x.
Polygon2D bev_corners(const Box3D& box);

/// Sutherland-Hodgman clip of convex `subject` against convex `clip`.
Polygon2D clip_convex(const Polygon2D& subject, const Polygon2D& clip);

/// Area of the intersection of two convex counter-clockwise polygons.
double convex_intersection_area(const Polygon2D& p, const Polygon2D& q);

/// Overlap of the vertical extents [y - h, y] of two boxes; 0 when disjoint
/// or touching.
double vertical_overlap(const Box3D& a, const Box3D& b);

/// Intersection volume over union volume. Symmetric bit-for-bit.
double iou3d(const Box3D& a, const Box3D& b);

}  // namespace mot3d
