#include "mot3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace mot3d {

double normalize_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (radians > -std::numbers::pi && radians <= std::numbers::pi) return radians;
  double a = std::fmod(radians + std::numbers::pi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

Box3D::Box3D(double x, double y, double z, double l, double w, double h,
             double theta)
    : x_(x), y_(y), z_(z), l_(l), w_(w), h_(h), theta_(theta) {
  for (double v : {x, y, z, l, w, h, theta}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Box3D: non-finite field");
    }
  }
  if (!(l > 0.0 && w > 0.0 && h > 0.0)) {
    throw std::invalid_argument("Box3D: dimensions must be positive (l=" +
                                std::to_string(l) + ", w=" + std::to_string(w) +
                                ", h=" + std::to_string(h) + ")");
  }
  theta_ = normalize_angle(theta);
}

Polygon2D::Polygon2D(std::initializer_list<Point2> points) {
  for (const Point2& p : points) push_back(p);
}

void Polygon2D::push_back(Point2 p) {
  if (size_ == kCapacity) {
    throw std::length_error("Polygon2D capacity exceeded");
  }
  points_[size_++] = p;
}

double Polygon2D::signed_area() const {
  if (size_ < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    const Point2& a = points_[i];
    const Point2& b = points_[(i + 1) % size_];
    twice += a.u * b.v - b.u * a.v;
  }
  return 0.5 * twice;
}

Polygon2D bev_corners(const Box3D& box) {
  // Rotation about +y maps local (lx, lz) to (c*lx + s*lz, -s*lx + c*lz);
  // the map has determinant +1 in the (x, z) plane, so winding is kept.
  const double c = std::cos(box.theta());
  const double s = std::sin(box.theta());
  const double hl = 0.5 * box.l();
  const double hw = 0.5 * box.w();
  const std::array<Point2, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
  Polygon2D out;
  for (const Point2& p : local) {
    out.push_back({box.x() + c * p.u + s * p.v, box.z() - s * p.u + c * p.v});
  }
  return out;
}

namespace {

double cross(const Point2& a, const Point2& b, const Point2& p) {
  return (b.u - a.u) * (p.v - a.v) - (b.v - a.v) * (p.u - a.u);
}

}  // namespace

Polygon2D clip_convex(const Polygon2D& subject, const Polygon2D& clip) {
  if (subject.size() < 3 || clip.size() < 3) return {};
  Polygon2D current = subject;
  Polygon2D next;
  for (std::size_t e = 0; e < clip.size(); ++e) {
    const Point2& a = clip[e];
    const Point2& b = clip[(e + 1) % clip.size()];
    next.clear();
    const std::size_t n = current.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& prev = current[(i + n - 1) % n];
      const Point2& cur = current[i];
      const double dp = cross(a, b, prev);
      const double dc = cross(a, b, cur);
      const bool prev_in = dp >= 0.0;
      const bool cur_in = dc >= 0.0;
      if (prev_in != cur_in) {
        const double t = dp / (dp - dc);
        next.push_back({prev.u + t * (cur.u - prev.u),
                        prev.v + t * (cur.v - prev.v)});
      }
      if (cur_in) next.push_back(cur);
    }
    std::swap(current, next);
    if (current.size() < 3) return {};
  }
  return current;
}

double convex_intersection_area(const Polygon2D& p, const Polygon2D& q) {
  return std::max(0.0, clip_convex(p, q).signed_area());
}

double vertical_overlap(const Box3D& a, const Box3D& b) {
  const double top = std::max(a.y() - a.h(), b.y() - b.h());
  const double bottom = std::min(a.y(), b.y());
  return std::max(0.0, bottom - top);
}

namespace {

auto key(const Box3D& b) {
  return std::make_tuple(b.x(), b.y(), b.z(), b.l(), b.w(), b.h(), b.theta());
}

}  // namespace

double iou3d(const Box3D& a, const Box3D& b) {
  // Fixed argument order so that iou3d(a, b) and iou3d(b, a) run the same
  // floating-point operations.
  const Box3D& first = key(b) < key(a) ? b : a;
  const Box3D& second = &first == &a ? b : a;
  if (first == second) return 1.0;

  const double dy = vertical_overlap(first, second);
  if (dy <= 0.0) return 0.0;
  const double area =
      convex_intersection_area(bev_corners(first), bev_corners(second));
  if (area <= 0.0) return 0.0;
  const double inter = area * dy;
  const double uni = first.volume() + second.volume() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace mot3d
