#pragma once

#include <filesystem>
#include <vector>

namespace emato::polytraj {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Natural cubic spline y(t) over strictly increasing knots.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> t, std::vector<double> y);

  double operator()(double t) const;
  double d1(double t) const;
  double d2(double t) const;

 private:
  std::size_t segment(double t) const;

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
};

/// A smooth planar curve parameterized by arclength s, with lane centers
/// given as lateral offsets d.
class ReferenceLine {
 public:
  /// Throws InvalidSpec for fewer than two waypoints or repeated points.
  explicit ReferenceLine(std::vector<Vec2> waypoints, std::vector<double> lane_offsets = {0.0});

  static ReferenceLine straight(double length, std::vector<double> lane_offsets = {0.0});
  /// Waypoint CSV with header and columns x, y.
  static ReferenceLine from_csv(const std::filesystem::path& path,
                                std::vector<double> lane_offsets = {0.0});

  double length() const { return s_.back(); }
  const std::vector<double>& lane_offsets() const { return lanes_; }
  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  const std::vector<double>& knot_arclength() const { return s_; }

  Vec2 point(double s) const;
  double heading(double s) const;
  double curvature(double s) const;

  /// ref(s) + d * normal(s). Throws RangeError when s is outside [0, length].
  Vec2 to_global(double s, double d) const;
  /// Orthogonal projection; returns (s, d). Throws RangeError if the foot
  /// point falls outside the line.
  Vec2 to_frenet(Vec2 p) const;

  /// Index of the lane whose center is closest to d.
  std::size_t nearest_lane(double d) const;

 private:
  void check_range(double s) const;

  std::vector<Vec2> waypoints_;
  std::vector<double> lanes_;
  std::vector<double> s_;
  CubicSpline sx_;
  CubicSpline sy_;
};

}  // namespace emato::polytraj
