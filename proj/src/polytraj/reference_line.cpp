#include "emato/polytraj/reference_line.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "emato/error.hpp"

namespace emato::polytraj {

CubicSpline::CubicSpline(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
  const std::size_t n = t_.size();
  if (n < 2 || y_.size() != n) throw InvalidSpec("spline needs at least two matching knots");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t_[i] > t_[i - 1])) throw InvalidSpec("spline knots must be strictly increasing");
  m_.assign(n, 0.0);
  if (n < 3) return;
  // Thomas algorithm on the interior second derivatives.
  std::vector<double> c(n, 0.0), r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    const double a = h0;
    const double b = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = h1 / denom;
    r[i] = (rhs - a * r[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = r[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

std::size_t CubicSpline::segment(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

double CubicSpline::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::d1(double t) const {
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3 * a * a - 1) * m_[i] + (3 * b * b - 1) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::d2(double t) const {
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

namespace {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                           0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

}  // namespace

ReferenceLine::ReferenceLine(std::vector<Vec2> waypoints, std::vector<double> lane_offsets)
    : waypoints_(std::move(waypoints)), lanes_(std::move(lane_offsets)) {
  if (waypoints_.size() < 2) throw InvalidSpec("reference line needs at least two waypoints");
  if (lanes_.empty()) lanes_.push_back(0.0);
  std::vector<double> xs, ys;
  for (const auto& p : waypoints_) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  s_.assign(1, 0.0);
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    const double ds = std::hypot(xs[i] - xs[i - 1], ys[i] - ys[i - 1]);
    if (!(ds > 1e-9)) throw InvalidSpec("reference line has repeated waypoints");
    s_.push_back(s_.back() + ds);
  }
  // Start from chord length, then re-parameterize by measured arclength.
  for (int pass = 0; pass < 4; ++pass) {
    sx_ = CubicSpline(s_, xs);
    sy_ = CubicSpline(s_, ys);
    std::vector<double> arc(1, 0.0);
    for (std::size_t i = 1; i < s_.size(); ++i) {
      const double a = s_[i - 1];
      const double b = s_[i];
      double len = 0.0;
      for (std::size_t q = 0; q < kGaussX.size(); ++q) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[q];
        len += kGaussW[q] * std::hypot(sx_.d1(t), sy_.d1(t));
      }
      arc.push_back(arc.back() + 0.5 * (b - a) * len);
    }
    s_ = std::move(arc);
  }
  sx_ = CubicSpline(s_, xs);
  sy_ = CubicSpline(s_, ys);
}

ReferenceLine ReferenceLine::straight(double length, std::vector<double> lane_offsets) {
  if (!(length > 0.0)) throw InvalidSpec("reference line length must be positive");
  return ReferenceLine({{0.0, 0.0}, {length, 0.0}}, std::move(lane_offsets));
}

ReferenceLine ReferenceLine::from_csv(const std::filesystem::path& path,
                                      std::vector<double> lane_offsets) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open waypoint file " + path.string());
  std::string line;
  std::vector<Vec2> pts;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.find_first_of("xXyY") != std::string::npos) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Vec2 p;
    if (!(ss >> p.x >> p.y)) throw InvalidSpec("bad waypoint row: " + line);
    pts.push_back(p);
  }
  return ReferenceLine(std::move(pts), std::move(lane_offsets));
}

void ReferenceLine::check_range(double s) const {
  const double tol = 1e-9 * std::max(1.0, length());
  if (!(s >= -tol && s <= length() + tol))
    throw RangeError("road coordinate " + std::to_string(s) + " outside reference line [0, " +
                     std::to_string(length()) + "]");
}

Vec2 ReferenceLine::point(double s) const { return {sx_(s), sy_(s)}; }

double ReferenceLine::heading(double s) const { return std::atan2(sy_.d1(s), sx_.d1(s)); }

double ReferenceLine::curvature(double s) const {
  const double dx = sx_.d1(s), dy = sy_.d1(s);
  const double n = std::hypot(dx, dy);
  return (dx * sy_.d2(s) - dy * sx_.d2(s)) / (n * n * n);
}

Vec2 ReferenceLine::to_global(double s, double d) const {
  check_range(s);
  const double dx = sx_.d1(s), dy = sy_.d1(s);
  const double n = std::hypot(dx, dy);
  return {sx_(s) - d * dy / n, sy_(s) + d * dx / n};
}

Vec2 ReferenceLine::to_frenet(Vec2 p) const {
  // Coarse search over a few samples per knot interval.
  double best_s = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  constexpr int kSub = 8;
  for (std::size_t i = 0; i + 1 < s_.size(); ++i) {
    for (int k = 0; k <= kSub; ++k) {
      const double s = s_[i] + (s_[i + 1] - s_[i]) * k / kSub;
      const double ex = sx_(s) - p.x, ey = sy_(s) - p.y;
      const double d2 = ex * ex + ey * ey;
      if (d2 < best_d2) {
        best_d2 = d2;
        best_s = s;
      }
    }
  }
  double s = best_s;
  for (int it = 0; it < 50; ++it) {
    const double ex = sx_(s) - p.x, ey = sy_(s) - p.y;
    const double dx = sx_.d1(s), dy = sy_.d1(s);
    const double f = ex * dx + ey * dy;
    const double df = dx * dx + dy * dy + ex * sx_.d2(s) + ey * sy_.d2(s);
    const double step = df > 1e-12 ? f / df : f;
    const double next = std::clamp(s - step, 0.0, length());
    const bool done = std::abs(next - s) < 1e-12 * std::max(1.0, length());
    s = next;
    if (done) break;
  }
  const double ex = p.x - sx_(s), ey = p.y - sy_(s);
  const double dx = sx_.d1(s), dy = sy_.d1(s);
  const double n = std::hypot(dx, dy);
  const double along = (ex * dx + ey * dy) / n;
  if ((s <= 0.0 && along < -1e-6) || (s >= length() && along > 1e-6))
    throw RangeError("point projects outside the reference line");
  return {s, (-ex * dy + ey * dx) / n};
}

std::size_t ReferenceLine::nearest_lane(double d) const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < lanes_.size(); ++i)
    if (std::abs(lanes_[i] - d) < std::abs(lanes_[best] - d)) best = i;
  return best;
}

}  // namespace emato::polytraj
