#include "emato/polytraj/quintic.hpp"

#include <algorithm>
#include <cmath>

#include "emato/error.hpp"

namespace emato::polytraj {

double QuinticSegment::pos(double t) const {
  return c_[0] + t * (c_[1] + t * (c_[2] + t * (c_[3] + t * (c_[4] + t * c_[5]))));
}

double QuinticSegment::vel(double t) const {
  return c_[1] + t * (2 * c_[2] + t * (3 * c_[3] + t * (4 * c_[4] + t * 5 * c_[5])));
}

double QuinticSegment::acc(double t) const {
  return 2 * c_[2] + t * (6 * c_[3] + t * (12 * c_[4] + t * 20 * c_[5]));
}

double QuinticSegment::jerk(double t) const {
  return 6 * c_[3] + t * (24 * c_[4] + t * 60 * c_[5]);
}

QuinticSegment quintic_fit(const BoundaryState& s, const BoundaryState& e, double T) {
  if (!(T > 0.0)) throw InvalidArgument("quintic_fit: duration must be positive");
  const double c0 = s.p;
  const double c1 = s.dp;
  const double c2 = 0.5 * s.ddp;
  const double T2 = T * T;
  const double T3 = T2 * T;
  // Residual end conditions after the start terms.
  const double rp = e.p - (c0 + c1 * T + c2 * T2);
  const double rv = e.dp - (c1 + 2 * c2 * T);
  const double ra = e.ddp - 2 * c2;
  const double c3 = (10 * rp - 4 * rv * T + 0.5 * ra * T2) / T3;
  const double c4 = (-15 * rp + 7 * rv * T - ra * T2) / (T3 * T);
  const double c5 = (6 * rp - 3 * rv * T + 0.5 * ra * T2) / (T3 * T2);
  return QuinticSegment({c0, c1, c2, c3, c4, c5}, T);
}

std::vector<QuinticSegment> sample_1d_candidates(const dynamics::KinState& start,
                                                 std::span<const EndSample> grid,
                                                 double duration) {
  std::vector<QuinticSegment> out;
  out.reserve(grid.size());
  const BoundaryState s{start.l, start.v, start.a_v};
  for (const auto& g : grid) out.push_back(quintic_fit(s, {g.l, g.v, g.a}, duration));
  return out;
}

std::vector<EndSample> speed_end_grid(const dynamics::KinState& start,
                                      std::span<const double> end_speeds, double duration) {
  std::vector<EndSample> out;
  out.reserve(end_speeds.size());
  for (double v : end_speeds) {
    out.push_back({start.l + 0.5 * (start.v + v) * duration, v, 0.0});
  }
  return out;
}

std::vector<double> speed_samples(double center, std::span<const double> offsets, double lo,
                                  double hi) {
  std::vector<double> out;
  for (double off : offsets) {
    const double v = std::clamp(center + off, lo, hi);
    if (std::none_of(out.begin(), out.end(), [&](double u) { return std::abs(u - v) < 1e-9; }))
      out.push_back(v);
  }
  return out;
}

}  // namespace emato::polytraj
