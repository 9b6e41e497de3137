#pragma once

#include <array>
#include <span>
#include <vector>

#include "emato/dynamics/longitudinal.hpp"

namespace emato::polytraj {

/// Position, velocity and acceleration of one coordinate.
struct BoundaryState {
  double p = 0.0;
  double dp = 0.0;
  double ddp = 0.0;
};

/// p(t) = sum_i c_i t^i on [0, duration].
class QuinticSegment {
 public:
  QuinticSegment() = default;
  QuinticSegment(std::array<double, 6> coeffs, double duration)
      : c_(coeffs), duration_(duration) {}

  const std::array<double, 6>& coeffs() const { return c_; }
  double duration() const { return duration_; }

  double pos(double t) const;
  double vel(double t) const;
  double acc(double t) const;
  double jerk(double t) const;
  BoundaryState state(double t) const { return {pos(t), vel(t), acc(t)}; }

 private:
  std::array<double, 6> c_{};
  double duration_ = 0.0;
};

/// The unique quintic through both boundary states. Throws InvalidArgument
/// for a non-positive duration.
QuinticSegment quintic_fit(const BoundaryState& start, const BoundaryState& end, double duration);

/// One end-state sample for 1D candidate generation.
struct EndSample {
  double l = 0.0;
  double v = 0.0;
  double a = 0.0;
};

/// One quintic per end sample, in grid order.
std::vector<QuinticSegment> sample_1d_candidates(const dynamics::KinState& start,
                                                 std::span<const EndSample> grid,
                                                 double duration);

/// End samples for a list of terminal speeds with zero terminal
/// acceleration; each end position assumes the average of start and end
/// speed over the duration.
std::vector<EndSample> speed_end_grid(const dynamics::KinState& start,
                                      std::span<const double> end_speeds, double duration);

/// Speeds center + offsets, clamped to [lo, hi], duplicates removed, order kept.
std::vector<double> speed_samples(double center, std::span<const double> offsets, double lo,
                                  double hi);

}  // namespace emato::polytraj
