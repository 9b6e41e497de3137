#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "emato/traffic.hpp"

namespace emato::scenarios {

/// Speed trace sampled at strictly increasing times starting at 0. Speed is
/// linear between samples, so distance is the exact trapezoidal integral.
class DrivingCycle {
 public:
  DrivingCycle() = default;
  /// Throws InvalidSpec on bad times or negative speeds.
  DrivingCycle(std::string name, std::vector<double> t, std::vector<double> v);

  const std::string& name() const { return name_; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& speeds() const { return v_; }
  double total_time() const { return t_.back(); }
  double total_distance() const { return dist_.back(); }

  /// Speed and distance at time t; beyond the trace the last speed is held.
  double speed_at(double t) const;
  double distance_at(double t) const;

  /// CSV with header and columns time_s plus speed_mps or speed_mph.
  static DrivingCycle from_csv(const std::filesystem::path& path, std::string name = {});
  void write_csv(std::ostream& out) const;

  /// Cycles joined end to end with `splice` seconds at zero speed between them.
  static DrivingCycle composite(const std::vector<DrivingCycle>& parts, double splice = 5.0,
                                std::string name = "composite");

  /// 765 s highway cycle with a mean speed of about 21.5 m/s.
  static DrivingCycle highway();
  /// Shorter highway cycle covering about 8 km.
  static DrivingCycle highway_short();
  /// Stop-and-go urban cycle.
  static DrivingCycle urban();
  static DrivingCycle constant(double speed, double duration);
  /// Leader cruising at `speed`, braking to a standstill at `decel` from
  /// `brake_at` seconds and then waiting.
  static DrivingCycle emergency_stop(double speed, double brake_at, double decel, double duration);
  /// Resolves highway, highway-short, urban or composite.
  static DrivingCycle by_name(const std::string& name);

 private:
  std::size_t segment(double t) const;

  std::string name_;
  std::vector<double> t_;
  std::vector<double> v_;
  std::vector<double> dist_;
};

/// Leader position and speed over n knots starting at t0, with the leader at
/// `l_offset + distance_at(t)` on the ego path. Throws CycleExhausted when
/// t0 lies beyond the cycle.
TrafficPrediction lead_prediction(const DrivingCycle& cycle, double t0, std::size_t n, double dt,
                                  double l_offset = 0.0);

}  // namespace emato::scenarios
