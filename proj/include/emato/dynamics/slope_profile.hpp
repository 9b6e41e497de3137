#pragma once

#include <span>
#include <string>
#include <vector>

namespace emato::dynamics {

enum class SlopeKind { flat, rolling, steep, custom };

const char* to_string(SlopeKind kind);
SlopeKind slope_kind_from_string(const std::string& name);

/// Road grade theta(s) in radians along a road or path coordinate s (m).
///
/// Shipped profiles are sinusoids theta(s) = A sin(2 pi s / lambda + phase);
/// custom profiles are piecewise-linear tables. Elevation is the integral of
/// theta (small-angle tan(theta) ~ theta).
class SlopeProfile {
 public:
  static constexpr double kMaxAmplitude = 0.15;

  SlopeProfile() = default;

  static SlopeProfile flat();
  static SlopeProfile rolling(double amplitude = 0.03, double wavelength = 400.0);
  static SlopeProfile steep(double amplitude = 0.08, double wavelength = 900.0);
  /// Sine-shaped profile of the given kind. Rejects |A| > 0.15 rad and
  /// non-positive wavelengths.
  static SlopeProfile sine(SlopeKind kind, double amplitude, double wavelength, double phase = 0.0);
  /// Piecewise-linear grade table; s must be strictly increasing. Grade is
  /// held constant outside the table.
  static SlopeProfile from_samples(std::vector<double> s, std::vector<double> theta);
  /// Resolves flat/rolling/steep to the shipped defaults.
  static SlopeProfile by_name(const std::string& name);

  SlopeKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double wavelength() const { return wavelength_; }
  double phase() const { return phase_; }
  const std::vector<double>& table_s() const { return table_s_; }
  const std::vector<double>& table_theta() const { return table_theta_; }

  double grade(double s) const;
  double elevation(double s) const;

 private:
  SlopeKind kind_ = SlopeKind::flat;
  double amplitude_ = 0.0;
  double wavelength_ = 1.0;
  double phase_ = 0.0;
  std::vector<double> table_s_;
  std::vector<double> table_theta_;
  std::vector<double> table_h_;  // cumulative trapezoid elevation at table nodes
};

/// Per-knot grade predicted for one solve; frozen for the whole solve.
struct SlopePrediction {
  std::vector<double> theta;
};

SlopePrediction predict_slope(const SlopeProfile& profile, std::span<const double> coords);

}  // namespace emato::dynamics
