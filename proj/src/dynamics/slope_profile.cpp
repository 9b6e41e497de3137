#include "emato/dynamics/slope_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emato/error.hpp"

namespace emato::dynamics {

const char* to_string(SlopeKind kind) {
  switch (kind) {
    case SlopeKind::flat: return "flat";
    case SlopeKind::rolling: return "rolling";
    case SlopeKind::steep: return "steep";
    case SlopeKind::custom: return "custom";
  }
  return "flat";
}

SlopeKind slope_kind_from_string(const std::string& name) {
  if (name == "flat") return SlopeKind::flat;
  if (name == "rolling") return SlopeKind::rolling;
  if (name == "steep") return SlopeKind::steep;
  if (name == "custom" || name == "file") return SlopeKind::custom;
  throw InvalidSpec("unknown slope kind '" + name + "'");
}

SlopeProfile SlopeProfile::flat() { return SlopeProfile{}; }

SlopeProfile SlopeProfile::rolling(double amplitude, double wavelength) {
  return sine(SlopeKind::rolling, amplitude, wavelength);
}

SlopeProfile SlopeProfile::steep(double amplitude, double wavelength) {
  return sine(SlopeKind::steep, amplitude, wavelength);
}

SlopeProfile SlopeProfile::sine(SlopeKind kind, double amplitude, double wavelength, double phase) {
  if (kind == SlopeKind::flat) return flat();
  if (kind == SlopeKind::custom) throw InvalidSpec("custom profiles are built from samples");
  if (std::abs(amplitude) > kMaxAmplitude)
    throw InvalidSpec("slope amplitude exceeds 0.15 rad");
  if (!(wavelength > 0.0)) throw InvalidSpec("slope wavelength must be positive");
  SlopeProfile p;
  p.kind_ = kind;
  p.amplitude_ = amplitude;
  p.wavelength_ = wavelength;
  p.phase_ = phase;
  return p;
}

SlopeProfile SlopeProfile::from_samples(std::vector<double> s, std::vector<double> theta) {
  if (s.size() != theta.size() || s.size() < 2)
    throw InvalidSpec("slope table needs at least two (s, theta) rows");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw InvalidSpec("slope table s must be strictly increasing");
  }
  for (double t : theta) {
    if (!std::isfinite(t) || std::abs(t) > kMaxAmplitude)
      throw InvalidSpec("slope table grade exceeds 0.15 rad");
  }
  SlopeProfile p;
  p.kind_ = SlopeKind::custom;
  p.table_h_.assign(s.size(), 0.0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    p.table_h_[i] = p.table_h_[i - 1] + 0.5 * (theta[i] + theta[i - 1]) * (s[i] - s[i - 1]);
  }
  p.table_s_ = std::move(s);
  p.table_theta_ = std::move(theta);
  return p;
}

SlopeProfile SlopeProfile::by_name(const std::string& name) {
  switch (slope_kind_from_string(name)) {
    case SlopeKind::flat: return flat();
    case SlopeKind::rolling: return rolling();
    case SlopeKind::steep: return steep();
    case SlopeKind::custom: break;
  }
  throw InvalidSpec("slope '" + name + "' needs a sample file");
}

double SlopeProfile::grade(double s) const {
  switch (kind_) {
    case SlopeKind::flat: return 0.0;
    case SlopeKind::rolling:
    case SlopeKind::steep:
      return amplitude_ * std::sin(2.0 * std::numbers::pi * s / wavelength_ + phase_);
    case SlopeKind::custom: {
      if (s <= table_s_.front()) return table_theta_.front();
      if (s >= table_s_.back()) return table_theta_.back();
      auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
      const auto i = static_cast<std::size_t>(std::distance(table_s_.begin(), it)) - 1;
      const double f = (s - table_s_[i]) / (table_s_[i + 1] - table_s_[i]);
      return (1 - f) * table_theta_[i] + f * table_theta_[i + 1];
    }
  }
  return 0.0;
}

double SlopeProfile::elevation(double s) const {
  switch (kind_) {
    case SlopeKind::flat: return 0.0;
    case SlopeKind::rolling:
    case SlopeKind::steep: {
      const double k = 2.0 * std::numbers::pi / wavelength_;
      return amplitude_ / k * (std::cos(phase_) - std::cos(k * s + phase_));
    }
    case SlopeKind::custom: {
      if (s <= table_s_.front()) return table_theta_.front() * (s - table_s_.front());
      if (s >= table_s_.back())
        return table_h_.back() + table_theta_.back() * (s - table_s_.back());
      auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
      const auto i = static_cast<std::size_t>(std::distance(table_s_.begin(), it)) - 1;
      const double ds = s - table_s_[i];
      return table_h_[i] + 0.5 * (table_theta_[i] + grade(s)) * ds;
    }
  }
  return 0.0;
}

SlopePrediction predict_slope(const SlopeProfile& profile, std::span<const double> coords) {
  SlopePrediction out;
  out.theta.reserve(coords.size());
  for (double s : coords) out.theta.push_back(profile.grade(s));
  return out;
}

}  // namespace emato::dynamics
