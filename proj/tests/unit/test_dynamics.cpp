#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "emato/dynamics/longitudinal.hpp"
#include "emato/dynamics/slope_profile.hpp"
#include "emato/dynamics/vehicle_params.hpp"
#include "emato/error.hpp"

using namespace emato;
using namespace emato::dynamics;

TEST(Resistance, RestOnFlatIsRolling) {
  EXPECT_NEAR(resistance_accel(0.0, 0.0, VehicleParams::sedan()), 0.14715, 1e-12);
}

TEST(Resistance, TruckAtTwenty) {
  const auto p = VehicleParams::truck();
  const double drag = 0.6 * 1.184 * 2.5 / (2.0 * 4800.0) * 400.0;
  EXPECT_NEAR(resistance_accel(20.0, 0.0, p), drag + 0.006 * 9.81, 1e-12);
  EXPECT_NEAR(resistance_accel(20.0, 0.0, p), 0.13286, 1e-5);
}

TEST(Resistance, SedanOnGrade) {
  const auto p = VehicleParams::sedan();
  EXPECT_NEAR(resistance_accel(0.0, 0.05, p), 0.6372617513624738, 1e-12);
}

TEST(Resistance, SpeedDerivative) {
  const auto p = VehicleParams::truck();
  const double h = 1e-6;
  for (double v : {0.5, 10.0, 25.0}) {
    const double fd = (resistance_accel(v + h, 0.02, p) - resistance_accel(v - h, 0.02, p)) / (2 * h);
    EXPECT_NEAR(resistance_accel_dv(v, p), fd, 1e-8);
  }
}

TEST(TractionAccel, SumsComponents) {
  EXPECT_DOUBLE_EQ(traction_accel(1.0, 0.2, 0.0), 1.2);
  EXPECT_DOUBLE_EQ(traction_accel(-0.5, 0.2, 0.0), -0.3);
  EXPECT_DOUBLE_EQ(traction_accel(-2.0, 0.2, 2.2), 0.4);
}

TEST(IntegrateState, ConstantJerkKinematics) {
  const auto r = integrate_state({0.0, 10.0, 0.0}, 1.0, 0.1);
  EXPECT_FALSE(r.clamped);
  EXPECT_NEAR(r.state.a_v, 0.1, 1e-12);
  EXPECT_NEAR(r.state.v, 10.005, 1e-12);
  EXPECT_NEAR(r.state.l, 1.0 + 0.001 / 6.0, 1e-12);
}

TEST(IntegrateState, ClampsAtStandstill) {
  const auto r = integrate_state({5.0, 0.1, -2.0}, 0.0, 0.1);
  EXPECT_TRUE(r.clamped);
  EXPECT_DOUBLE_EQ(r.state.v, 0.0);
  EXPECT_DOUBLE_EQ(r.state.a_v, 0.0);
  EXPECT_NEAR(r.state.l, 5.0 + 0.1 * 0.05 - 0.5 * 2.0 * 0.05 * 0.05, 1e-12);
}

TEST(IntegrateState, AtRestWithBrakingStaysPut) {
  const auto r = integrate_state({3.0, 0.0, -1.0}, -1.0, 0.1);
  EXPECT_TRUE(r.clamped);
  EXPECT_DOUBLE_EQ(r.state.l, 3.0);
  EXPECT_DOUBLE_EQ(r.state.v, 0.0);
}

TEST(IntegrateState, RejectsNonPositiveStep) {
  EXPECT_THROW(integrate_state({}, 0.0, 0.0), InvalidArgument);
}

TEST(IntegrateState, SpeedNeverNegativeProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uv(0.0, 5.0), ua(-5.0, 2.0), uj(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const KinState x{0.0, uv(rng), ua(rng)};
    const auto r = integrate_state(x, uj(rng), 0.1);
    EXPECT_GE(r.state.v, 0.0);
    EXPECT_GE(r.state.l, -1e-12);
  }
}

TEST(SlopeProfile, FlatIsZero) {
  const auto p = SlopeProfile::flat();
  for (double s : {0.0, 100.0, 1e5}) {
    EXPECT_DOUBLE_EQ(p.grade(s), 0.0);
    EXPECT_DOUBLE_EQ(p.elevation(s), 0.0);
  }
}

TEST(SlopeProfile, SineGradeAndElevation) {
  const auto p = SlopeProfile::rolling(0.03, 400.0);
  EXPECT_NEAR(p.grade(100.0), 0.03, 1e-12);
  EXPECT_NEAR(p.grade(0.0), 0.0, 1e-12);
  EXPECT_NEAR(p.elevation(400.0), 0.0, 1e-9);
  // Elevation is the integral of the grade.
  const double h = 1e-4;
  for (double s : {37.0, 250.0, 777.0})
    EXPECT_NEAR((p.elevation(s + h) - p.elevation(s - h)) / (2 * h), p.grade(s), 1e-7);
}

TEST(SlopeProfile, AmplitudeCap) {
  EXPECT_THROW(SlopeProfile::rolling(0.16, 400.0), InvalidSpec);
  EXPECT_NO_THROW(SlopeProfile::rolling(0.15, 400.0));
  EXPECT_THROW(SlopeProfile::from_samples({0.0, 10.0}, {0.0, 0.2}), InvalidSpec);
  EXPECT_THROW(SlopeProfile::rolling(0.03, 0.0), InvalidSpec);
}

TEST(SlopeProfile, TableInterpolation) {
  const auto p = SlopeProfile::from_samples({0.0, 100.0, 200.0}, {0.0, 0.02, 0.0});
  EXPECT_NEAR(p.grade(50.0), 0.01, 1e-12);
  EXPECT_NEAR(p.grade(500.0), 0.0, 1e-12);
  EXPECT_NEAR(p.elevation(100.0), 1.0, 1e-12);
  EXPECT_NEAR(p.elevation(200.0), 2.0, 1e-12);
}

TEST(SlopeProfile, NamesRoundTrip) {
  for (const char* n : {"flat", "rolling", "steep"})
    EXPECT_STREQ(to_string(SlopeProfile::by_name(n).kind()), n);
  EXPECT_THROW(SlopeProfile::by_name("hilly"), InvalidSpec);
  EXPECT_THROW(SlopeProfile::by_name("custom"), InvalidSpec);
}

TEST(PredictSlope, MatchesPointwiseGrade) {
  const auto p = SlopeProfile::steep();
  const std::vector<double> s{0.0, 10.0, 225.0, 900.0};
  const auto pred = predict_slope(p, s);
  ASSERT_EQ(pred.theta.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_DOUBLE_EQ(pred.theta[i], p.grade(s[i]));
}

TEST(PredictSlope, LipschitzInCoordinate) {
  for (const auto& p : {SlopeProfile::rolling(), SlopeProfile::steep()}) {
    const double lip = 2.0 * 3.14159265358979 * p.amplitude() / p.wavelength();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> us(0.0, 5000.0);
    for (int i = 0; i < 500; ++i) {
      const double a = us(rng), b = us(rng);
      EXPECT_LE(std::abs(p.grade(a) - p.grade(b)), lip * std::abs(a - b) + 1e-12);
    }
  }
}

TEST(VehicleParams, ValidateAndLookup) {
  EXPECT_NO_THROW(VehicleParams::truck().validate());
  EXPECT_EQ(VehicleParams::by_name("sedan").mass, 1200.0);
  EXPECT_THROW(VehicleParams::by_name("bus"), InvalidSpec);
  auto p = VehicleParams::sedan();
  p.mass = -1.0;
  EXPECT_THROW(p.validate(), InvalidSpec);
}
