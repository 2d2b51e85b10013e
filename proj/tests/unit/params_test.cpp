#include "mrhydro/params.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

namespace mrhydro {
namespace {

TEST(Params, DefaultsMatchIdentifiedLine) {
  ActuationLineParams p;
  EXPECT_EQ(p.m1, 1.0);
  EXPECT_EQ(p.b1, 210.0);
  EXPECT_EQ(p.k1, 2.76e5);
  EXPECT_EQ(p.m2, 9.65);
  EXPECT_EQ(p.b2, 98.0);
  EXPECT_EQ(p.k2, 2.76e5);
  EXPECT_EQ(p.tau, 0.010);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, CurrentGainReachesRatedTorqueAtMaxCurrent) {
  ActuationLineParams p;
  EXPECT_NEAR(p.K_I * p.I_max * kClutchPulleyRadius, kClutchTorqueRating, 1e-12);
}

TEST(Params, EmptyFileGivesDefaults) {
  Config c = parse_config("");
  EXPECT_EQ(c.line.m2, 9.65);
  ASSERT_FALSE(c.load.is_blocked());
  EXPECT_EQ(c.load.compliant().k3, 12000.0);
  EXPECT_EQ(c.load.compliant().m3, 1.87);
}

TEST(Params, NegativeMassRejected) {
  try {
    parse_config("m1 = -1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigError::Kind::Validation);
    EXPECT_NE(std::string(e.what()).find("m1"), std::string::npos);
  }
}

TEST(Params, UnknownKeyRejected) {
  try {
    parse_config("m9 = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigError::Kind::UnknownKey);
  }
}

TEST(Params, MalformedLinesRejected) {
  EXPECT_THROW(parse_config("m1 1.0\n"), ConfigError);
  EXPECT_THROW(parse_config("m1 = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("m1 = 1\nm1 = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("load.kind = rubber\n"), ConfigError);
  EXPECT_THROW(parse_config("load.kind = blocked\nload.k3 = 5\n"), ConfigError);
}

TEST(Params, CommentsAndBlockedLoad) {
  Config c = parse_config("# bench\n\nload.kind = blocked  # rigid\ntau = 0.02\n");
  EXPECT_TRUE(c.load.is_blocked());
  EXPECT_EQ(c.line.tau, 0.02);
}

TEST(Params, SaveLoadRoundTrip) {
  Config c;
  c.line.b1 = 123.456789012345;
  c.line.K_I = 1.0 / 3.0;
  c.load = LoadImpedance::compliant(2.5, 0.1, 3e4);
  Config back = parse_config(save_config(c));
  EXPECT_EQ(back.line.b1, c.line.b1);
  EXPECT_EQ(back.line.K_I, c.line.K_I);
  EXPECT_EQ(back.load, c.load);
  EXPECT_EQ(save_config(back), save_config(c));

  auto path = std::filesystem::temp_directory_path() / "mrhydro_params_test.cfg";
  {
    std::ofstream out(path);
    out << save_config(c);
  }
  EXPECT_EQ(save_config(load_config(path)), save_config(c));
  std::filesystem::remove(path);
}

TEST(Params, MissingFileIsIoError) {
  try {
    load_config("/nonexistent/mrhydro.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigError::Kind::Io);
  }
}

TEST(Params, LoadValidation) {
  EXPECT_THROW(LoadImpedance::compliant(-1, 0, 1).validate(), ConfigError);
  EXPECT_THROW(LoadImpedance::compliant(0, 0, 0).validate(), ConfigError);
  EXPECT_NO_THROW(LoadImpedance::blocked().validate());
}

double mass_oracle(double rho, double L, double A, double d) {
  return rho * L * A * A / (std::numbers::pi * d * d / 4.0);
}

TEST(Params, HydraulicMassMatchesIdentifiedValue) {
  HardwareGeometry g;
  double m = derive_hydraulic_mass(g);
  EXPECT_NEAR(m, mass_oracle(1000.0, 1.0, 826e-6, 9.5e-3), 1e-12);
  EXPECT_NEAR(m, 9.62, 0.01);
  EXPECT_LT(std::abs(m - 9.65) / 9.65, 0.05);
}

TEST(Params, HydraulicMassScaling) {
  HardwareGeometry g;
  double m = derive_hydraulic_mass(g);
  HardwareGeometry g2 = g;
  g2.hose_inner_diameter = 2 * g.hose_inner_diameter;
  EXPECT_NEAR(derive_hydraulic_mass(g2) * 4, m, 4 * m * 1e-15);
  HardwareGeometry g3 = g;
  g3.hose_length = 3 * g.hose_length;
  EXPECT_NEAR(derive_hydraulic_mass(g3), 3 * m, 3 * m * 1e-15);
}

TEST(Params, CylinderMatchingHoseGivesColumnMass) {
  HardwareGeometry g;
  g.cylinder_area = std::numbers::pi * g.hose_inner_diameter * g.hose_inner_diameter / 4;
  EXPECT_NEAR(derive_hydraulic_mass(g), g.fluid_density * g.hose_length * g.cylinder_area,
              1e-15);
}

TEST(Params, JointTorque) {
  EXPECT_EQ(joint_torque(0, 0, 0.012), 0.0);
  EXPECT_EQ(joint_torque(500, 500, 0.012), 0.0);
  EXPECT_NEAR(joint_torque(2080, 0, 0.012), 24.96, 1e-9);
  EXPECT_EQ(joint_torque(10, 30, 0.012), -joint_torque(30, 10, 0.012));
  EXPECT_THROW(joint_torque(-1, 0, 0.012), std::invalid_argument);
}

TEST(Params, JointCapacity) {
  auto check = check_joint_torque(JointSpec::elbow(), 30.0);
  EXPECT_FALSE(check.within_capacity);
  EXPECT_EQ(check.torque, 30.0);
  EXPECT_TRUE(check_joint_torque(JointSpec::shoulder(), -30.0).within_capacity);
}

}  // namespace
}  // namespace mrhydro
