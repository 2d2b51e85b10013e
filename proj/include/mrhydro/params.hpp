#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace mrhydro {

/// Raised for malformed config lines, unknown keys and violated invariants.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Parse, UnknownKey, Validation, Io };

  ConfigError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Hardware constants of the one-DOF test bench.
inline constexpr double kMasterArea = 826e-6;        // m^2
inline constexpr double kSlaveArea = 671e-6;         // m^2
inline constexpr double kHoseInnerDiameter = 9.5e-3; // m
inline constexpr double kClutchTorqueRating = 4.0;   // N*m
inline constexpr double kClutchPulleyRadius = 6e-3;  // m (12 mm pulley)
inline constexpr double kMaxCurrent = 3.5;           // A
inline constexpr double kMembranePressureRating = 3.1e6;  // Pa

/// Current-to-force gain at which the rated clutch torque is reached at the
/// maximum current.
inline constexpr double kDefaultCurrentGain =
    kClutchTorqueRating / kClutchPulleyRadius / kMaxCurrent;

/// Lumped parameters of one actuation line, all reflected to linear motion
/// at the output. Defaults are the identified line parameters.
struct ActuationLineParams {
  double m1 = 1.0;      // kg, clutch rotor + master piston
  double b1 = 210.0;    // N*s/m
  double k1 = 2.76e5;   // N/m, power-unit transmission
  double m2 = 9.65;     // kg, hydraulic fluid
  double b2 = 98.0;     // N*s/m
  double k2 = 2.76e5;   // N/m, hydraulic
  double tau = 0.010;   // s, clutch magnetic lag
  double K_I = kDefaultCurrentGain;  // N/A
  double A_master = kMasterArea;
  double A_slave = kSlaveArea;
  double I_min = 0.0;
  double I_max = kMaxCurrent;

  /// Throws ConfigError(Validation) naming the first violated invariant.
  void validate() const;

  /// Converts a force-equivalent line pressure (N at the master piston) to Pa.
  double pressure_pa(double force_equivalent) const {
    return force_equivalent / A_master;
  }
};

struct BlockedLoad {
  bool operator==(const BlockedLoad&) const = default;
};

struct CompliantLoad {
  double m3 = 1.87;     // kg
  double b3 = 20.0;     // N*s/m
  double k3 = 12000.0;  // N/m
  bool operator==(const CompliantLoad&) const = default;
};

/// External load impedance Z3(s) = m3 s^2 + b3 s + k3, or a rigid block.
class LoadImpedance {
 public:
  LoadImpedance() : value_(CompliantLoad{}) {}

  static LoadImpedance blocked() { return LoadImpedance(BlockedLoad{}); }
  static LoadImpedance compliant(double m3, double b3, double k3);
  /// The mass-spring-damper load of the test bench.
  static LoadImpedance bench() { return LoadImpedance(CompliantLoad{}); }

  bool is_blocked() const {
    return std::holds_alternative<BlockedLoad>(value_);
  }
  /// Precondition: !is_blocked().
  const CompliantLoad& compliant() const {
    return std::get<CompliantLoad>(value_);
  }

  void validate() const;
  std::string describe() const;

  bool operator==(const LoadImpedance&) const = default;

 private:
  explicit LoadImpedance(std::variant<BlockedLoad, CompliantLoad> v)
      : value_(v) {}

  std::variant<BlockedLoad, CompliantLoad> value_;
};

struct HardwareGeometry {
  double hose_length = 1.0;                     // m
  double hose_inner_diameter = kHoseInnerDiameter;
  double fluid_density = 1000.0;                // kg/m^3, tap water
  double cylinder_area = kMasterArea;           // m^2
  double pulley_radius = kClutchPulleyRadius;   // m
  double clutch_torque_rating = kClutchTorqueRating;

  void validate() const;
};

struct JointSpec {
  double torque_capacity = 39.0;  // N*m
  double rom_min = 0.0;           // deg
  double rom_max = 115.0;         // deg

  void validate() const;

  static JointSpec shoulder() { return {39.0, 0.0, 115.0}; }
  static JointSpec elbow() { return {25.0, 0.0, 180.0}; }
};

struct Config {
  ActuationLineParams line;
  LoadImpedance load;
  HardwareGeometry geometry;

  void validate() const {
    line.validate();
    load.validate();
    geometry.validate();
  }
};

/// Parses the flat `key = value` format. Keys not present keep their
/// defaults; unknown or duplicated keys are rejected.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Canonical text form: every key, fixed order, shortest round-trip numbers.
std::string save_config(const Config& config);

/// Fluid mass reflected at the cylinder: rho * L * A_cyl^2 / A_hose.
double derive_hydraulic_mass(const HardwareGeometry& geometry);

/// Net torque of an antagonist pull-only cylinder pair on a pulley of
/// radius r. Throws std::invalid_argument on a negative cable force.
double joint_torque(double force_a, double force_b, double radius);

struct TorqueCheck {
  double torque = 0.0;
  bool within_capacity = true;
};

/// Reports whether |torque| exceeds the joint rating; the torque itself is
/// passed through unchanged.
TorqueCheck check_joint_torque(const JointSpec& joint, double torque);

}  // namespace mrhydro
