#include "mrhydro/params.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "mrhydro/format.hpp"

namespace mrhydro {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(ConfigError::Kind::Validation, message);
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

using LineField = double ActuationLineParams::*;

const std::map<std::string_view, LineField>& line_fields() {
  static const std::map<std::string_view, LineField> fields = {
      {"m1", &ActuationLineParams::m1},
      {"b1", &ActuationLineParams::b1},
      {"k1", &ActuationLineParams::k1},
      {"m2", &ActuationLineParams::m2},
      {"b2", &ActuationLineParams::b2},
      {"k2", &ActuationLineParams::k2},
      {"tau", &ActuationLineParams::tau},
      {"K_I", &ActuationLineParams::K_I},
      {"A_master", &ActuationLineParams::A_master},
      {"A_slave", &ActuationLineParams::A_slave},
      {"I_min", &ActuationLineParams::I_min},
      {"I_max", &ActuationLineParams::I_max},
  };
  return fields;
}

// Canonical key order for save_config.
constexpr std::string_view kLineKeyOrder[] = {
    "m1", "b1", "k1", "m2", "b2", "k2", "tau",
    "K_I", "A_master", "A_slave", "I_min", "I_max"};

}  // namespace

void ActuationLineParams::validate() const {
  for (const auto& [name, field] : line_fields()) {
    require(std::isfinite(this->*field), std::string(name) + " must be finite");
  }
  require(m1 > 0, "m1 must be > 0");
  require(m2 > 0, "m2 must be > 0");
  require(k1 > 0, "k1 must be > 0");
  require(k2 > 0, "k2 must be > 0");
  require(b1 >= 0, "b1 must be >= 0");
  require(b2 >= 0, "b2 must be >= 0");
  require(tau > 0, "tau must be > 0");
  require(K_I > 0, "K_I must be > 0");
  require(A_master > 0, "A_master must be > 0");
  require(A_slave > 0, "A_slave must be > 0");
  require(I_min >= 0, "I_min must be >= 0");
  require(I_min < I_max, "I_min must be < I_max");
}

LoadImpedance LoadImpedance::compliant(double m3, double b3, double k3) {
  LoadImpedance z(CompliantLoad{m3, b3, k3});
  z.validate();
  return z;
}

void LoadImpedance::validate() const {
  if (is_blocked()) return;
  const auto& c = compliant();
  require(std::isfinite(c.m3) && std::isfinite(c.b3) && std::isfinite(c.k3),
          "load parameters must be finite");
  require(c.m3 > 0, "load.m3 must be > 0");
  require(c.b3 >= 0, "load.b3 must be >= 0");
  require(c.k3 >= 0, "load.k3 must be >= 0");
}

std::string LoadImpedance::describe() const {
  if (is_blocked()) return "blocked";
  const auto& c = compliant();
  return "compliant(m3=" + format_shortest(c.m3) + ", b3=" +
         format_shortest(c.b3) + ", k3=" + format_shortest(c.k3) + ")";
}

void HardwareGeometry::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0; };
  require(positive(hose_length), "hose.length must be > 0");
  require(positive(hose_inner_diameter), "hose.diameter must be > 0");
  require(positive(fluid_density), "fluid.density must be > 0");
  require(positive(cylinder_area), "cylinder area must be > 0");
  require(positive(pulley_radius), "pulley.radius must be > 0");
  require(positive(clutch_torque_rating), "clutch torque rating must be > 0");
}

void JointSpec::validate() const {
  require(torque_capacity > 0, "joint torque capacity must be > 0");
  require(rom_min < rom_max, "joint range of motion must satisfy min < max");
}

Config parse_config(std::string_view text) {
  Config config;
  std::set<std::string, std::less<>> seen;
  std::optional<std::string> load_kind;
  std::optional<double> m3, b3, k3;

  using GeometryField = double HardwareGeometry::*;
  const std::map<std::string_view, GeometryField> geometry_fields = {
      {"hose.length", &HardwareGeometry::hose_length},
      {"hose.diameter", &HardwareGeometry::hose_inner_diameter},
      {"fluid.density", &HardwareGeometry::fluid_density},
      {"pulley.radius", &HardwareGeometry::pulley_radius},
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ConfigError::Kind::Parse,
                        where + "expected `key = value`");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(ConfigError::Kind::Parse,
                        where + "expected `key = value`");
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(ConfigError::Kind::Parse,
                        where + "duplicate key `" + std::string(key) + "`");
    }

    if (key == "load.kind") {
      if (value != "blocked" && value != "compliant") {
        throw ConfigError(ConfigError::Kind::Parse,
                          where + "load.kind must be `blocked` or `compliant`");
      }
      load_kind = std::string(value);
      continue;
    }

    const bool known = line_fields().contains(key) ||
                       geometry_fields.contains(key) || key == "load.m3" ||
                       key == "load.b3" || key == "load.k3";
    if (!known) {
      throw ConfigError(ConfigError::Kind::UnknownKey,
                        where + "unknown key `" + std::string(key) + "`");
    }
    double number = 0.0;
    if (!parse_double(value, number)) {
      throw ConfigError(ConfigError::Kind::Parse,
                        where + "`" + std::string(value) +
                            "` is not a finite number");
    }
    if (auto it = line_fields().find(key); it != line_fields().end()) {
      config.line.*(it->second) = number;
    } else if (auto g = geometry_fields.find(key);
               g != geometry_fields.end()) {
      config.geometry.*(g->second) = number;
    } else if (key == "load.m3") {
      m3 = number;
    } else if (key == "load.b3") {
      b3 = number;
    } else {
      k3 = number;
    }
  }

  const bool has_load_values = m3 || b3 || k3;
  if (load_kind == "blocked") {
    if (has_load_values) {
      throw ConfigError(ConfigError::Kind::Validation,
                        "load.m3/b3/k3 given for a blocked load");
    }
    config.load = LoadImpedance::blocked();
  } else {
    const CompliantLoad defaults;
    config.load = LoadImpedance::compliant(m3.value_or(defaults.m3),
                                           b3.value_or(defaults.b3),
                                           k3.value_or(defaults.k3));
  }
  // The reflected fluid mass is referred to the master piston.
  config.geometry.cylinder_area = config.line.A_master;
  config.validate();
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(ConfigError::Kind::Io,
                      "cannot open config file `" + path.string() + "`");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string save_config(const Config& config) {
  std::string out;
  auto put = [&out](std::string_view key, double v) {
    out.append(key).append(" = ").append(format_shortest(v)).append("\n");
  };
  for (auto key : kLineKeyOrder) put(key, config.line.*(line_fields().at(key)));
  if (config.load.is_blocked()) {
    out.append("load.kind = blocked\n");
  } else {
    const auto& c = config.load.compliant();
    out.append("load.kind = compliant\n");
    put("load.m3", c.m3);
    put("load.b3", c.b3);
    put("load.k3", c.k3);
  }
  put("hose.length", config.geometry.hose_length);
  put("hose.diameter", config.geometry.hose_inner_diameter);
  put("fluid.density", config.geometry.fluid_density);
  put("pulley.radius", config.geometry.pulley_radius);
  return out;
}

double derive_hydraulic_mass(const HardwareGeometry& geometry) {
  geometry.validate();
  const double d = geometry.hose_inner_diameter;
  const double hose_area = std::numbers::pi * d * d / 4.0;
  const double a = geometry.cylinder_area;
  return geometry.fluid_density * geometry.hose_length * (a * a) / hose_area;
}

double joint_torque(double force_a, double force_b, double radius) {
  if (!(force_a >= 0) || !(force_b >= 0)) {
    throw std::invalid_argument("cable forces must be >= 0 (cables only pull)");
  }
  if (!(radius > 0)) throw std::invalid_argument("pulley radius must be > 0");
  return (force_a - force_b) * radius;
}

TorqueCheck check_joint_torque(const JointSpec& joint, double torque) {
  joint.validate();
  return {torque, std::abs(torque) <= joint.torque_capacity};
}

}  // namespace mrhydro
