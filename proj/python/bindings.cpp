#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mrhydro/analysis.hpp"
#include "mrhydro/frf.hpp"
#include "mrhydro/line_model.hpp"
#include "mrhydro/params.hpp"
#include "mrhydro/roots.hpp"
#include "mrhydro/scenarios.hpp"
#include "mrhydro/simulation.hpp"
#include "mrhydro/tuning.hpp"

namespace py = pybind11;
using namespace mrhydro;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict sim_dict(const SimResult& r) {
  py::dict d;
  d["time"] = to_array(r.time);
  d["reference"] = to_array(r.reference);
  d["current"] = to_array(r.current);
  d["f_mr"] = to_array(r.f_mr);
  d["pressure"] = to_array(r.pressure);
  d["force"] = to_array(r.force);
  d["disturbance"] = to_array(r.disturbance);
  d["controller"] = r.controller;
  d["signal"] = r.signal;
  d["params_hash"] = r.params_hash;
  return d;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["rise_time_10_90"] = m.rise_time_10_90;
  d["rms_tracking_error"] = m.rms_tracking_error;
  d["overshoot"] = m.overshoot;
  d["oscillation_index"] = m.oscillation_index;
  d["step_time"] = m.step_time;
  return d;
}

Channel parse_channel(const std::string& name) {
  if (name == "force") return Channel::Force;
  if (name == "pressure") return Channel::Pressure;
  throw std::invalid_argument("channel must be 'force' or 'pressure'");
}

SignalSpec parse_signal(const std::string& name) {
  if (name == "step") return StepSignal{};
  if (name == "chirp") return LogChirpSignal{};
  if (name == "mixed") return MixedSignal{};
  if (name == "drill") return ConstantWithDisturbance{};
  throw std::invalid_argument("signal must be step, chirp, mixed or drill");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MR-clutch hydrostatic actuation line: models, analysis and simulation";
  m.attr("__version__") = MRHYDRO_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);
  py::register_exception<RootFindingError>(m, "RootFindingError", PyExc_ArithmeticError);

  py::class_<ActuationLineParams>(m, "LineParams")
      .def(py::init<>())
      .def_readwrite("m1", &ActuationLineParams::m1)
      .def_readwrite("b1", &ActuationLineParams::b1)
      .def_readwrite("k1", &ActuationLineParams::k1)
      .def_readwrite("m2", &ActuationLineParams::m2)
      .def_readwrite("b2", &ActuationLineParams::b2)
      .def_readwrite("k2", &ActuationLineParams::k2)
      .def_readwrite("tau", &ActuationLineParams::tau)
      .def_readwrite("K_I", &ActuationLineParams::K_I)
      .def_readwrite("A_master", &ActuationLineParams::A_master)
      .def_readwrite("A_slave", &ActuationLineParams::A_slave)
      .def_readwrite("I_min", &ActuationLineParams::I_min)
      .def_readwrite("I_max", &ActuationLineParams::I_max)
      .def("validate", &ActuationLineParams::validate);

  py::class_<LoadImpedance>(m, "Load")
      .def_static("blocked", &LoadImpedance::blocked)
      .def_static(
          "compliant",
          [](double m3, double b3, double k3) { return LoadImpedance::compliant(m3, b3, k3); },
          py::arg("m3"), py::arg("b3"), py::arg("k3"))
      .def_static("bench", &LoadImpedance::bench)
      .def_property_readonly("is_blocked", &LoadImpedance::is_blocked)
      .def("__repr__", &LoadImpedance::describe);

  py::class_<HardwareGeometry>(m, "Geometry")
      .def(py::init<>())
      .def_readwrite("hose_length", &HardwareGeometry::hose_length)
      .def_readwrite("hose_inner_diameter", &HardwareGeometry::hose_inner_diameter)
      .def_readwrite("fluid_density", &HardwareGeometry::fluid_density)
      .def_readwrite("cylinder_area", &HardwareGeometry::cylinder_area);

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("line", &Config::line)
      .def_readwrite("load", &Config::load)
      .def_readwrite("geometry", &Config::geometry);

  m.def("parse_config", [](const std::string& text) { return parse_config(text); });
  m.def("load_config", &load_config);
  m.def("save_config", &save_config);
  m.def("derive_hydraulic_mass", &derive_hydraulic_mass);
  m.def("joint_torque", &joint_torque);

  py::class_<RationalTF>(m, "TransferFunction")
      .def(py::init([](std::vector<double> num, std::vector<double> den) {
             return RationalTF(Polynomial(std::move(num)), Polynomial(std::move(den)));
           }),
           py::arg("num"), py::arg("den"), "Ascending coefficient lists.")
      .def_property_readonly("num", [](const RationalTF& g) { return g.num().coefficients(); })
      .def_property_readonly("den", [](const RationalTF& g) { return g.den().coefficients(); })
      .def("__call__", &RationalTF::operator())
      .def("at_hz", &RationalTF::at_hz)
      .def("dc_gain", &RationalTF::dc_gain)
      .def("poles", &RationalTF::poles)
      .def("zeros", &RationalTF::zeros);

  m.def("build_hf", &build_HF, "K_I/(tau s+1) A/(BD+1)");
  m.def("build_hp", &build_HP, "K_I/(tau s+1) A C/(BD+1)");
  m.def("channel_tf", [](const ActuationLineParams& p, const LoadImpedance& z,
                         const std::string& ch) { return channel_tf(p, z, parse_channel(ch)); });
  m.def("polynomial_roots", [](std::vector<double> coeffs) {
    return polynomial_roots(Polynomial(std::move(coeffs)));
  });

  m.def(
      "bode",
      [](const RationalTF& g, double f_lo, double f_hi, std::size_t n) {
        auto t = bode(g, f_lo, f_hi, n);
        std::vector<double> hz, mag, phase;
        for (const auto& r : t.rows) {
          hz.push_back(r.hz);
          mag.push_back(r.magnitude_db);
          phase.push_back(r.phase_deg);
        }
        return py::make_tuple(to_array(hz), to_array(mag), to_array(phase));
      },
      py::arg("g"), py::arg("f_lo") = 0.01, py::arg("f_hi") = 1000.0, py::arg("n") = 500);
  m.def("bandwidth_3db", &bandwidth_3db);
  m.def("max_stable_gain", &max_stable_gain);
  m.def("stability_margins", [](const RationalTF& g) {
    auto s = stability_margins(g);
    return py::make_tuple(s.gain_margin_db, s.phase_margin_deg);
  });
  m.def("root_locus", [](const RationalTF& g, std::vector<double> gains) {
    auto trace = root_locus(g, gains);
    if (trace.error) throw NumericError(*trace.error);
    std::vector<std::vector<std::complex<double>>> poles;
    for (const auto& p : trace.points) poles.push_back(p.poles);
    return poles;
  });

  m.def(
      "tune_pi",
      [](const ActuationLineParams& p, const LoadImpedance& z, const std::string& loop) {
        auto t = tune_pi(p, z, parse_channel(loop));
        py::dict d;
        d["kp"] = t.kp;
        d["ki"] = t.ki;
        d["gain_margin_db"] = t.margins.gain_margin_db;
        d["phase_margin_deg"] = t.margins.phase_margin_deg;
        d["bandwidth_hz"] = t.closed_loop_bandwidth_hz;
        d["max_feasible_kp"] = t.max_feasible_kp;
        return d;
      },
      py::arg("params"), py::arg("load"), py::arg("loop"));

  m.def(
      "simulate",
      [](const ActuationLineParams& p, const LoadImpedance& z, const std::string& controller,
         const std::string& signal, std::optional<double> duration, std::optional<double> kp,
         std::optional<double> ki) {
        ControllerConfig ctrl = ControllerConfig::open_loop(p);
        if (controller != "open") {
          const Channel ch = controller == "force-pi" ? Channel::Force : Channel::Pressure;
          if (controller != "force-pi" && controller != "pressure-pi")
            throw std::invalid_argument("controller must be open, force-pi or pressure-pi");
          if (!kp || !ki) {
            auto t = tune_pi(p, z, ch);
            kp = kp.value_or(t.kp);
            ki = ki.value_or(t.ki);
          }
          ctrl = ch == Channel::Force ? ControllerConfig::force_pi(p, *kp, *ki)
                                      : ControllerConfig::pressure_pi(p, *kp, *ki);
        }
        if (signal == "drill") {
          DrillingOptions opt;
          if (duration) opt.duration = *duration;
          auto d = drilling_scenario(p, z, ctrl, opt);
          auto out = sim_dict(d.run);
          out["peak_deviation"] = d.peak_deviation;
          return out;
        }
        auto sig = parse_signal(signal);
        SimResult r;
        {
          py::gil_scoped_release release;
          r = run_simulation(p, z, ctrl, sig, duration.value_or(natural_duration(sig)));
        }
        return sim_dict(r);
      },
      py::arg("params"), py::arg("load"), py::arg("controller") = "open",
      py::arg("signal") = "step", py::arg("duration") = py::none(), py::arg("kp") = py::none(),
      py::arg("ki") = py::none());

  m.def(
      "compare",
      [](const ActuationLineParams& p, const LoadImpedance& z) {
        auto runs = compare_controllers(p, z, tuned_controllers(p, z));
        py::dict d;
        for (const auto& e : runs) d[py::str(e.controller)] = metrics_dict(e.metrics);
        return d;
      },
      py::arg("params"), py::arg("load"));

  m.def(
      "estimate_frf",
      [](const ActuationLineParams& p, const LoadImpedance& z, const std::string& channel,
         double duration) {
        auto chirp = default_frf_chirp();
        chirp.duration = duration;
        auto r = estimate_frf(p, z, chirp, parse_channel(channel));
        py::array_t<std::complex<double>> values(static_cast<py::ssize_t>(r.size()),
                                                 r.value.data());
        return py::make_tuple(to_array(r.hz), values);
      },
      py::arg("params"), py::arg("load"), py::arg("channel") = "force",
      py::arg("duration") = 60.0);
}
