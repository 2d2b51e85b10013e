#include "mrhydro/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mrhydro/scenarios.hpp"

namespace mrhydro {
namespace {

TEST(Simulation, EquilibriumIsStationary) {
  ActuationLineParams p;
  for (auto z : {LoadImpedance::blocked(), LoadImpedance::bench()}) {
    PlantState s = equilibrium_state(p, z, 200.0);
    auto d = plant_derivative(s, 200.0 / p.K_I, 0.0, p, z).to_array();
    for (double v : d) EXPECT_NEAR(v, 0.0, 1e-9);
    EXPECT_NEAR(line_pressure(p, s), 200.0, 1e-9);
    EXPECT_NEAR(output_force(p, s), 200.0, 1e-9);
  }
}

TEST(Simulation, OneWayClutchHoldsAtZero) {
  ActuationLineParams p;
  PlantState s;
  auto d = plant_derivative(s, -1.0, 0.0, p, LoadImpedance::bench());
  EXPECT_EQ(d.f_mr, 0.0);
  auto free = plant_derivative(s, -1.0, 0.0, p, LoadImpedance::bench(), false);
  EXPECT_LT(free.f_mr, 0.0);
}

TEST(Simulation, OpenLoopStepSettlesOnReference) {
  ActuationLineParams p;
  auto r = run_simulation(p, LoadImpedance::bench(), ControllerConfig::open_loop(p),
                          StepSignal{}, 4.0);
  EXPECT_EQ(r.size(), 6001u);
  EXPECT_NEAR(r.force.front(), 50.0, 1e-9);
  EXPECT_NEAR(r.force.back(), 250.0, 0.25);
  EXPECT_NEAR(r.pressure.back(), 250.0, 0.25);
}

TEST(Simulation, SaturationBounds) {
  ActuationLineParams p;
  auto ctrl = ControllerConfig::force_pi(p, 0.01, 5.0);
  auto r = run_simulation(p, LoadImpedance::bench(), ctrl, StepSignal{0.1, 0, 2000}, 1.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_GE(r.current[i], p.I_min);
    EXPECT_LE(r.current[i], p.I_max);
    EXPECT_GE(r.f_mr[i], 0.0);
  }
  EXPECT_NEAR(*std::max_element(r.current.begin(), r.current.end()), p.I_max, 1e-12);
}

TEST(Simulation, ZeroInputEnergyNeverIncreases) {
  ActuationLineParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  SimOptions opt;
  opt.forced_current = 0.0;
  for (auto z : {LoadImpedance::blocked(), LoadImpedance::bench()}) {
    for (int trial = 0; trial < 5; ++trial) {
      PlantState s{1e-3 * u(rng), 0.1 * u(rng), 1e-3 * u(rng), 0.1 * u(rng),
                   z.is_blocked() ? 0.0 : 1e-3 * u(rng), z.is_blocked() ? 0.0 : 0.1 * u(rng),
                   0.0};
      opt.initial_state = s;
      auto r = run_simulation(p, z, ControllerConfig::open_loop(p), StepSignal{}, 0.5, opt);
      double prev = mechanical_energy(p, z, r.states.front());
      for (const auto& st : r.states) {
        double e = mechanical_energy(p, z, st);
        EXPECT_LE(e, prev * (1 + 1e-12) + 1e-15);
        prev = e;
      }
    }
  }
}

TEST(Simulation, IntegratorIsFourthOrder) {
  ActuationLineParams p;
  auto z = LoadImpedance::bench();
  auto ctrl = ControllerConfig::open_loop(p);
  ctrl.sample_rate = 500;
  SimOptions opt;
  opt.saturation = false;
  auto run = [&](int substeps) {
    opt.substeps = substeps;
    return run_simulation(p, z, ctrl, StepSignal{0.01, 50, 250}, 0.2, opt).force;
  };
  auto ref = run(256);
  auto err = [&](const std::vector<double>& y) {
    double e = 0;
    for (std::size_t i = 0; i < y.size(); ++i) e = std::max(e, std::abs(y[i] - ref[i]));
    return e;
  };
  double e1 = err(run(2));
  double e2 = err(run(4));
  EXPECT_GT(std::log2(e1 / e2), 3.5);
}

TEST(Simulation, Deterministic) {
  ActuationLineParams p;
  auto ctrl = ControllerConfig::pressure_pi(p, 0.003, 1.0);
  auto a = run_simulation(p, LoadImpedance::bench(), ctrl, MixedSignal{}, 3.0);
  auto b = run_simulation(p, LoadImpedance::bench(), ctrl, MixedSignal{}, 3.0);
  EXPECT_EQ(a.force, b.force);
  EXPECT_EQ(a.params_hash, b.params_hash);
}

TEST(Simulation, DivergenceReportsTime) {
  ActuationLineParams p;
  SimOptions opt;
  opt.saturation = false;
  opt.forced_current = 1e306;
  opt.initial_state = PlantState{};
  try {
    run_simulation(p, LoadImpedance::bench(), ControllerConfig::open_loop(p), StepSignal{},
                   1.0, opt);
    FAIL();
  } catch (const SimulationError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 1.0);
  }
}

TEST(Simulation, ControllerNames) {
  ActuationLineParams p;
  EXPECT_EQ(ControllerConfig::open_loop(p).name(), "open");
  EXPECT_EQ(ControllerConfig::force_pi(p, 1, 1).name(), "force-pi");
  EXPECT_EQ(ControllerConfig::pressure_pi(p, 1, 1).name(), "pressure-pi");
  EXPECT_THROW(ControllerConfig::force_pi(p, -1, 1).validate(), std::invalid_argument);
}

TEST(Drilling, ZeroDisturbanceHoldsLevel) {
  ActuationLineParams p;
  DrillingOptions opt;
  opt.disturbance_enabled = false;
  opt.duration = 3.0;
  auto ctrl = ControllerConfig::force_pi(p, 0.0021, 0.093);
  auto r = drilling_scenario(p, LoadImpedance::bench(), ctrl, opt);
  EXPECT_LT(r.peak_deviation, 0.005 * opt.level);
  EXPECT_NEAR(r.run.force.back(), opt.level, 0.005 * opt.level);
}

TEST(Drilling, CalibrationHitsTarget) {
  ActuationLineParams p;
  DrillingOptions opt;
  opt.duration = 4.0;
  auto r = drilling_scenario(p, LoadImpedance::bench(), ControllerConfig::open_loop(p), opt);
  EXPECT_NEAR(r.open_loop_peak_deviation, opt.open_loop_deviation, 1e-6);
  EXPECT_GT(r.disturbance_amplitude, 0.0);
}

}  // namespace
}  // namespace mrhydro
