// Acceptance suite. Prints one PASS/FAIL line per criterion followed by
// indented detail lines, and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mrhydro/analysis.hpp"
#include "mrhydro/format.hpp"
#include "mrhydro/frf.hpp"
#include "mrhydro/line_model.hpp"
#include "mrhydro/params.hpp"
#include "mrhydro/roots.hpp"
#include "mrhydro/scenarios.hpp"
#include "mrhydro/simulation.hpp"

namespace {

using namespace mrhydro;
using cd = std::complex<double>;

// Pinned tolerances.
constexpr double kDcRelTol = 1e-9;
constexpr double kBlockedTargetHz = 25.4;
constexpr double kCompliantTargetHz = 6.5;
constexpr double kBandwidthRelTol = 0.30;
constexpr double kExpectedGainRatio = 2.0;
constexpr double kFrfMagTol = 0.05;
constexpr double kFrfPhaseTolDeg = 3.0;
constexpr double kFrfLoHz = 0.5;
constexpr double kFrfHiHz = 50.0;
constexpr double kResonanceBand = 0.10;
constexpr double kOpenRiseLo = 0.040;
constexpr double kOpenRiseHi = 0.160;
constexpr double kOscillationFactor = 5.0;
constexpr double kPoleRealTol = 1e-9;
constexpr double kMassTarget = 9.65;
constexpr double kMassRelTol = 0.05;
constexpr double kIdentityRelTol = 4 * std::numeric_limits<double>::epsilon();
constexpr double kRootRelTol = 1e-6;
constexpr double kResidualTol = 1e-8;
constexpr double kDrillLevel = 23.0;
constexpr double kDrillOpenDeviation = 8.0;
constexpr double kDrillPeakTol = 2.5;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  void note(std::string s) { details.push_back(std::move(s)); }
  void require(bool ok, std::string s) {
    pass = pass && ok;
    details.push_back((ok ? "ok: " : "failed: ") + std::move(s));
  }
};

std::string fmt(double v, int digits = 6) { return format_significant(v, digits); }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

ActuationLineParams random_params(std::mt19937_64& rng) {
  ActuationLineParams p;
  p.m1 = log_uniform(rng, 0.1, 10);
  p.b1 = log_uniform(rng, 1, 2e3);
  p.k1 = log_uniform(rng, 1e4, 1e6);
  p.m2 = log_uniform(rng, 0.5, 50);
  p.b2 = log_uniform(rng, 1, 2e3);
  p.k2 = log_uniform(rng, 1e4, 1e6);
  p.tau = log_uniform(rng, 1e-3, 0.1);
  p.K_I = log_uniform(rng, 1, 1e3);
  return p;
}

LoadImpedance random_load(std::mt19937_64& rng) {
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) return LoadImpedance::blocked();
  return LoadImpedance::compliant(log_uniform(rng, 0.1, 10), log_uniform(rng, 1, 200),
                                  log_uniform(rng, 1e3, 1e5));
}

Outcome dc_gain_identity() {
  Outcome o;
  std::mt19937_64 rng(101);
  double worst = 0;
  auto check = [&](const ActuationLineParams& p, const LoadImpedance& z) {
    for (const auto& g : {build_HF(p, z), build_HP(p, z)})
      worst = std::max(worst, std::abs(std::abs(g.dc_gain()) - p.K_I) / p.K_I);
  };
  check(ActuationLineParams{}, LoadImpedance::blocked());
  check(ActuationLineParams{}, LoadImpedance::bench());
  for (int i = 0; i < 100; ++i) check(random_params(rng), random_load(rng));
  o.require(worst <= kDcRelTol, "worst relative DC error " + fmt(worst, 3) + " over 102 sets");
  return o;
}

Outcome bandwidth_vs_target(const LoadImpedance& z, double target) {
  Outcome o;
  ActuationLineParams p;
  struct Candidate {
    const char* label;
    RationalTF g;
  };
  Candidate cands[] = {{"A/(BD+1)", build_HF(p, z)}, {"A*C/(BD+1)", build_HP(p, z)}};
  bool any = false;
  for (const auto& c : cands) {
    auto bw = bandwidth_3db(c.g);
    double rel = bw ? (*bw - target) / target : INFINITY;
    bool hit = std::abs(rel) <= kBandwidthRelTol;
    any = any || hit;
    o.note(std::string(c.label) + ": " + (bw ? fmt(*bw) + " Hz" : "none") + " (" +
           fmt(100 * rel, 3) + " % vs " + fmt(target) + " Hz)" + (hit ? " matched" : ""));
  }
  o.require(any, "at least one candidate within " + fmt(100 * kBandwidthRelTol) + " %");
  return o;
}

Outcome stability_ordering() {
  Outcome o;
  ActuationLineParams p;
  auto z = LoadImpedance::bench();
  auto kf = max_stable_gain(channel_tf(p, z, Channel::Force));
  auto kp = max_stable_gain(channel_tf(p, z, Channel::Pressure));
  if (!kf || !kp) {
    o.require(false, "a loop is stable for every gain tested");
    return o;
  }
  double ratio = *kp / *kf;
  o.note("force loop k* = " + fmt(*kf) + " A/N, pressure loop k* = " + fmt(*kp) + " A/N");
  o.require(*kp > *kf, "pressure loop admits more gain, ratio " + fmt(ratio, 4));
  o.note(std::string("ratio ") + (ratio >= kExpectedGainRatio ? ">=" : "<") + " " +
         fmt(kExpectedGainRatio));
  return o;
}

// Local maxima of |G| inside [lo, hi] on a fine grid.
std::vector<double> resonance_peaks(const RationalTF& g, double lo, double hi) {
  auto grid = log_grid(lo / 2, hi * 2, 4000);
  std::vector<double> mag;
  for (double f : grid) mag.push_back(std::abs(g.at_hz(f)));
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) peaks.push_back(grid[i]);
  return peaks;
}

Outcome frf_cross_validation() {
  Outcome o;
  ActuationLineParams p;
  for (auto z : {LoadImpedance::blocked(), LoadImpedance::bench()}) {
    for (auto ch : {Channel::Force, Channel::Pressure}) {
      auto g = channel_tf(p, z, ch);
      auto est = estimate_frf(p, z, default_frf_chirp(), ch);
      auto peaks = resonance_peaks(g, kFrfLoHz, kFrfHiHz);
      double mag = 0, phase = 0;
      std::size_t used = 0;
      for (std::size_t i = 0; i < est.size(); ++i) {
        double f = est.hz[i];
        if (f < kFrfLoHz || f > kFrfHiHz) continue;
        bool near_peak = std::any_of(peaks.begin(), peaks.end(), [&](double fp) {
          return std::abs(f - fp) <= kResonanceBand * fp;
        });
        if (near_peak) continue;
        cd ratio = est.value[i] / g.at_hz(f);
        mag = std::max(mag, std::abs(std::abs(ratio) - 1));
        phase = std::max(phase, std::abs(std::arg(ratio)) * 180 / std::numbers::pi);
        ++used;
      }
      std::string peak_list;
      for (double fp : peaks) peak_list += (peak_list.empty() ? "" : ", ") + fmt(fp, 4);
      o.require(used > 0 && mag <= kFrfMagTol && phase <= kFrfPhaseTolDeg,
                (z.is_blocked() ? std::string("blocked ") : std::string("compliant ")) +
                    std::string(to_string(ch)) + ": max |mag| error " + fmt(100 * mag, 3) +
                    " %, max phase error " + fmt(phase, 3) + " deg over " +
                    std::to_string(used) + " points (peaks excluded: " +
                    (peak_list.empty() ? "none" : peak_list) + " Hz)");
    }
  }
  return o;
}

Outcome controller_comparison() {
  Outcome o;
  ActuationLineParams p;
  auto z = LoadImpedance::bench();
  auto tuned = tuned_controllers(p, z);
  o.note("force PI kp = " + fmt(tuned.force.kp) + " ki = " + fmt(tuned.force.ki) +
         " (GM " + fmt(tuned.force.margins.gain_margin_db, 4) + " dB, PM " +
         fmt(tuned.force.margins.phase_margin_deg, 4) + " deg)");
  o.note("pressure PI kp = " + fmt(tuned.pressure.kp) + " ki = " + fmt(tuned.pressure.ki) +
         " (GM " + fmt(tuned.pressure.margins.gain_margin_db, 4) + " dB, PM " +
         fmt(tuned.pressure.margins.phase_margin_deg, 4) + " deg)");
  MixedSignal signal;
  auto runs = compare_controllers(p, z, tuned, signal);
  const auto& open = runs[0].metrics;
  const auto& force = runs[1].metrics;
  const auto& pressure = runs[2].metrics;
  for (const auto& r : runs)
    o.note(r.controller + ": rise " + fmt(1e3 * r.metrics.rise_time_10_90, 4) + " ms, rms " +
           fmt(r.metrics.rms_tracking_error, 4) + " N, overshoot " +
           fmt(100 * r.metrics.overshoot, 3) + " %, oscillation " +
           fmt(r.metrics.oscillation_index, 3));

  o.require(force.rise_time_10_90 < open.rise_time_10_90 &&
                pressure.rise_time_10_90 < open.rise_time_10_90,
            "(a) both closed-loop rise times below open loop");
  o.require(open.rise_time_10_90 >= kOpenRiseLo && open.rise_time_10_90 <= kOpenRiseHi,
            "(b) open-loop rise " + fmt(1e3 * open.rise_time_10_90, 4) + " ms within [" +
                fmt(1e3 * kOpenRiseLo) + ", " + fmt(1e3 * kOpenRiseHi) + "] ms");
  o.require(force.rms_tracking_error < open.rms_tracking_error &&
                pressure.rms_tracking_error < open.rms_tracking_error,
            "(c) both closed-loop rms errors below open loop");

  auto doubled = tuned.force_pi;
  std::get<ForcePI>(doubled.law).kp *= 2;
  const double duration = runs[1].run.time.back();
  auto run = run_simulation(p, z, doubled, SignalSpec{signal}, duration);
  auto m = measure_metrics(run, {signal.step.t0 - 0.1, duration});
  double factor = m.oscillation_index / force.oscillation_index;
  o.require(factor >= kOscillationFactor, "(d) 2x kp oscillation index " +
                                              fmt(m.oscillation_index, 3) + " is " +
                                              fmt(factor, 4) + "x the tuned value");
  return o;
}

Outcome passivity() {
  Outcome o;
  std::mt19937_64 rng(202);
  double worst_re = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    auto p = random_params(rng);
    auto z = random_load(rng);
    for (const auto& pole : build_HF(p, z).poles()) worst_re = std::max(worst_re, pole.real());
    for (const auto& pole : build_HP(p, z).poles()) worst_re = std::max(worst_re, pole.real());
  }
  o.require(worst_re <= kPoleRealTol, "max pole real part " + fmt(worst_re, 4) +
                                          " over 1000 draws");

  std::uniform_real_distribution<double> u(-1, 1);
  int increases = 0;
  double worst_rise = 0;
  SimOptions opt;
  opt.forced_current = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto p = random_params(rng);
    auto z = i % 4 == 0 ? LoadImpedance::blocked() : random_load(rng);
    bool blocked = z.is_blocked();
    opt.initial_state = PlantState{1e-3 * u(rng), 0.1 * u(rng), 1e-3 * u(rng), 0.1 * u(rng),
                                   blocked ? 0.0 : 1e-3 * u(rng),
                                   blocked ? 0.0 : 0.1 * u(rng), 0.0};
    auto ctrl = ControllerConfig::open_loop(p);
    ctrl.sample_rate = 5000;
    auto r = run_simulation(p, z, ctrl, StepSignal{}, 1.0, opt);
    double prev = mechanical_energy(p, z, r.states.front());
    for (const auto& s : r.states) {
      double e = mechanical_energy(p, z, s);
      if (e > prev * (1 + 1e-12)) {
        ++increases;
        worst_rise = std::max(worst_rise, (e - prev) / prev);
      }
      prev = e;
    }
  }
  o.require(increases == 0, "energy non-increasing in 20 zero-input runs (" +
                                std::to_string(increases) + " increases, worst " +
                                fmt(worst_rise, 3) + ")");
  return o;
}

Outcome hydraulic_mass() {
  Outcome o;
  HardwareGeometry g;
  g.fluid_density = 1000;
  g.hose_length = 1.0;
  g.hose_inner_diameter = 9.5e-3;
  g.cylinder_area = 826e-6;
  double m = derive_hydraulic_mass(g);
  o.require(std::abs(m - kMassTarget) / kMassTarget <= kMassRelTol,
            "m2 = " + fmt(m, 5) + " kg vs " + fmt(kMassTarget) + " kg");
  double worst = 0;
  for (double s : {0.5, 2.0, 3.0, 10.0}) {
    auto gd = g;
    gd.hose_inner_diameter *= s;
    worst = std::max(worst, std::abs(derive_hydraulic_mass(gd) * s * s - m) / m);
    auto gl = g;
    gl.hose_length *= s;
    worst = std::max(worst, std::abs(derive_hydraulic_mass(gl) - s * m) / (s * m));
  }
  o.require(worst <= kIdentityRelTol, "1/d^2 and linear-L identities, worst relative error " +
                                          fmt(worst, 3));
  return o;
}

Outcome root_finder() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> deg(1, 10);
  std::uniform_real_distribution<double> unit(-1, 1);
  double worst_err = 0, worst_res = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = deg(rng);
    std::vector<cd> known;
    while (static_cast<int>(known.size()) < n) {
      double mag = std::pow(10.0, 3 * unit(rng));
      double angle = std::numbers::pi * (0.5 + 0.5 * std::abs(unit(rng)));
      if (n - static_cast<int>(known.size()) >= 2 && unit(rng) > 0) {
        cd z = std::polar(mag, angle);
        known.push_back(z);
        known.push_back(std::conj(z));
      } else {
        known.emplace_back(unit(rng) > 0 ? mag : -mag, 0.0);
      }
    }
    auto p = Polynomial::from_roots(known);
    auto found = polynomial_roots(p);
    if (found.size() != known.size()) {
      o.require(false, "trial " + std::to_string(trial) + " returned wrong root count");
      return o;
    }
    auto remaining = known;
    for (const cd& r : found) {
      auto it = std::min_element(remaining.begin(), remaining.end(), [&](cd a, cd b) {
        return std::abs(a - r) < std::abs(b - r);
      });
      worst_err = std::max(worst_err, std::abs(*it - r) / std::abs(*it));
      remaining.erase(it);
      worst_res = std::max(worst_res, scaled_residual(p, r));
    }
  }
  o.require(worst_err <= kRootRelTol, "worst relative root error " + fmt(worst_err, 3));
  o.require(worst_res <= kResidualTol, "worst scaled residual " + fmt(worst_res, 3));
  return o;
}

Outcome drilling() {
  Outcome o;
  ActuationLineParams p;
  auto z = LoadImpedance::bench();
  auto tuned = tuned_controllers(p, z);
  DrillingOptions opt;
  opt.level = kDrillLevel;
  opt.open_loop_deviation = kDrillOpenDeviation;
  auto force = drilling_scenario(p, z, tuned.force_pi, opt);
  auto pressure = drilling_scenario(p, z, tuned.pressure_pi, opt);
  o.note("disturbance " + fmt(force.disturbance_amplitude, 4) + " N per component, open loop peak " +
         fmt(force.open_loop_peak_deviation, 4) + " N");
  o.note("pressure PI peak deviation " + fmt(pressure.peak_deviation, 4) + " N");
  o.note("open/closed deviation ratio " +
         fmt(force.open_loop_peak_deviation / force.peak_deviation, 4));
  o.require(force.peak_deviation <= kDrillPeakTol,
            "force PI peak deviation " + fmt(force.peak_deviation, 4) + " N (limit " +
                fmt(kDrillPeakTol) + " N)");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dc-gain-identity", 1.0, dc_gain_identity},
      {2, "blocked-bandwidth",
       5.0, [] { return bandwidth_vs_target(LoadImpedance::blocked(), kBlockedTargetHz); }},
      {3, "compliant-bandwidth",
       5.0, [] { return bandwidth_vs_target(LoadImpedance::bench(), kCompliantTargetHz); }},
      {4, "stability-ordering", 30.0, stability_ordering},
      {5, "frf-cross-validation", 60.0, frf_cross_validation},
      {6, "controller-comparison", 60.0, controller_comparison},
      {7, "passivity", 60.0, passivity},
      {8, "hydraulic-mass", 1.0, hydraulic_mass},
      {9, "root-finder-oracle", 10.0, root_finder},
      {10, "drilling", 30.0, drilling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = elapsed <= c.limit_s;
    bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %d %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name, elapsed, c.limit_s);
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    if (!in_time) std::printf("    failed: runtime limit exceeded\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
