#include "mrhydro/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mrhydro/roots.hpp"

namespace mrhydro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double deg(std::complex<double> z) { return std::arg(z) * 180.0 / std::numbers::pi; }

// Brings `phase` within 180 degrees of `reference` by whole turns.
double unwrap_near(double phase, double reference) {
  while (phase - reference > 180.0) phase -= 360.0;
  while (phase - reference <= -180.0) phase += 360.0;
  return phase;
}

double interp_log(double fa, double fb, double ya, double yb, double target) {
  if (yb == ya) return fa;
  const double t = (target - ya) / (yb - ya);
  return std::pow(10.0, std::log10(fa) + t * (std::log10(fb) - std::log10(fa)));
}

// Orders `next` so that next[i] continues branch prev[i]; greedy on the
// globally smallest remaining distance. A change in pole count (leading
// coefficient cancellation) leaves `next` in root-finder order.
std::vector<std::complex<double>> match_branches(
    const std::vector<std::complex<double>>& prev,
    std::vector<std::complex<double>> next) {
  if (prev.size() != next.size()) return next;
  const std::size_t n = next.size();
  std::vector<std::complex<double>> ordered(n);
  std::vector<bool> prev_used(n, false);
  std::vector<bool> next_used(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    double best = kInf;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (prev_used[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (next_used[j]) continue;
        const double d = std::abs(prev[i] - next[j]);
        if (d < best || best == kInf) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    prev_used[bi] = next_used[bj] = true;
    ordered[bi] = next[bj];
  }
  return ordered;
}

struct Crossings {
  double gain_margin_db = kInf;
  double phase_margin_deg = kInf;
  double phase_crossover_hz = std::numeric_limits<double>::quiet_NaN();
  double gain_crossover_hz = std::numeric_limits<double>::quiet_NaN();
};

// Scans sampled (f, |L|, unwrapped phase) for crossings. `refine` maps a
// bracketing interval and a predicate kind to a refined frequency.
template <typename Refine>
Crossings scan(const std::vector<double>& f, const std::vector<double>& mag,
               const std::vector<double>& phase, Refine refine) {
  Crossings c;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    // Phase crossings of -180 + 360 m.
    const double ka = std::floor((phase[i] + 180.0) / 360.0);
    const double kb = std::floor((phase[i + 1] + 180.0) / 360.0);
    if (ka != kb) {
      const double target = -180.0 + 360.0 * std::max(ka, kb);
      const auto [fc, m] = refine(i, /*phase_kind=*/true, target);
      const double gm = -20.0 * std::log10(m);
      if (gm < c.gain_margin_db) {
        c.gain_margin_db = gm;
        c.phase_crossover_hz = fc;
      }
    }
    if ((mag[i] - 1.0) * (mag[i + 1] - 1.0) < 0.0 || mag[i + 1] == 1.0) {
      const auto [fc, ph] = refine(i, /*phase_kind=*/false, 1.0);
      double pm = ph + 180.0;
      pm = pm - 360.0 * std::floor((pm + 180.0) / 360.0);
      if (pm == -180.0) pm = 180.0;
      if (pm < c.phase_margin_deg) {
        c.phase_margin_deg = pm;
        c.gain_crossover_hz = fc;
      }
    }
  }
  return c;
}

}  // namespace

BodeTable bode(const RationalTF& g, double f_lo, double f_hi, std::size_t n) {
  const auto grid = log_grid(f_lo, f_hi, n);
  BodeTable table;
  const double dc = std::abs(g.dc_gain());
  table.reference_gain = (std::isfinite(dc) && dc > 0.0) ? dc : 1.0;
  table.rows.reserve(n);
  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = g.at_hz(grid[i]);
    double ph = deg(v);
    if (i > 0) ph = unwrap_near(ph, previous);
    previous = ph;
    table.rows.push_back(
        {grid[i], 20.0 * std::log10(std::abs(v) / table.reference_gain), ph});
  }
  return table;
}

std::optional<double> bandwidth_3db(const RationalTF& g) {
  const double dc = std::abs(g.dc_gain());
  if (!std::isfinite(dc) || dc == 0.0) {
    throw NumericError("bandwidth needs a finite nonzero DC gain");
  }
  const double target = dc / std::sqrt(2.0);
  const auto grid = log_grid(0.01, 1000.0, 2000);
  auto below = [&](double f) { return std::abs(g.at_hz(f)) < target; };

  double lo = 0.0;
  double hi = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (below(grid[i])) {
      hi = grid[i];
      lo = i == 0 ? 1e-9 : grid[i - 1];
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

bool closed_loop_stable(const RationalTF& g, double k) {
  const Polynomial characteristic = g.den() + g.num() * k;
  if (characteristic.degree() < 1) return true;
  for (const auto& r : polynomial_roots(characteristic)) {
    if (!(r.real() < 0.0)) return false;
  }
  return true;
}

RootLocusTrace root_locus(const RationalTF& g, const std::vector<double>& gains) {
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!(gains[i] > 0) || (i > 0 && !(gains[i] > gains[i - 1]))) {
      throw std::invalid_argument("root locus gains must be positive and increasing");
    }
  }
  RootLocusTrace trace;
  std::vector<std::complex<double>> previous;
  try {
    previous = g.den().degree() >= 1 ? g.poles() : std::vector<std::complex<double>>{};
    for (double k : gains) {
      const Polynomial characteristic = g.den() + g.num() * k;
      auto poles = characteristic.degree() >= 1
                       ? polynomial_roots(characteristic)
                       : std::vector<std::complex<double>>{};
      poles = match_branches(previous, std::move(poles));
      previous = poles;
      trace.points.push_back({k, std::move(poles)});
    }
  } catch (const RootFindingError& e) {
    trace.error = e.what();
  }
  return trace;
}

std::vector<double> default_locus_gains(std::optional<double> k_star) {
  if (k_star) return log_grid(1e-3 * *k_star, 10.0 * *k_star, 200);
  return log_grid(1e-3, 1e3, 200);
}

std::optional<double> max_stable_gain(const RationalTF& g) {
  if (g.den().degree() >= 1) {
    for (const auto& p : g.poles()) {
      if (!(p.real() < 0.0)) throw NumericError("open loop is not stable");
    }
  }
  double lo = 1e-6;
  double hi = 1e6;
  if (!closed_loop_stable(g, lo)) {
    throw NumericError("closed loop unstable already at gain 1e-6");
  }
  if (closed_loop_stable(g, hi)) return std::nullopt;
  while (hi / lo > 1.0 + 1e-3) {
    const double mid = std::sqrt(lo * hi);
    (closed_loop_stable(g, mid) ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

StabilityMargins stability_margins(const RationalTF& g) {
  const auto f = log_grid(1e-3, 1e4, 4000);
  std::vector<double> mag(f.size());
  std::vector<double> phase(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto v = g.at_hz(f[i]);
    mag[i] = std::abs(v);
    phase[i] = i == 0 ? deg(v) : unwrap_near(deg(v), phase[i - 1]);
  }
  auto refine = [&](std::size_t i, bool phase_kind, double target) {
    double a = f[i];
    double b = f[i + 1];
    const double ref = phase[i];
    auto value = [&](double x) {
      const auto v = g.at_hz(x);
      return phase_kind ? unwrap_near(deg(v), ref) : std::abs(v);
    };
    const double va = phase_kind ? phase[i] : mag[i];
    const bool rising = (phase_kind ? phase[i + 1] : mag[i + 1]) > va;
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(a * b);
      const bool past = rising ? value(mid) >= target : value(mid) <= target;
      (past ? b : a) = mid;
    }
    const double fc = std::sqrt(a * b);
    const auto v = g.at_hz(fc);
    return std::pair{fc, phase_kind ? std::abs(v) : unwrap_near(deg(v), ref)};
  };
  const auto c = scan(f, mag, phase, refine);
  return {c.gain_margin_db, c.phase_margin_deg, c.phase_crossover_hz,
          c.gain_crossover_hz};
}

StabilityMargins stability_margins(const FrequencyResponse& loop) {
  loop.validate();
  const auto& f = loop.hz;
  std::vector<double> mag(f.size());
  std::vector<double> phase(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    mag[i] = std::abs(loop.value[i]);
    phase[i] = i == 0 ? deg(loop.value[i]) : unwrap_near(deg(loop.value[i]), phase[i - 1]);
  }
  auto refine = [&](std::size_t i, bool phase_kind, double target) {
    if (phase_kind) {
      const double fc = interp_log(f[i], f[i + 1], phase[i], phase[i + 1], target);
      const double t = (phase[i + 1] == phase[i]) ? 0.0
                           : (target - phase[i]) / (phase[i + 1] - phase[i]);
      const double m = std::exp(std::log(mag[i]) + t * (std::log(mag[i + 1]) - std::log(mag[i])));
      return std::pair{fc, m};
    }
    const double la = std::log(mag[i]);
    const double lb = std::log(mag[i + 1]);
    const double t = (lb == la) ? 0.0 : -la / (lb - la);
    const double fc = interp_log(f[i], f[i + 1], 0.0, 1.0, t);
    return std::pair{fc, phase[i] + t * (phase[i + 1] - phase[i])};
  };
  const auto c = scan(f, mag, phase, refine);
  return {c.gain_margin_db, c.phase_margin_deg, c.phase_crossover_hz,
          c.gain_crossover_hz};
}

}  // namespace mrhydro
