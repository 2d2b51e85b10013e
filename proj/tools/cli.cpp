#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "mrhydro/analysis.hpp"
#include "mrhydro/format.hpp"
#include "mrhydro/frf.hpp"
#include "mrhydro/line_model.hpp"
#include "mrhydro/metrics.hpp"
#include "mrhydro/params.hpp"
#include "mrhydro/roots.hpp"
#include "mrhydro/scenarios.hpp"
#include "mrhydro/simulation.hpp"
#include "mrhydro/tuning.hpp"

namespace mrhydro::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_significant(v, 9); }
std::string short_num(double v) { return format_significant(v, 6); }

struct Invocation {
  std::string command_line;
  Config config;
  std::string config_source;  // path or "defaults"
  std::string config_digest;
  std::string run_id;
};

struct OutputFile {
  std::filesystem::path path;
  std::string text;
};

// Everything a subcommand produces. Files are only written once the whole
// command has succeeded.
struct Outcome {
  std::vector<std::string> summary;
  std::vector<OutputFile> files;
  std::optional<std::string> stdout_csv;
  std::optional<std::filesystem::path> manifest;
  Config resolved;
};

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::pair<std::string, std::string>> param_pairs(const Config& c) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(save_config(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    pairs.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return pairs;
}

std::string csv(const Invocation& inv, const Config& resolved, const Row& columns,
                const std::vector<Row>& rows) {
  std::string params;
  for (const auto& [k, v] : param_pairs(resolved)) {
    if (!params.empty()) params += ' ';
    params += k + '=' + v;
  }
  std::string s;
  s += "# mrhydro " MRHYDRO_VERSION "\n";
  s += "# run_id: " + inv.run_id + "\n";
  s += "# command: " + inv.command_line + "\n";
  s += "# config: " + inv.config_source + " sha256:" + inv.config_digest + "\n";
  s += "# params: " + params + "\n";
  auto join = [](const Row& r) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += ',';
      line += r[i];
    }
    return line + '\n';
  };
  s += join(columns);
  for (const auto& r : rows) s += join(r);
  return s;
}

std::filesystem::path temp_path(const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  return tmp;
}

// Writes every file under a temporary name first and renames only when all
// writes succeeded.
void commit(const std::vector<OutputFile>& files) {
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& f : files) {
      if (f.path.has_parent_path()) std::filesystem::create_directories(f.path.parent_path());
      const auto tmp = temp_path(f.path);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      written.push_back(tmp);
      out << f.text;
      out.close();
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& tmp : written) std::filesystem::remove(tmp, ec);
    throw;
  }
  for (const auto& f : files) std::filesystem::rename(temp_path(f.path), f.path);
}

std::string manifest_json(const Invocation& inv, const Config& resolved,
                          const std::vector<OutputFile>& files) {
  nlohmann::ordered_json j;
  j["run_id"] = inv.run_id;
  j["command"] = inv.command_line;
  j["config"] = {{"source", inv.config_source}, {"sha256", inv.config_digest}};
  nlohmann::ordered_json params;
  for (const auto& [k, v] : param_pairs(resolved)) params[k] = v;
  j["params"] = params;
  j["version"] = MRHYDRO_VERSION;
  j["timestamp"] = utc_timestamp();
  auto outputs = nlohmann::json::array();
  for (const auto& f : files) outputs.push_back(f.path.string());
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

std::filesystem::path sibling(const std::filesystem::path& csv_path, const std::string& suffix) {
  auto p = csv_path;
  if (p.extension() == ".csv") p.replace_extension();
  p += suffix;
  return p;
}

// Routes a single-table command to --out or stdout.
void emit_table(Outcome& o, const std::string& out_path, std::string text) {
  if (out_path.empty()) {
    o.stdout_csv = std::move(text);
  } else {
    o.files.push_back({out_path, std::move(text)});
    o.manifest = sibling(out_path, ".manifest.json");
  }
}

LoadImpedance pick_load(const Config& c, const std::string& which) {
  if (which.empty()) return c.load;
  if (which == "blocked") return LoadImpedance::blocked();
  if (!c.load.is_blocked()) return c.load;
  return LoadImpedance::bench();
}

const char* tf_label(const std::string& tf) {
  return tf == "hf" ? "A/(BD+1)" : "A*C/(BD+1)";
}

const char* tf_channel(const std::string& tf) {
  return tf == "hf" ? "line pressure" : "output force";
}

RationalTF tf_by_name(const ActuationLineParams& p, const LoadImpedance& z,
                      const std::string& tf) {
  return tf == "hf" ? build_HF(p, z) : build_HP(p, z);
}

std::vector<std::string> tf_list(const std::string& tf) {
  if (tf == "both") return {"hf", "hp"};
  return {tf};
}

// bode -----------------------------------------------------------------------

struct BodeArgs {
  std::string tf = "both";
  std::string load;
  double fmin = 0.01;
  double fmax = 1000.0;
  std::size_t points = 500;
  std::string out;
};

Outcome cmd_bode(const Invocation& inv, const BodeArgs& a) {
  if (!(a.fmin < a.fmax)) throw std::invalid_argument("--fmin must be below --fmax");
  if (a.points < 2) throw std::invalid_argument("--points must be >= 2");
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  Outcome o;
  o.resolved = resolved;
  Row columns{"freq_hz"};
  std::vector<BodeTable> tables;
  const auto names = tf_list(a.tf);
  for (const auto& name : names) {
    const auto g = tf_by_name(resolved.line, resolved.load, name);
    tables.push_back(bode(g, a.fmin, a.fmax, a.points));
    if (names.size() == 1) {
      columns.insert(columns.end(), {"mag_db", "phase_deg"});
    } else {
      columns.insert(columns.end(), {name + "_mag_db", name + "_phase_deg"});
    }
    o.summary.push_back("bode " + name + " " + tf_label(name) + " (" + tf_channel(name) +
                        "), load " + resolved.load.describe() + ": " +
                        std::to_string(a.points) + " points, DC gain " +
                        short_num(tables.back().reference_gain) + " N/A");
  }
  std::vector<Row> rows;
  for (std::size_t i = 0; i < a.points; ++i) {
    Row r{num(tables.front().rows[i].hz)};
    for (const auto& t : tables) {
      r.push_back(num(t.rows[i].magnitude_db));
      r.push_back(num(t.rows[i].phase_deg));
    }
    rows.push_back(std::move(r));
  }
  emit_table(o, a.out, csv(inv, resolved, columns, rows));
  return o;
}

// bandwidth ------------------------------------------------------------------

struct LoadArgs {
  std::string load;
  std::string out;
};

Outcome cmd_bandwidth(const Invocation& inv, const LoadArgs& a) {
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  Outcome o;
  o.resolved = resolved;
  std::vector<Row> rows;
  std::string line = "bandwidth (" + resolved.load.describe() + "):";
  for (const std::string name : {"hf", "hp"}) {
    const auto g = tf_by_name(resolved.line, resolved.load, name);
    const auto bw = bandwidth_3db(g);
    const std::string value = bw ? num(*bw) : "inf";
    rows.push_back({name, tf_label(name), tf_channel(name), value, num(g.dc_gain())});
    line += std::string(" ") + name + " " + tf_label(name) + " = " +
            (bw ? short_num(*bw) + " Hz" : std::string("none below 1000 Hz")) + " (" +
            tf_channel(name) + ")" + (name == "hf" ? ";" : "");
  }
  o.summary.push_back(line);
  emit_table(o, a.out,
             csv(inv, resolved, {"tf", "form", "channel", "bandwidth_hz", "dc_gain"}, rows));
  return o;
}

// poles ----------------------------------------------------------------------

struct PolesArgs {
  std::string tf = "both";
  std::string load;
  std::string out;
};

Outcome cmd_poles(const Invocation& inv, const PolesArgs& a) {
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  Outcome o;
  o.resolved = resolved;
  std::vector<Row> rows;
  for (const auto& name : tf_list(a.tf)) {
    const auto g = tf_by_name(resolved.line, resolved.load, name);
    const auto poles = g.poles();
    const auto zeros = g.zeros();
    for (const auto& p : poles) rows.push_back({name, "pole", num(p.real()), num(p.imag())});
    for (const auto& z : zeros) rows.push_back({name, "zero", num(z.real()), num(z.imag())});
    double slowest = -INFINITY;
    for (const auto& p : poles) slowest = std::max(slowest, p.real());
    o.summary.push_back("poles " + name + " (" + resolved.load.describe() + "): " +
                        std::to_string(poles.size()) + " poles, " +
                        std::to_string(zeros.size()) + " zeros, max real part " +
                        short_num(slowest));
  }
  emit_table(o, a.out, csv(inv, resolved, {"tf", "kind", "re", "im"}, rows));
  return o;
}

// rootlocus ------------------------------------------------------------------

struct LocusArgs {
  std::string loop = "pressure";
  std::string load;
  std::size_t points = 200;
  std::string out;
};

Channel channel_by_name(const std::string& name) {
  return name == "force" ? Channel::Force : Channel::Pressure;
}

Outcome cmd_rootlocus(const Invocation& inv, const LocusArgs& a) {
  if (a.points < 2) throw std::invalid_argument("--points must be >= 2");
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  const auto g = channel_tf(resolved.line, resolved.load, channel_by_name(a.loop));
  const auto k_star = max_stable_gain(g);
  const auto gains = k_star ? log_grid(1e-3 * *k_star, 10 * *k_star, a.points)
                            : log_grid(1e-3, 1e3, a.points);
  const auto trace = root_locus(g, gains);
  if (trace.error) throw NumericError("root locus: " + *trace.error);
  std::vector<Row> rows;
  for (const auto& pt : trace.points) {
    for (const auto& p : pt.poles) rows.push_back({num(pt.gain), num(p.real()), num(p.imag())});
  }
  Outcome o;
  o.resolved = resolved;
  o.summary.push_back("rootlocus " + a.loop + " loop (" + resolved.load.describe() + "): " +
                      std::to_string(trace.points.size()) + " gains, max stable gain " +
                      (k_star ? short_num(*k_star) + " A/N" : std::string("unbounded")));
  emit_table(o, a.out, csv(inv, resolved, {"gain", "pole_re", "pole_im"}, rows));
  return o;
}

// frf ------------------------------------------------------------------------

struct FrfArgs {
  std::string channel = "force";
  std::string load;
  double duration = 60.0;
  std::size_t points = 200;
  std::string out;
};

Outcome cmd_frf(const Invocation& inv, const FrfArgs& a) {
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  auto chirp = default_frf_chirp();
  chirp.duration = a.duration;
  FrfOptions opt;
  opt.points = a.points;
  const Channel ch = channel_by_name(a.channel);
  const auto est = estimate_frf(resolved.line, resolved.load, chirp, ch, opt);
  const auto g = channel_tf(resolved.line, resolved.load, ch);
  std::vector<Row> rows;
  double worst = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto model = g.at_hz(est.hz[i]);
    const auto m = est.value[i];
    rows.push_back({num(est.hz[i]), num(std::abs(m)), num(std::arg(m) * 180 / std::numbers::pi),
                    num(std::abs(model)), num(std::arg(model) * 180 / std::numbers::pi)});
    if (est.hz[i] >= 0.5 && est.hz[i] <= 50)
      worst = std::max(worst, std::abs(std::abs(m / model) - 1));
  }
  Outcome o;
  o.resolved = resolved;
  o.summary.push_back("frf " + a.channel + " (" + resolved.load.describe() + "): " +
                      std::to_string(est.size()) + " points on [" + short_num(est.hz.front()) +
                      ", " + short_num(est.hz.back()) + "] Hz, max magnitude deviation " +
                      short_num(100 * worst) + " % from the model over 0.5-50 Hz");
  emit_table(o, a.out,
             csv(inv, resolved,
                 {"freq_hz", "mag", "phase_deg", "model_mag", "model_phase_deg"}, rows));
  return o;
}

// derive-params --------------------------------------------------------------

struct DeriveArgs {
  std::optional<double> length;
  std::optional<double> diameter;
  std::optional<double> density;
  std::optional<double> area;
  std::string out;
};

Outcome cmd_derive(const Invocation& inv, const DeriveArgs& a) {
  Config resolved = inv.config;
  auto& g = resolved.geometry;
  if (a.length) g.hose_length = *a.length;
  if (a.diameter) g.hose_inner_diameter = *a.diameter;
  if (a.density) g.fluid_density = *a.density;
  if (a.area) g.cylinder_area = *a.area;
  g.validate();
  const double m2 = derive_hydraulic_mass(g);
  Outcome o;
  o.resolved = resolved;
  o.summary.push_back("m2 = " + short_num(m2) + " kg (hose " + short_num(g.hose_length) +
                      " m x " + short_num(1e3 * g.hose_inner_diameter) + " mm, fluid " +
                      short_num(g.fluid_density) + " kg/m^3, cylinder " +
                      short_num(1e6 * g.cylinder_area) + " mm^2)");
  if (!a.out.empty()) {
    emit_table(o, a.out,
               csv(inv, resolved,
                   {"hose_length_m", "hose_diameter_m", "fluid_density", "cylinder_area_m2",
                    "m2_kg"},
                   {{num(g.hose_length), num(g.hose_inner_diameter), num(g.fluid_density),
                     num(g.cylinder_area), num(m2)}}));
  }
  return o;
}

// simulate / compare ---------------------------------------------------------

struct SimArgs {
  std::string controller = "open";
  std::string signal = "step";
  std::string load;
  std::optional<double> duration;
  std::optional<double> kp;
  std::optional<double> ki;
  std::uint64_t seed = MultisineDisturbance{}.seed;
  std::string out;
};

std::vector<Row> trace_rows(const SimResult& r) {
  std::vector<Row> rows;
  rows.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    rows.push_back({num(r.time[i]), num(r.reference[i]), num(r.current[i]), num(r.f_mr[i]),
                    num(r.pressure[i]), num(r.force[i]), num(r.disturbance[i])});
  }
  return rows;
}

const Row kTraceColumns{"t",        "reference", "current",    "f_mr",
                        "pressure", "force",     "disturbance"};

ControllerConfig make_controller(const ActuationLineParams& p, const LoadImpedance& z,
                                 const SimArgs& a, std::string& note) {
  if (a.controller == "open") return ControllerConfig::open_loop(p);
  const Channel ch = a.controller == "force-pi" ? Channel::Force : Channel::Pressure;
  double kp = 0, ki = 0;
  if (a.kp && a.ki) {
    kp = *a.kp;
    ki = *a.ki;
    note = "given gains";
  } else {
    const auto t = tune_pi(p, z, ch);
    kp = a.kp.value_or(t.kp);
    ki = a.ki.value_or(t.ki);
    note = "tuned gains (GM " + short_num(t.margins.gain_margin_db) + " dB, PM " +
           short_num(t.margins.phase_margin_deg) + " deg)";
  }
  return ch == Channel::Force ? ControllerConfig::force_pi(p, kp, ki)
                              : ControllerConfig::pressure_pi(p, kp, ki);
}

std::string metric_summary(const Metrics& m) {
  return "rise " + short_num(1e3 * m.rise_time_10_90) + " ms, rms " +
         short_num(m.rms_tracking_error) + " N, overshoot " + short_num(100 * m.overshoot) +
         " %, oscillation " + short_num(m.oscillation_index);
}

Outcome cmd_simulate(const Invocation& inv, const SimArgs& a) {
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  const auto& p = resolved.line;
  const auto& z = resolved.load;
  std::string note;
  const auto ctrl = make_controller(p, z, a, note);

  Outcome o;
  o.resolved = resolved;
  SimResult run;
  std::vector<Row> metrics;
  std::string line = "simulate " + ctrl.describe() + " on " + a.signal +
                     (note.empty() ? std::string(": ") : " (" + note + "): ");
  if (a.signal == "drill") {
    DrillingOptions opt;
    opt.disturbance.seed = a.seed;
    if (a.duration) opt.duration = *a.duration;
    auto d = drilling_scenario(p, z, ctrl, opt);
    run = std::move(d.run);
    metrics = {{"peak_deviation_n", num(d.peak_deviation)},
               {"open_loop_peak_deviation_n", num(d.open_loop_peak_deviation)},
               {"disturbance_amplitude_n", num(d.disturbance_amplitude)},
               {"level_n", num(opt.level)}};
    line += "peak deviation " + short_num(d.peak_deviation) + " N around " +
            short_num(opt.level) + " N (open loop " + short_num(d.open_loop_peak_deviation) +
            " N)";
  } else {
    SignalSpec sig;
    if (a.signal == "step") sig = StepSignal{};
    else if (a.signal == "chirp") sig = LogChirpSignal{};
    else sig = MixedSignal{};
    const double duration = a.duration.value_or(natural_duration(sig));
    run = run_simulation(p, z, ctrl, sig, duration);
    if (a.signal == "chirp") {
      const double rms = rms_error(run.reference, run.force);
      metrics = {{"rms_tracking_error_n", num(rms)}};
      line += "rms " + short_num(rms) + " N";
    } else {
      const double t0 = a.signal == "step" ? StepSignal{}.t0 : MixedSignal{}.step.t0;
      const auto m = measure_metrics(run, {t0 - 0.1, run.time.back()});
      metrics = {{"rise_time_10_90_s", num(m.rise_time_10_90)},
                 {"rms_tracking_error_n", num(m.rms_tracking_error)},
                 {"overshoot", num(m.overshoot)},
                 {"oscillation_index", num(m.oscillation_index)},
                 {"final_force_n", num(run.force.back())},
                 {"final_reference_n", num(run.reference.back())}};
      line += metric_summary(m) + ", final force " + short_num(run.force.back()) + " N";
    }
  }
  o.summary.push_back(line);
  const auto trace = csv(inv, resolved, kTraceColumns, trace_rows(run));
  emit_table(o, a.out, trace);
  if (!a.out.empty()) {
    o.files.push_back({sibling(a.out, ".metrics.csv"),
                       csv(inv, resolved, {"metric", "value"}, metrics)});
  }
  return o;
}

struct CompareArgs {
  std::string signal = "mixed";
  std::string load;
  std::string out_dir = ".";
};

Outcome cmd_compare(const Invocation& inv, const CompareArgs& a) {
  Config resolved = inv.config;
  resolved.load = pick_load(inv.config, a.load);
  const auto tuned = tuned_controllers(resolved.line, resolved.load);
  const auto runs = compare_controllers(resolved.line, resolved.load, tuned);
  const std::filesystem::path dir = a.out_dir;

  Outcome o;
  o.resolved = resolved;
  std::vector<Row> table;
  o.summary.push_back("controller    rise_ms  rms_n    overshoot_%  oscillation");
  for (const auto& e : runs) {
    const auto& m = e.metrics;
    double kp = 0, ki = 0;
    if (e.controller == "force-pi") {
      kp = tuned.force.kp;
      ki = tuned.force.ki;
    } else if (e.controller == "pressure-pi") {
      kp = tuned.pressure.kp;
      ki = tuned.pressure.ki;
    }
    table.push_back({e.controller, num(m.rise_time_10_90), num(m.rms_tracking_error),
                     num(m.overshoot), num(m.oscillation_index), num(kp), num(ki)});
    std::ostringstream s;
    s << std::left << std::setw(13) << e.controller << ' ' << std::setw(8)
      << short_num(1e3 * m.rise_time_10_90) << ' ' << std::setw(8)
      << short_num(m.rms_tracking_error) << ' ' << std::setw(12)
      << short_num(100 * m.overshoot) << ' ' << short_num(m.oscillation_index);
    o.summary.push_back(s.str());
    o.files.push_back({dir / ("compare_" + e.controller + ".csv"),
                       csv(inv, resolved, kTraceColumns, trace_rows(e.run))});
  }
  o.files.insert(o.files.begin(),
                 {dir / "compare_metrics.csv",
                  csv(inv, resolved,
                      {"controller", "rise_time_10_90_s", "rms_tracking_error_n", "overshoot",
                       "oscillation_index", "kp", "ki"},
                      table)});
  o.manifest = dir / "compare_manifest.json";
  return o;
}

std::string quote_arg(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t\"'") == std::string::npos) return s;
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis and simulation of an MR-clutch hydrostatic actuation line",
               "mrhydro"};
  app.set_version_flag("--version", MRHYDRO_VERSION);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 std::string("Config file (default: $") + kConfigEnv + " or built-in values)");

  const auto load_values = CLI::IsMember({"blocked", "compliant"});

  BodeArgs bode_args;
  auto* bode_cmd = app.add_subcommand("bode", "Bode table of the line transfers");
  bode_cmd->add_option("--tf", bode_args.tf, "hf, hp or both")
      ->check(CLI::IsMember({"hf", "hp", "both"}));
  bode_cmd->add_option("--load", bode_args.load)->check(load_values);
  bode_cmd->add_option("--fmin", bode_args.fmin, "Hz")->check(CLI::PositiveNumber);
  bode_cmd->add_option("--fmax", bode_args.fmax, "Hz")->check(CLI::PositiveNumber);
  bode_cmd->add_option("--points", bode_args.points);
  bode_cmd->add_option("--out", bode_args.out, "CSV path (default: stdout)");

  LoadArgs bw_args;
  auto* bw_cmd = app.add_subcommand("bandwidth", "-3 dB bandwidth of both transfers");
  bw_cmd->add_option("--load", bw_args.load)->check(load_values);
  bw_cmd->add_option("--out", bw_args.out);

  PolesArgs poles_args;
  auto* poles_cmd = app.add_subcommand("poles", "Poles and zeros of the line transfers");
  poles_cmd->add_option("--tf", poles_args.tf)->check(CLI::IsMember({"hf", "hp", "both"}));
  poles_cmd->add_option("--load", poles_args.load)->check(load_values);
  poles_cmd->add_option("--out", poles_args.out);

  LocusArgs locus_args;
  auto* locus_cmd = app.add_subcommand("rootlocus", "Root locus under proportional feedback");
  locus_cmd->add_option("--loop", locus_args.loop, "force or pressure")
      ->check(CLI::IsMember({"force", "pressure"}));
  locus_cmd->add_option("--load", locus_args.load)->check(load_values);
  locus_cmd->add_option("--points", locus_args.points);
  locus_cmd->add_option("--out", locus_args.out);

  FrfArgs frf_args;
  auto* frf_cmd = app.add_subcommand("frf", "Chirp frequency-response estimate from simulation");
  frf_cmd->add_option("--channel", frf_args.channel)->check(CLI::IsMember({"force", "pressure"}));
  frf_cmd->add_option("--load", frf_args.load)->check(load_values);
  frf_cmd->add_option("--duration", frf_args.duration, "chirp length, s")
      ->check(CLI::PositiveNumber);
  frf_cmd->add_option("--points", frf_args.points);
  frf_cmd->add_option("--out", frf_args.out);

  DeriveArgs derive_args;
  auto* derive_cmd = app.add_subcommand("derive-params", "Hydraulic mass from hose geometry");
  derive_cmd->add_option("--hose-length", derive_args.length, "m");
  derive_cmd->add_option("--hose-diameter", derive_args.diameter, "m");
  derive_cmd->add_option("--fluid-density", derive_args.density, "kg/m^3");
  derive_cmd->add_option("--cylinder-area", derive_args.area, "m^2");
  derive_cmd->add_option("--out", derive_args.out);

  SimArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Time-domain run of one controller");
  sim_cmd->add_option("--controller", sim_args.controller)
      ->check(CLI::IsMember({"open", "force-pi", "pressure-pi"}));
  sim_cmd->add_option("--signal", sim_args.signal)
      ->check(CLI::IsMember({"step", "chirp", "mixed", "drill"}));
  sim_cmd->add_option("--load", sim_args.load)->check(load_values);
  sim_cmd->add_option("--duration", sim_args.duration, "s")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--kp", sim_args.kp, "A/N")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--ki", sim_args.ki, "A/(N s)")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--seed", sim_args.seed, "disturbance seed");
  sim_cmd->add_option("--out", sim_args.out);

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "Open loop, force PI and pressure PI side by side");
  cmp_cmd->add_option("--signal", cmp_args.signal)->check(CLI::IsMember({"mixed"}));
  cmp_cmd->add_option("--load", cmp_args.load)->check(load_values);
  cmp_cmd->add_option("--out-dir", cmp_args.out_dir);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    Invocation inv;
    for (const auto& a : args) {
      if (!inv.command_line.empty()) inv.command_line += ' ';
      inv.command_line += quote_arg(a);
    }
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    }
    inv.config = config_path.empty() ? Config{} : load_config(config_path);
    inv.config_source = config_path.empty() ? "defaults" : config_path;
    inv.config_digest = sha256_hex(save_config(inv.config));
    inv.run_id = sha256_hex(inv.command_line + "\n" + inv.config_digest).substr(0, 16);

    Outcome o;
    if (*bode_cmd) o = cmd_bode(inv, bode_args);
    else if (*bw_cmd) o = cmd_bandwidth(inv, bw_args);
    else if (*poles_cmd) o = cmd_poles(inv, poles_args);
    else if (*locus_cmd) o = cmd_rootlocus(inv, locus_args);
    else if (*frf_cmd) o = cmd_frf(inv, frf_args);
    else if (*derive_cmd) o = cmd_derive(inv, derive_args);
    else if (*sim_cmd) o = cmd_simulate(inv, sim_args);
    else o = cmd_compare(inv, cmp_args);

    auto files = o.files;
    if (o.manifest) files.push_back({*o.manifest, manifest_json(inv, o.resolved, o.files)});
    commit(files);
    std::ostream& summary = o.stdout_csv ? err : out;
    for (const auto& line : o.summary) summary << line << '\n';
    if (o.stdout_csv) out << *o.stdout_csv;
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsageError;
  } catch (const SimulationError& e) {
    err << "simulation diverged at t = " << format_significant(e.time(), 6)
        << " s: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace mrhydro::cli
