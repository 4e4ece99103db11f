#include "ramzi/cli.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ramzi/config.hpp"
#include "ramzi/errors.hpp"
#include "ramzi/prbs.hpp"
#include "ramzi/reports.hpp"
#include "ramzi/simd/kernels.hpp"
#include "ramzi/transient.hpp"

namespace ramzi {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Common {
  std::string config = "default";
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "'default' or a JSON config path")->capture_default_str();
  sub->add_option("--out", c.out, "Output directory (overrides output_dir)");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config == "default" ? default_config() : load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (cfg.link.calibrate_noise_bandwidth)
    cfg.link.link.noise_bandwidth_factor =
        calibrate_noise_bandwidth(cfg.link.link, cfg.link.anchor_power_dbm, Format::Roq16, 200.0,
                                  cfg.link.target_ber);
  return cfg;
}

// Collects written files for the success report.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  const fs::path& dir() const { return dir_; }
  void write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    write_text(p, text);
    files_.push_back(p.string());
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::vector<double> power_grid(const LinkSection& l) {
  std::vector<double> p;
  const auto n = static_cast<std::size_t>(std::floor((l.power_max_dbm - l.power_min_dbm) / l.power_step_dbm + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) p.push_back(l.power_min_dbm + static_cast<double>(k) * l.power_step_dbm);
  return p;
}

PhaseNoiseSpec phase_noise_of(const ExperimentConfig& c) {
  return {c.link.phase_noise.linewidth_mhz, c.link.phase_noise.path_mismatch_cm,
          c.link.phase_noise.group_index};
}

DriveWaveform waveform_of(const ExperimentConfig& c, const DriveLevelTable& table) {
  return generate_prbs_drive(c.transient.prbs_order, c.transient.baud_gbd, table,
                             c.transient.rise_fall_fraction, c.transient.eo_bandwidth_ghz);
}

EyeOptions eye_options_of(const ExperimentConfig& c) {
  EyeOptions o;
  o.samples_per_ui = c.transient.samples_per_ui;
  o.phase_budget_deg = c.tuner.phase_budget_deg;
  return o;
}

int bits_of(int levels) {
  int b = 0;
  while ((1 << b) < levels) ++b;
  return b;
}

json cmd_tune(const ExperimentConfig& c, Artifacts& a, std::optional<double> operating_power) {
  std::vector<SweepSurfacePoint> surface;
  const BiasSolution s = tune_static(ramzi_template(c), c.tuner, &surface);
  a.write("sweep_surface.csv", sweep_surface_csv(surface));
  a.write("drive_table.csv", drive_table_csv(s.drive_table));
  a.write("bias.json", dump_config(with_bias(c, s)));
  json j = {{"detuning_offset_pm", s.detuning_offset_pm},
            {"phi_ps_rad", s.phi_ps},
            {"heater_top_mw", s.heater_top_mw},
            {"heater_bottom_mw", s.heater_bottom_mw},
            {"oma_e", s.achieved_oma_e},
            {"offset", s.achieved_offset},
            {"phase_error_deg", s.achieved_phase_error_deg}};
  if (operating_power) {
    const BiasSolution r = retune_at_power(s, *operating_power, c.retune);
    a.write("retune.json", retune_json(s, r));
    j["retune_heater_top_mw"] = r.heater_top_mw;
    j["retune_heater_bottom_mw"] = r.heater_bottom_mw;
  }
  return j;
}

json cmd_levels(const ExperimentConfig& c, Artifacts& a) {
  const BiasSolution s = resolve_bias(c);
  const DriveLevelTable t = find_drive_levels(s.config, c.tuner.levels);
  a.write("drive_table.csv", drive_table_csv(t));
  a.write("drive_table.json", drive_table_json(t));
  return {{"levels", t.entries.size()},
          {"spacing_residual_fraction", t.spacing_residual},
          {"phase_spread_deg", phase_spread(s.config, t) * kRadToDeg}};
}

json cmd_eye(const ExperimentConfig& c, Artifacts& a) {
  const BiasSolution s = resolve_bias(c);
  const DriveWaveform w = waveform_of(c, s.drive_table);
  const EyeResult e = simulate_eye(s.config, w, eye_options_of(c));
  a.write("eye_amplitude.csv", eye_trace_csv(e.amplitude, "amplitude_field"));
  a.write("eye_phase.csv", eye_trace_csv(e.phase, "phase_deg"));
  a.write("eye_metrics.json", eye_metrics_json(e.metrics, w.baud_gbd, w.eo_bandwidth_ghz));
  return {{"oma_e", e.metrics.oma_e},
          {"phase_error_deg", e.metrics.phase_error_deg},
          {"levels_resolvable", e.metrics.levels_resolvable}};
}

json cmd_constellation(const ExperimentConfig& c, Artifacts& a) {
  const BiasSolution s = resolve_bias(c);
  const Constellation k = build_constellation(s.config, s.config, s.drive_table, s.drive_table);
  a.write("constellation.csv",
          constellation_csv(k, bits_of(static_cast<int>(s.drive_table.entries.size()))));
  return {{"points", k.points.size()},
          {"offset_re", k.offset.real()},
          {"offset_im", k.offset.imag()},
          {"oma_e_per_dimension", k.oma_e_per_dimension}};
}

json cmd_thermal(const ExperimentConfig& c, Artifacts& a, bool onset) {
  const MrmModel m = device_model(c);
  const ThermalSection& t = c.thermal;
  const SweepOptions opt = sweep_options(c);
  SweepResult r = sweep_and_diagnose(m, t.input_power_dbm, t.p_min_mw, t.p_max_mw, t.duration_s,
                                     t.drive_rate_hz, opt);
  if (onset)
    r.report.onset_power_dbm = find_instability_onset(m, t.onset_search_lo_dbm, t.onset_search_hi_dbm,
                                                      t.p_min_mw, t.p_max_mw, t.duration_s,
                                                      t.drive_rate_hz, opt);
  a.write("thermal_traces.csv", thermal_traces_csv(r));
  a.write("stability.json", stability_json(r.report, t.input_power_dbm));
  json j = {{"bistable", r.report.bistable}, {"metastable", r.report.metastable}};
  if (r.report.onset_power_dbm) j["onset_power_dbm"] = *r.report.onset_power_dbm;
  return j;
}

json cmd_ber(const ExperimentConfig& c, Artifacts& a, bool phase_noise) {
  const LinkConfig& l = c.link.link;
  std::optional<PhaseNoiseSpec> pn;
  if (phase_noise) {
    if (architecture_of(l.format) != Architecture::Coherent)
      throw ValidationError("link.format", "phase noise applies to coherent formats only");
    pn = phase_noise_of(c);
  }
  const BerCurve curve = ber_curve(l, power_grid(c.link), pn);
  a.write("ber.csv", ber_curves_csv({curve}));
  json j = {{"format", std::string(to_string(l.format))},
            {"datarate_gbps", l.datarate_gbps},
            {"noise_bandwidth_factor", l.noise_bandwidth_factor}};
  double audit_power = c.link.power_max_dbm;
  try {
    const double req = required_power(l, c.link.target_ber, pn);
    j["required_power_dbm"] = req;
    j["energy_fj_per_bit"] = laser_energy_fj_per_bit(req, l.datarate_gbps);
    audit_power = req;
  } catch (const InfeasibleError&) {
    j["required_power_dbm"] = nullptr;
  }
  a.write("link_audit.csv", audit_csv(signal_chain(l, audit_power)));
  a.write("ber_summary.json", j.dump(2) + "\n");
  return j;
}

json cmd_compare(const ExperimentConfig& c, Artifacts& a, const std::vector<double>& rates,
                 bool phase_noise) {
  std::vector<Comparison> runs;
  std::vector<BerCurve> curves;
  const auto grid = power_grid(c.link);
  for (double r : rates) {
    auto pn = phase_noise ? std::optional<PhaseNoiseSpec>(phase_noise_of(c)) : std::nullopt;
    runs.push_back(compare_formats(c.link.link, r, grid, pn, c.link.target_ber));
    curves.insert(curves.end(), runs.back().curves.begin(), runs.back().curves.end());
  }
  a.write("compare_ber.csv", ber_curves_csv(curves));
  a.write("compare_summary.json", comparison_json(runs, c.link.target_ber));
  return json::parse(comparison_json(runs, c.link.target_ber));
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

json cmd_reproduce(ExperimentConfig c, Artifacts& a, std::vector<Check>& checks) {
  const double beta = calibrate_noise_bandwidth(c.link.link, c.link.anchor_power_dbm, Format::Roq16,
                                                200.0, c.link.target_ber);
  c.link.link.noise_bandwidth_factor = beta;

  // Tune and levels.
  std::vector<SweepSurfacePoint> surface;
  const BiasSolution s = tune_static(ramzi_template(c), c.tuner, &surface);
  a.write("tune/sweep_surface.csv", sweep_surface_csv(surface));
  a.write("tune/drive_table.csv", drive_table_csv(s.drive_table));
  a.write("tune/bias.json", dump_config(with_bias(c, s)));
  const double spread = phase_spread(s.config, s.drive_table) * kRadToDeg;
  checks.push_back({"phase constancy over the drive table", spread < 3.0,
                    "spread " + fmt(spread, 6) + " deg, budget 3 deg"});
  {
    const double want[4] = {0.08, 0.293, 0.507, 0.72};
    bool ok = s.achieved_oma_e >= 0.60 && s.drive_table.entries.size() == 4;
    std::string d = "OMA_E " + fmt(s.achieved_oma_e) + ", levels";
    for (std::size_t k = 0; k < s.drive_table.entries.size() && k < 4; ++k) {
      const double v = s.drive_table.entries[k].field_level;
      ok = ok && std::abs(v - want[k]) <= 0.05;
      d += " " + fmt(v);
    }
    checks.push_back({"OMA_E and field levels", ok, d + " (targets 0.08/0.293/0.507/0.72 +-0.05)"});
  }

  // Eye.
  DriveWaveform w = waveform_of(c, s.drive_table);
  w.baud_gbd = 50.0;
  w.eo_bandwidth_ghz = 35.0;
  const EyeResult eye = simulate_eye(s.config, w, eye_options_of(c));
  a.write("eye/eye_amplitude.csv", eye_trace_csv(eye.amplitude, "amplitude_field"));
  a.write("eye/eye_phase.csv", eye_trace_csv(eye.phase, "phase_deg"));
  a.write("eye/eye_metrics.json", eye_metrics_json(eye.metrics, w.baud_gbd, w.eo_bandwidth_ghz));
  {
    DriveWaveform ideal = w;
    ideal.eo_bandwidth_ghz = std::numeric_limits<double>::infinity();
    const EyeResult flat = simulate_eye(s.config, ideal, eye_options_of(c));
    double dev = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& e = s.drive_table.entries[k];
      dev = std::max(dev, std::abs(flat.metrics.sampled_levels[k] - std::abs(ramzi_output(s.config, e.v_top, e.v_bottom))));
    }
    const bool ok = eye.metrics.levels_resolvable && eye.metrics.phase_error_deg < 3.0 && dev <= 1e-9;
    checks.push_back({"50 GBd eye at 35 GHz", ok,
                      std::string("levels ") + (eye.metrics.levels_resolvable ? "resolvable" : "merged") +
                          ", centre phase spread " + fmt(eye.metrics.phase_error_deg) +
                          " deg, ideal-bandwidth deviation " + format_number(dev)});
  }

  // Link.
  const auto grid = power_grid(c.link);
  std::vector<Comparison> plain, noisy;
  std::vector<BerCurve> curves;
  const PhaseNoiseSpec pn = phase_noise_of(c);
  for (double r : {200.0, 400.0}) {
    plain.push_back(compare_formats(c.link.link, r, grid, std::nullopt, c.link.target_ber));
    noisy.push_back(compare_formats(c.link.link, r, grid, pn, c.link.target_ber));
    curves.insert(curves.end(), plain.back().curves.begin(), plain.back().curves.end());
    curves.insert(curves.end(), noisy.back().curves.begin(), noisy.back().curves.end());
  }
  a.write("link/compare_ber.csv", ber_curves_csv(curves));
  std::vector<Comparison> all = plain;
  all.insert(all.end(), noisy.begin(), noisy.end());
  a.write("link/compare_summary.json", comparison_json(all, c.link.target_ber));
  auto req = [](const Comparison& cmp, Format f) {
    return cmp.required(f).value_or(std::numeric_limits<double>::quiet_NaN());
  };
  {
    const double p400 = req(plain[1], Format::Roq16);
    checks.push_back({"ROQ16 400G anchor after calibration", std::abs(p400 - 9.65) <= 0.5,
                      "beta " + format_number(beta) + ", required " + fmt(p400) + " dBm (9.65 +-0.5)"});
  }
  {
    bool ok = true;
    std::string d;
    const double gap_want[2] = {5.3, 7.7};
    for (std::size_t i = 0; i < 2; ++i) {
      const Comparison& cmp = plain[i];
      const double roq = req(cmp, Format::Roq16);
      const double gap = req(cmp, Format::MrmPam4) - roq;
      const double qam = std::abs(roq - req(cmp, Format::MziQam16));
      Format best = Format::Roq16;
      for (Format f : kAllFormats)
        if (req(cmp, f) < req(cmp, best)) best = f;
      ok = ok && std::abs(gap - gap_want[i]) <= 1.5 && qam <= 1.0 && best == Format::MziQam4;
      d += (i ? "; " : "") + fmt(cmp.datarate_gbps, 0) + "G: MRM-ROQ " + fmt(gap) + " dB (" +
           fmt(gap_want[i], 1) + " +-1.5), |ROQ-QAM16| " + fmt(qam) + " dB, min " +
           std::string(to_string(best));
    }
    checks.push_back({"relative format gaps", ok, d});
  }
  {
    const double roq = req(noisy[0], Format::Roq16), qam = req(noisy[0], Format::MziQam16);
    const double pen_roq = roq - req(plain[0], Format::Roq16);
    const double pen_qam = qam - req(plain[0], Format::MziQam16);
    const double gap400 = std::abs(req(noisy[1], Format::Roq16) - req(noisy[1], Format::MziQam16));
    checks.push_back({"phase-noise penalty at 200G", std::abs(roq - qam) <= 2.0 && pen_roq >= pen_qam,
                      "|ROQ-QAM16| " + fmt(std::abs(roq - qam)) + " dB (<= 2), penalty ROQ16 " +
                          fmt(pen_roq) + " dB vs QAM16 " + fmt(pen_qam) + " dB; 400G gap " +
                          fmt(gap400) + " dB"});
  }
  {
    bool ok = true;
    std::string d;
    for (std::size_t i = 0; i < 2; ++i) {
      const double e = laser_energy_fj_per_bit(req(plain[i], Format::Roq16), plain[i].datarate_gbps);
      ok = ok && std::abs(e / 280.0 - 1.0) <= 0.3;
      d += (i ? ", " : "") + fmt(plain[i].datarate_gbps, 0) + "G " + fmt(e, 1) + " fJ/b";
    }
    checks.push_back({"laser energy per bit", ok, d + " (280 +-30%)"});
  }

  // Thermal.
  {
    const MrmModel m = device_model(c);
    const ThermalSection& t = c.thermal;
    const SweepOptions opt = sweep_options(c);
    const SweepResult at_m5 = sweep_and_diagnose(m, -5.0, t.p_min_mw, t.p_max_mw, t.duration_s, t.drive_rate_hz, opt);
    const SweepResult at_p5 = sweep_and_diagnose(m, 5.0, t.p_min_mw, t.p_max_mw, t.duration_s, t.drive_rate_hz, opt);
    a.write("thermal/thermal_traces_m5dbm.csv", thermal_traces_csv(at_m5));
    a.write("thermal/thermal_traces_p5dbm.csv", thermal_traces_csv(at_p5));
    StabilityReport rep = at_m5.report;
    rep.onset_power_dbm = find_instability_onset(m, t.onset_search_lo_dbm, t.onset_search_hi_dbm, t.p_min_mw,
                                                 t.p_max_mw, t.duration_s, t.drive_rate_hz, opt);
    a.write("thermal/stability.json", stability_json(rep, -5.0));
    const bool stable_m5 = !at_m5.report.bistable && !at_m5.report.metastable;
    const bool unstable_p5 = at_p5.report.bistable || at_p5.report.metastable;
    const bool ok = stable_m5 && unstable_p5 && rep.onset_power_dbm && *rep.onset_power_dbm > -5.0 &&
                    *rep.onset_power_dbm <= 5.0;
    checks.push_back({"thermal stability boundary", ok,
                      std::string("-5 dBm ") + (stable_m5 ? "stable" : "unstable") + ", +5 dBm " +
                          (unstable_p5 ? "unstable" : "stable") + ", onset " +
                          (rep.onset_power_dbm ? fmt(*rep.onset_power_dbm, 2) + " dBm" : "none")});
  }

  json list = json::array();
  for (const auto& k : checks) list.push_back({{"check", k.name}, {"pass", k.pass}, {"detail", k.detail}});
  a.write("summary.json", json({{"noise_bandwidth_factor", beta}, {"checks", list}}).dump(2) + "\n");
  return {{"checks", list}};
}

void report_error(std::ostream& err, int code, const std::string& type, const std::string& message,
                  const std::string& key = {}) {
  json j = {{"status", "error"}, {"exit_code", code}, {"type", type}, {"message", message}};
  if (!key.empty()) j["key"] = key;
  err << j.dump() << "\n";
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"RAMZI offset-QAM transmitter simulation toolkit", "ramzi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ramzi 1.0");
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel variant: auto, scalar or avx2")->capture_default_str();

  Common common;
  std::optional<double> operating_power;
  auto* tune = app.add_subcommand("tune", "Bias search; writes bias.json and the sweep surface");
  add_common(tune, common);
  tune->add_option("--operating-power-dbm", operating_power, "Also re-tune heaters at this ring input power");

  auto* levels = app.add_subcommand("levels", "Drive-level table for the configured bias");
  add_common(levels, common);

  std::optional<double> baud, eo_bw;
  std::optional<int> prbs;
  auto* eye = app.add_subcommand("eye", "PRBS eye diagram and metrics");
  add_common(eye, common);
  eye->add_option("--baud", baud, "Symbol rate (GBd)");
  eye->add_option("--eo-bandwidth-ghz", eo_bw, "EO bandwidth (GHz); inf disables the filter");
  eye->add_option("--prbs", prbs, "PRBS order (7, 15, 31)");

  auto* cons = app.add_subcommand("constellation", "Offset-QAM constellation points");
  add_common(cons, common);

  std::optional<double> power_dbm, duration_ms;
  std::vector<double> range_mw;
  bool onset = false;
  auto* thermal = app.add_subcommand("thermal-sweep", "Bidirectional heater sweep with stability report");
  add_common(thermal, common);
  thermal->add_option("--power-dbm", power_dbm, "Ring input power (dBm)");
  thermal->add_option("--range-mw", range_mw, "Heater range as MIN,MAX (mW)")->delimiter(',')->expected(2);
  thermal->add_option("--duration-ms", duration_ms, "Duration of each sweep direction (ms)");
  thermal->add_flag("--onset", onset, "Bisect the instability onset power");

  std::optional<std::string> format;
  std::optional<double> datarate, linewidth, mismatch, target_ber;
  bool phase_noise = false;
  auto* ber = app.add_subcommand("ber-sweep", "BER versus laser power for one format");
  add_common(ber, common);
  ber->add_option("--format", format, "MZI-PAM4, MZI-PAM8, MZI-QAM4, MZI-QAM16, MRM-PAM4 or ROQ16");
  ber->add_option("--datarate", datarate, "Line rate (Gb/s)");
  ber->add_flag("--phase-noise", phase_noise, "Average over laser phase noise");
  ber->add_option("--linewidth-mhz", linewidth, "Laser linewidth (MHz)");
  ber->add_option("--mismatch-cm", mismatch, "LO/signal path mismatch (cm)");
  ber->add_option("--target-ber", target_ber, "BER for the required-power figure");

  std::vector<double> rates{200.0, 400.0};
  auto* compare = app.add_subcommand("compare", "All six formats at one or more line rates");
  add_common(compare, common);
  compare->add_option("--datarate", rates, "Line rates (Gb/s)")->delimiter(',')->capture_default_str();
  compare->add_flag("--phase-noise", phase_noise, "Average coherent formats over phase noise");

  auto* repro = app.add_subcommand("reproduce-paper", "Full chain with a pass/fail summary");
  add_common(repro, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, kExitValidation, "UsageError", e.what());
    return kExitValidation;
  }

  try {
    if (simd == "scalar")
      simd::set_active_isa(simd::Isa::Scalar);
    else if (simd == "avx2")
      simd::set_active_isa(simd::Isa::Avx2);
    else if (simd != "auto")
      throw ValidationError("--simd", "must be auto, scalar or avx2");

    ExperimentConfig c = load(common);
    Artifacts art{fs::path(c.output_dir)};
    json result;
    std::string name = app.get_subcommands().front()->get_name();
    int code = kExitOk;
    if (tune->parsed()) {
      result = cmd_tune(c, art, operating_power);
    } else if (levels->parsed()) {
      result = cmd_levels(c, art);
    } else if (eye->parsed()) {
      if (baud) c.transient.baud_gbd = *baud;
      if (eo_bw) c.transient.eo_bandwidth_ghz = *eo_bw;
      if (prbs) c.transient.prbs_order = *prbs;
      if (!(c.transient.baud_gbd > 0.0)) throw ValidationError("--baud", "must be positive");
      if (!(c.transient.eo_bandwidth_ghz > 0.0)) throw ValidationError("--eo-bandwidth-ghz", "must be positive");
      result = cmd_eye(c, art);
    } else if (cons->parsed()) {
      result = cmd_constellation(c, art);
    } else if (thermal->parsed()) {
      if (power_dbm) c.thermal.input_power_dbm = *power_dbm;
      if (!range_mw.empty()) {
        if (!(range_mw[1] > range_mw[0]) || range_mw[0] < 0.0)
          throw ValidationError("--range-mw", "need 0 <= MIN < MAX");
        c.thermal.p_min_mw = range_mw[0];
        c.thermal.p_max_mw = range_mw[1];
      }
      if (duration_ms) {
        if (!(*duration_ms > 0.0)) throw ValidationError("--duration-ms", "must be positive");
        c.thermal.duration_s = *duration_ms * 1e-3;
      }
      result = cmd_thermal(c, art, onset);
    } else if (ber->parsed()) {
      if (format) c.link.link.format = format_from_string(*format);
      if (datarate) c.link.link.datarate_gbps = *datarate;
      if (linewidth) c.link.phase_noise.linewidth_mhz = *linewidth;
      if (mismatch) c.link.phase_noise.path_mismatch_cm = *mismatch;
      if (target_ber) c.link.target_ber = *target_ber;
      validate(c.link.link);
      if (!(c.link.target_ber > 0.0 && c.link.target_ber < 0.5))
        throw ValidationError("--target-ber", "must lie in (0, 0.5)");
      if (c.link.phase_noise.linewidth_mhz < 0.0) throw ValidationError("--linewidth-mhz", "must be non-negative");
      if (c.link.phase_noise.path_mismatch_cm < 0.0) throw ValidationError("--mismatch-cm", "must be non-negative");
      result = cmd_ber(c, art, phase_noise);
    } else if (compare->parsed()) {
      for (double r : rates)
        if (!(r > 0.0)) throw ValidationError("--datarate", "must be positive");
      result = cmd_compare(c, art, rates, phase_noise);
    } else if (repro->parsed()) {
      std::vector<Check> checks;
      result = cmd_reproduce(c, art, checks);
      for (const auto& k : checks) {
        if (!k.pass) code = kExitMismatch;
        err << (k.pass ? "PASS " : "FAIL ") << k.name << ": " << k.detail << "\n";
      }
    }
    json ok = {{"status", code == kExitOk ? "ok" : "mismatch"},
               {"command", name},
               {"simd", std::string(simd::isa_name(simd::active_isa()))},
               {"result", result},
               {"artifacts", art.files()}};
    out << ok.dump(2) << "\n";
    return code;
  } catch (const ValidationError& e) {
    report_error(err, kExitValidation, "ValidationError", e.what(), e.key());
    return kExitValidation;
  } catch (const InstabilityError& e) {
    report_error(err, kExitNumerical, "InstabilityError", e.what());
    return kExitNumerical;
  } catch (const InfeasibleError& e) {
    report_error(err, kExitNumerical, "InfeasibleError", e.what());
    return kExitNumerical;
  } catch (const NumericalError& e) {
    report_error(err, kExitNumerical, "NumericalError", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    report_error(err, kExitNumerical, "Error", e.what());
    return kExitNumerical;
  }
}

}  // namespace ramzi
