// Acceptance gate: one PASS/FAIL line per criterion. `--only N` runs one.
// Exit status is nonzero when any criterion that ran failed.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "monte_carlo.hpp"
#include "ramzi/circuit.hpp"
#include "ramzi/config.hpp"
#include "ramzi/link.hpp"
#include "ramzi/thermal.hpp"
#include "ramzi/transient.hpp"
#include "ramzi/tuner.hpp"
#include "rng.hpp"

using namespace ramzi;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const ExperimentConfig& cfg() {
  static const ExperimentConfig c = default_config();
  return c;
}

const BiasSolution& tuned() {
  static const BiasSolution s = tune_static(ramzi_template(cfg()), cfg().tuner);
  return s;
}

RamziConfig symmetric_config(double t, double a, double delta_pm, double phi_ps) {
  RamziConfig c;
  c.mrm_top.self_coupling = c.mrm_bottom.self_coupling = t;
  c.mrm_top.round_trip_amplitude = c.mrm_bottom.round_trip_amplitude = a;
  c.detuning_offset_pm = delta_pm;
  c.phi_ps = phi_ps;
  return realize_detuning(c);
}

LinkConfig link_for(Format f, double rate, double beta = kCalibratedNoiseBandwidth) {
  LinkConfig c = cfg().link.link;
  c.format = f;
  c.datarate_gbps = rate;
  c.noise_bandwidth_factor = beta;
  return c;
}

PhaseNoiseSpec phase_noise() {
  const PhaseNoiseSection& p = cfg().link.phase_noise;
  return {p.linewidth_mhz, p.path_mismatch_cm, p.group_index};
}

double target() { return cfg().link.target_ber; }

// 1. Output phase constant over the drive table.
Outcome phase_constancy() {
  const double spread_deg = phase_spread(tuned().config, tuned().drive_table) * 180.0 / pi;
  const RamziConfig c = symmetric_config(0.9341112429, 0.9341112429, 116.0, 4.96546);
  std::vector<ComplexAmplitude> fields;
  for (double u : {-2.0, -0.7, 0.7, 2.0}) fields.push_back(ramzi_output(c, -2.0 + u, -2.0 - u));
  const double analytic = phase_spread(c, fields);
  return {spread_deg < 3.0 && analytic < 1e-9,
          "tuned spread " + sci(spread_deg) + " deg (< 3), symmetric spread " + sci(analytic) + " rad (< 1e-9)"};
}

// 2. Interference power and OMA in closed form against the complex circuit.
Outcome closed_forms() {
  ramzi::testing::SplitMix64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double t = 0.85 + 0.14 * rng.uniform(), a = 0.85 + 0.14 * rng.uniform();
    const double delta = 10.0 + 190.0 * rng.uniform(), phi_ps = 2.0 * pi * rng.uniform();
    const RamziConfig c = symmetric_config(t, a, delta, phi_ps);
    const double u1 = 2.0 * rng.uniform(), u2 = 2.0 * rng.uniform();
    const DrivePair hi{-2.0 + u1, -2.0 - u1}, lo{-2.0 + u2, -2.0 - u2};
    auto closed_power = [&](DrivePair p, double& amp) {
      const ArmFields h = arm_fields(c, p.v_top, p.v_bottom);
      amp = 0.5 * (std::abs(h.top) + std::abs(h.bottom)) / sqrt2;
      const double phi_x = 0.5 * (std::arg(h.top) - std::arg(h.bottom));
      return amp * amp * (1.0 + std::cos(2.0 * phi_x + phi_ps));
    };
    double a_hi = 0.0, a_lo = 0.0;
    const double p_hi = closed_power(hi, a_hi), p_lo = closed_power(lo, a_lo);
    worst = std::max(worst, std::abs(ramzi_power(c, hi.v_top, hi.v_bottom) - p_hi) / (a_hi * a_hi));
    worst = std::max(worst, std::abs(ramzi_oma_e(c, hi, lo) - (std::sqrt(p_hi) - std::sqrt(p_lo))) / a_hi);
  }
  return {worst < 1e-12, "worst relative error " + sci(worst) + " over 10000 configs (< 1e-12)"};
}

// 3. Tuned OMA and field levels.
Outcome oma_levels() {
  const BiasSolution& s = tuned();
  const double want[4] = {0.08, 0.293, 0.507, 0.72};
  bool ok = s.achieved_oma_e >= 0.60 && s.drive_table.entries.size() == 4;
  std::string d = "OMA_E " + fmt(s.achieved_oma_e) + " (>= 0.60), levels";
  for (std::size_t k = 0; k < 4 && k < s.drive_table.entries.size(); ++k) {
    const double v = s.drive_table.entries[k].field_level;
    ok = ok && std::abs(v - want[k]) <= 0.05;
    d += " " + fmt(v);
  }
  return {ok, d + " (+-0.05 of 0.08/0.293/0.507/0.72)"};
}

// 4. One-scalar calibration at 200G, then the 400G anchor.
Outcome power_anchor() {
  const double beta = calibrate_noise_bandwidth(link_for(Format::Roq16, 200.0, 1.0), 6.71, Format::Roq16, 200.0,
                                                target());
  const double p200 = required_power(link_for(Format::Roq16, 200.0, beta), target());
  const double p400 = required_power(link_for(Format::Roq16, 400.0, beta), target());
  return {std::abs(p400 - 9.65) <= 0.5 && std::abs(p200 - 6.71) <= 0.01,
          "beta " + sci(beta) + ", 200G " + fmt(p200) + " dBm, 400G " + fmt(p400) + " dBm (9.65 +-0.5)"};
}

// 5. Relative format gaps without phase noise.
Outcome format_gaps() {
  bool ok = true;
  std::string d;
  const double rates[2] = {200.0, 400.0}, gap_want[2] = {5.3, 7.7};
  for (int i = 0; i < 2; ++i) {
    const double roq = required_power(link_for(Format::Roq16, rates[i]), target());
    const double gap = required_power(link_for(Format::MrmPam4, rates[i]), target()) - roq;
    const double qam = std::abs(roq - required_power(link_for(Format::MziQam16, rates[i]), target()));
    Format best = Format::Roq16;
    double best_p = roq;
    for (Format f : kAllFormats) {
      const double p = required_power(link_for(f, rates[i]), target());
      if (p < best_p) best = f, best_p = p;
    }
    ok = ok && std::abs(gap - gap_want[i]) <= 1.5 && qam <= 1.0 && best == Format::MziQam4;
    d += std::string(i ? "; " : "") + fmt(rates[i], 0) + "G MRM-ROQ " + fmt(gap) + " dB (" + fmt(gap_want[i], 1) +
         " +-1.5), |ROQ-QAM16| " + fmt(qam) + " dB (<= 1), min " + std::string(to_string(best)) +
         " (want MZI-QAM4)";
  }
  return {ok, d};
}

// 6. Phase-noise robustness at 200G.
Outcome phase_noise_gap() {
  const PhaseNoiseSpec pn = phase_noise();
  const double roq = required_power(link_for(Format::Roq16, 200.0), target(), pn);
  const double qam = required_power(link_for(Format::MziQam16, 200.0), target(), pn);
  const double pen_roq = roq - required_power(link_for(Format::Roq16, 200.0), target());
  const double pen_qam = qam - required_power(link_for(Format::MziQam16, 200.0), target());
  return {std::abs(roq - qam) <= 2.0 && pen_roq >= pen_qam,
          "|ROQ-QAM16| " + fmt(std::abs(roq - qam)) + " dB (<= 2), penalty ROQ16 " + fmt(pen_roq) + " dB >= QAM16 " +
              fmt(pen_qam) + " dB"};
}

// 7. Self-heating stability boundary.
Outcome thermal() {
  const MrmModel m = device_model(cfg());
  const ThermalSection& t = cfg().thermal;
  const SweepOptions opt = sweep_options(cfg());
  auto unstable = [&](double dbm) {
    const StabilityReport r = sweep_and_diagnose(m, dbm, t.p_min_mw, t.p_max_mw, t.duration_s, t.drive_rate_hz, opt).report;
    return r.bistable || r.metastable;
  };
  const bool stable_m5 = !unstable(-5.0);
  const bool unstable_p5 = unstable(5.0);
  const auto onset = find_instability_onset(m, t.onset_search_lo_dbm, t.onset_search_hi_dbm, t.p_min_mw, t.p_max_mw,
                                            t.duration_s, t.drive_rate_hz, opt);
  // Monotone: stable on a ladder below the onset, unstable on one above.
  bool monotone = onset.has_value();
  if (onset) {
    for (double d : {-6.0, -3.0, -1.0, -0.1}) monotone = monotone && !unstable(*onset + d);
    for (double d : {0.05, 0.5, 2.0}) monotone = monotone && (*onset + d > 5.0 || unstable(*onset + d));
  }
  return {stable_m5 && unstable_p5 && onset && *onset <= 5.0 && monotone,
          std::string("-5 dBm ") + (stable_m5 ? "stable" : "unstable") + ", +5 dBm " +
              (unstable_p5 ? "unstable" : "stable") + ", onset " + (onset ? fmt(*onset, 2) + " dBm" : "none") +
              (monotone ? ", monotone" : ", not monotone")};
}

// 8. Analytic BER against a symbol-level simulation.
Outcome monte_carlo() {
  bool ok = true;
  double worst = 0.0;
  std::uint64_t seed = 7000;
  for (Format f : kAllFormats) {
    const LinkConfig c = link_for(f, 200.0);
    const FormatInfo info = format_info(f);
    for (double ber_point : {1e-2, 1e-3, 1e-4}) {
      const double p = required_power(c, ber_point);
      const ChainResult r = signal_chain(c, p);
      const auto mc = ramzi::testing::mc_pam(info.levels, info.dimensions, r.d, r.sigma, r.comparator_threshold,
                                             10'000'000, ++seed);
      const double want = ber(c, p);
      const double z = std::abs(mc.ber() - want) / mc.sigma_at(want);
      worst = std::max(worst, z);
      ok = ok && z <= 3.0;
    }
  }
  return {ok, "worst deviation " + fmt(worst, 2) + " binomial sigma over 6 formats x 3 SNR points (<= 3)"};
}

// 9. Eye through the electro-optic pole and the ideal-bandwidth limit.
Outcome transient() {
  const BiasSolution& s = tuned();
  EyeOptions opt;
  opt.samples_per_ui = cfg().transient.samples_per_ui;
  const DriveWaveform w = generate_prbs_drive(cfg().transient.prbs_order, 50.0, s.drive_table,
                                              cfg().transient.rise_fall_fraction, 35.0);
  const EyeResult eye = simulate_eye(s.config, w, opt);
  DriveWaveform ideal = w;
  ideal.eo_bandwidth_ghz = std::numeric_limits<double>::infinity();
  const EyeResult flat = simulate_eye(s.config, ideal, opt);
  double dev = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& e = s.drive_table.entries[k];
    dev = std::max(dev, std::abs(flat.metrics.sampled_levels[k] - std::abs(ramzi_output(s.config, e.v_top, e.v_bottom))));
  }
  return {eye.metrics.levels_resolvable && eye.metrics.phase_error_deg < 3.0 && dev <= 1e-9,
          std::string("levels ") + (eye.metrics.levels_resolvable ? "resolvable" : "merged") + ", phase spread " +
              sci(eye.metrics.phase_error_deg) + " deg (< 3), ideal deviation " + sci(dev) + " (<= 1e-9)"};
}

// 10. Laser energy per bit at 10 % wall plug.
Outcome energy() {
  bool ok = true;
  std::string d;
  for (double rate : {200.0, 400.0}) {
    const double e = laser_energy_fj_per_bit(required_power(link_for(Format::Roq16, rate), target()), rate, 0.1);
    ok = ok && std::abs(e / 280.0 - 1.0) <= 0.3;
    d += (d.empty() ? "" : ", ") + fmt(rate, 0) + "G " + fmt(e, 1) + " fJ/b";
  }
  return {ok, d + " (280 +-30%)"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("RAMZI acceptance criteria");
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-10)")->check(CLI::Range(0, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {"phase constancy", phase_constancy}, {"closed-form equivalence", closed_forms},
      {"OMA and levels", oma_levels},       {"absolute power anchor", power_anchor},
      {"relative format gaps", format_gaps}, {"phase-noise gap", phase_noise_gap},
      {"thermal stability", thermal},        {"BER vs Monte-Carlo", monte_carlo},
      {"transient eye", transient},          {"laser energy per bit", energy},
  };
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (only && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome o{false, ""};
    try {
      o = all[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, all[k].name, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
