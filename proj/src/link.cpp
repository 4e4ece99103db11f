#include "ramzi/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ramzi/errors.hpp"
#include "ramzi/quadrature.hpp"

namespace ramzi {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double db_loss(double db) { return std::pow(10.0, -db / 10.0); }

double to_db(double ratio) { return -10.0 * std::log10(ratio); }

double ber_from_margin(int levels, double half_eye, double sigma) {
  const double k = std::log2(static_cast<double>(levels));
  // A closed eye (half_eye < 0) gives Q above 1/2, as the comparator sees it.
  const double tail = sigma > 0.0 ? q_function(half_eye / sigma) : (half_eye > 0.0 ? 0.0 : 1.0);
  const double b = (1.0 / k) * (2.0 * (levels - 1) / levels) * tail;
  return std::min(b, 0.5);
}

}  // namespace

std::string_view to_string(Format f) {
  switch (f) {
    case Format::MziPam4:
      return "MZI-PAM4";
    case Format::MziPam8:
      return "MZI-PAM8";
    case Format::MziQam4:
      return "MZI-QAM4";
    case Format::MziQam16:
      return "MZI-QAM16";
    case Format::MrmPam4:
      return "MRM-PAM4";
    case Format::Roq16:
      return "ROQ16";
  }
  return "ROQ16";
}

Format format_from_string(std::string_view s) {
  for (Format f : kAllFormats)
    if (s == to_string(f)) return f;
  throw ValidationError("format", "unknown format '" + std::string(s) +
                                      "' (expected MZI-PAM4, MZI-PAM8, MZI-QAM4, MZI-QAM16, "
                                      "MRM-PAM4 or ROQ16)");
}

std::string_view to_string(Architecture a) { return a == Architecture::Coherent ? "coherent" : "imdd"; }

FormatInfo format_info(Format f) {
  switch (f) {
    case Format::MziPam4:
      return {Architecture::Imdd, 4, 1, 2, true};
    case Format::MziPam8:
      return {Architecture::Imdd, 8, 1, 3, true};
    case Format::MziQam4:
      return {Architecture::Coherent, 2, 2, 2, true};
    case Format::MziQam16:
      return {Architecture::Coherent, 4, 2, 4, true};
    case Format::MrmPam4:
      return {Architecture::Imdd, 4, 1, 2, false};
    case Format::Roq16:
      return {Architecture::Coherent, 4, 2, 4, false};
  }
  throw ValidationError("format", "unknown format");
}

Architecture architecture_of(Format f) { return format_info(f).architecture; }

void validate(const LinkConfig& c) {
  auto nonneg = [](double v, const char* key) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(key, "must be finite and non-negative");
  };
  auto positive = [](double v, const char* key) {
    if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(key, "must be positive");
  };
  positive(c.datarate_gbps, "datarate_gbps");
  nonneg(c.gc_loss_db, "gc_loss_db");
  nonneg(c.muxdemux_loss_db, "muxdemux_loss_db");
  nonneg(c.margin_db, "margin_db");
  positive(c.responsivity_a_per_w, "responsivity_a_per_w");
  validate(c.mzm);
  nonneg(c.ramzi_offset, "ramzi_offset");
  positive(c.ramzi_oma_e, "ramzi_oma_e");
  positive(c.mrm_oma, "mrm_oma");
  positive(c.afe_noise_a_per_rthz, "afe_noise_a_per_rthz");
  nonneg(c.comparator_threshold_a_at_50gbd, "comparator_threshold_a_at_50gbd");
  positive(c.mrm_bw_ghz, "mrm_bw_ghz");
  if (!(c.lo_split_fraction > 0.0 && c.lo_split_fraction < 1.0))
    throw ValidationError("lo_split_fraction", "must lie in (0, 1)");
  positive(c.noise_bandwidth_factor, "noise_bandwidth_factor");
  if (c.quadrature_nodes < 21 || c.quadrature_nodes > 200)
    throw ValidationError("quadrature_nodes", "must lie in [21, 200]");
}

double baud_for(Format f, double datarate_gbps) {
  if (!(datarate_gbps > 0.0)) throw ValidationError("datarate_gbps", "must be positive");
  return datarate_gbps / format_info(f).bits_per_symbol;
}

std::vector<double> dimension_levels(const LinkConfig& c) {
  const FormatInfo info = format_info(c.format);
  const int n = info.levels;
  std::vector<double> out(static_cast<std::size_t>(n));
  switch (c.format) {
    case Format::Roq16:
      for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] =
            c.ramzi_offset + c.ramzi_oma_e * (static_cast<double>(k) / (n - 1) - 0.5);
      return out;
    case Format::MziQam4:
    case Format::MziQam16:
      return mzm_field_levels(c.mzm, n);
    case Format::MziPam4:
    case Format::MziPam8:
      return mzm_power_levels(c.mzm, n);
    case Format::MrmPam4:
      for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = c.mrm_oma * static_cast<double>(k) / (n - 1);
      return out;
  }
  return out;
}

ChainResult signal_chain(const LinkConfig& c, double laser_power_dbm) {
  validate(c);
  const FormatInfo info = format_info(c.format);
  ChainResult r;
  r.baud_gbd = baud_for(c.format, c.datarate_gbps);
  const double baud_hz = r.baud_gbd * 1e9;
  const double p_mw = std::pow(10.0, laser_power_dbm / 10.0);
  const double gc = db_loss(c.gc_loss_db);
  const double mux = db_loss(c.muxdemux_loss_db);
  const auto levels = dimension_levels(c);
  r.alphabet_spacing = levels[1] - levels[0];

  auto row = [&](const char* path, std::string stage, double ratio, double& p) {
    p *= ratio;
    r.audit.push_back({path, std::move(stage), to_db(ratio), p});
  };
  const std::string mod_stage =
      info.mzi ? "MZI modulator (insertion loss carried by the alphabet)" : "RAMZI/MRM modulator";

  double d_raw = 0.0;
  if (info.architecture == Architecture::Coherent) {
    const double rho = c.lo_split_fraction;
    double lo = p_mw;
    r.audit.push_back({"LO", "laser", 0.0, lo});
    row("LO", "LO split", rho, lo);
    row("LO", "grating coupler (laser -> fibre)", gc, lo);
    row("LO", "grating coupler (fibre -> RX)", gc, lo);
    row("LO", "90-degree hybrid, per quadrature", 0.5, lo);
    row("LO", "balanced coupler, per photodiode", 0.5, lo);

    // Signal path power per unit alphabet field.
    double s = p_mw;
    r.audit.push_back({"signal", "laser", 0.0, s});
    row("signal", "signal split", 1.0 - rho, s);
    row("signal", "grating coupler (laser -> TX)", gc, s);
    row("signal", "I/Q split", 0.5, s);
    row("signal", mod_stage, 1.0, s);
    row("signal", "I/Q combine", 0.5, s);
    if (info.mzi) row("signal", "mux", mux, s);
    row("signal", "grating coupler (TX -> fibre)", gc, s);
    row("signal", "grating coupler (fibre -> RX)", gc, s);
    if (info.mzi) row("signal", "demux", mux, s);
    row("signal", "90-degree hybrid, per quadrature", 0.5, s);
    row("signal", "balanced coupler, per photodiode", 0.5, s);
    // mW -> W.
    d_raw = 2.0 * c.responsivity_a_per_w * std::sqrt(lo * 1e-3 * s * 1e-3) * r.alphabet_spacing;
  } else {
    double s = p_mw;
    r.audit.push_back({"signal", "laser", 0.0, s});
    row("signal", "grating coupler (laser -> TX)", gc, s);
    row("signal", mod_stage, 1.0, s);
    if (info.mzi) row("signal", "mux", mux, s);
    row("signal", "grating coupler (TX -> fibre)", gc, s);
    row("signal", "grating coupler (fibre -> RX)", gc, s);
    if (info.mzi) row("signal", "demux", mux, s);
    d_raw = c.responsivity_a_per_w * s * 1e-3 * r.alphabet_spacing;
  }

  const double margin = db_loss(c.margin_db);
  r.audit.push_back({"current", "margin (on spacing)", c.margin_db, 0.0});
  const double f3db = (info.mzi ? c.mzm.bandwidth_ghz : c.mrm_bw_ghz);
  r.isi_factor = 1.0 - 2.0 * std::exp(-2.0 * std::numbers::pi * f3db / r.baud_gbd);
  r.d = d_raw * margin * r.isi_factor;
  r.current_per_unit = r.d / r.alphabet_spacing;
  r.sigma = c.afe_noise_a_per_rthz * std::sqrt(c.noise_bandwidth_factor * baud_hz);
  r.comparator_threshold = (r.baud_gbd / 50.0) * c.comparator_threshold_a_at_50gbd;
  return r;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double ber(const LinkConfig& c, double laser_power_dbm) {
  const ChainResult r = signal_chain(c, laser_power_dbm);
  return ber_from_margin(format_info(c.format).levels, 0.5 * r.d - r.comparator_threshold, r.sigma);
}

double phase_noise_sigma(double linewidth_mhz, double path_mismatch_cm, double group_index) {
  if (!(linewidth_mhz >= 0.0) || !(path_mismatch_cm >= 0.0) || !(group_index > 0.0))
    throw ValidationError("phase_noise", "linewidth, mismatch must be >= 0 and group index > 0");
  const double tau = path_mismatch_cm * 1e-2 * group_index / kSpeedOfLight;
  return std::sqrt(2.0 * std::numbers::pi * linewidth_mhz * 1e6 * tau);
}

double ber_rotated(const LinkConfig& c, double laser_power_dbm, double phi) {
  const FormatInfo info = format_info(c.format);
  if (info.architecture != Architecture::Coherent)
    throw ValidationError("format", "phase rotation applies to coherent formats only");
  const ChainResult r = signal_chain(c, laser_power_dbm);
  const auto lv = dimension_levels(c);
  const std::size_t n = lv.size();
  std::vector<double> th(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) th[k] = 0.5 * (lv[k] + lv[k + 1]);
  const double scale = r.current_per_unit;
  auto tail = [&](double dist) {
    // A rotation past the threshold gives a negative margin and Q above 1/2.
    const double m = dist * scale - r.comparator_threshold;
    if (r.sigma > 0.0) return q_function(m / r.sigma);
    return m > 0.0 ? 0.0 : 1.0;
  };
  const std::complex<double> rot = std::polar(1.0, phi);
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::complex<double> z = std::complex<double>(lv[a], lv[b]) * rot;
      for (const auto& [val, idx] : {std::pair{z.real(), a}, std::pair{z.imag(), b}}) {
        if (idx > 0) total += tail(val - th[idx - 1]);
        if (idx + 1 < n) total += tail(th[idx] - val);
      }
    }
  }
  const double bits = std::log2(static_cast<double>(n));
  return std::min(0.5, total / static_cast<double>(n * n) / (2.0 * bits));
}

double ber_with_phase_noise(const LinkConfig& c, double laser_power_dbm, double linewidth_mhz,
                            double path_mismatch_cm, double group_index) {
  if (architecture_of(c.format) != Architecture::Coherent)
    throw ValidationError("format", std::string(to_string(c.format)) +
                                        " is IM-DD; laser phase noise does not apply");
  const double sigma = phase_noise_sigma(linewidth_mhz, path_mismatch_cm, group_index);
  if (sigma == 0.0) return ber(c, laser_power_dbm);
  const QuadratureRule rule = gauss_hermite_normal(c.quadrature_nodes);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    s += rule.weights[k] * ber_rotated(c, laser_power_dbm, sigma * rule.nodes[k]);
  return s;
}

double required_power(const LinkConfig& c, double target_ber,
                      const std::optional<PhaseNoiseSpec>& phase_noise) {
  if (!(target_ber > 0.0 && target_ber < 0.5)) throw ValidationError("target_ber", "must lie in (0, 0.5)");
  const bool pn = phase_noise && architecture_of(c.format) == Architecture::Coherent;
  auto eval = [&](double p) {
    return pn ? ber_with_phase_noise(c, p, phase_noise->linewidth_mhz, phase_noise->path_mismatch_cm,
                                     phase_noise->group_index)
              : ber(c, p);
  };
  double lo = -30.0, hi = 20.0;
  if (eval(hi) > target_ber)
    throw InfeasibleError(std::string(to_string(c.format)) + " at " + std::to_string(c.datarate_gbps) +
                          " Gb/s does not reach BER " + std::to_string(target_ber) +
                          " below +20 dBm");
  if (eval(lo) <= target_ber) return lo;
  // Resolution well inside the 0.01 dB contract.
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (eval(mid) > target_ber ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BerCurve ber_curve(const LinkConfig& c, const std::vector<double>& powers_dbm,
                   const std::optional<PhaseNoiseSpec>& phase_noise) {
  BerCurve curve;
  curve.format = c.format;
  curve.datarate_gbps = c.datarate_gbps;
  curve.phase_noise_enabled = phase_noise && architecture_of(c.format) == Architecture::Coherent;
  curve.laser_powers_dbm = powers_dbm;
  for (double p : powers_dbm)
    curve.ber.push_back(curve.phase_noise_enabled
                            ? ber_with_phase_noise(c, p, phase_noise->linewidth_mhz,
                                                   phase_noise->path_mismatch_cm, phase_noise->group_index)
                            : ber(c, p));
  return curve;
}

std::optional<double> Comparison::required(Format f) const {
  for (const auto& s : summary)
    if (s.format == f) return s.required_power_dbm;
  return std::nullopt;
}

Comparison compare_formats(const LinkConfig& base, double datarate_gbps,
                           const std::vector<double>& powers_dbm,
                           const std::optional<PhaseNoiseSpec>& phase_noise, double target_ber) {
  Comparison cmp;
  cmp.datarate_gbps = datarate_gbps;
  cmp.phase_noise_enabled = phase_noise.has_value();
  for (Format f : kAllFormats) {
    LinkConfig c = base;
    c.format = f;
    c.datarate_gbps = datarate_gbps;
    cmp.curves.push_back(ber_curve(c, powers_dbm, phase_noise));
    FormatSummary s;
    s.format = f;
    try {
      s.required_power_dbm = required_power(c, target_ber, phase_noise);
      s.energy_fj_per_bit = laser_energy_fj_per_bit(*s.required_power_dbm, datarate_gbps);
    } catch (const InfeasibleError&) {
    }
    cmp.summary.push_back(s);
  }
  return cmp;
}

double laser_energy_fj_per_bit(double laser_power_dbm, double datarate_gbps,
                               double wall_plug_efficiency) {
  if (!(wall_plug_efficiency > 0.0 && wall_plug_efficiency <= 1.0))
    throw ValidationError("wall_plug_efficiency", "must lie in (0, 1]");
  // mW / (Gb/s) = pJ/b.
  return 1e3 * std::pow(10.0, laser_power_dbm / 10.0) / wall_plug_efficiency / datarate_gbps;
}

double calibrate_noise_bandwidth(const LinkConfig& base, double anchor_power_dbm,
                                 Format anchor_format, double datarate_gbps, double target_ber) {
  LinkConfig c = base;
  c.format = anchor_format;
  c.datarate_gbps = datarate_gbps;
  auto req = [&](double log_beta) {
    c.noise_bandwidth_factor = std::exp(log_beta);
    try {
      return required_power(c, target_ber);
    } catch (const InfeasibleError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double lo = std::log(1e-8), hi = std::log(1e3);
  if (req(lo) > anchor_power_dbm || req(hi) < anchor_power_dbm)
    throw InfeasibleError("no noise bandwidth in [1e-8, 1e3] x baud reproduces the anchor");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (req(mid) < anchor_power_dbm ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace ramzi
