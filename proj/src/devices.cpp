#include "ramzi/devices.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ramzi/errors.hpp"

namespace ramzi {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char* key) {
  if (!std::isfinite(v)) throw ValidationError(key, "must be finite");
}

void require_open_unit(double v, const char* key) {
  require_finite(v, key);
  if (!(v > 0.0 && v < 1.0)) throw ValidationError(key, "must lie in (0, 1), got " + std::to_string(v));
}

void require_positive(double v, const char* key) {
  require_finite(v, key);
  if (!(v > 0.0)) throw ValidationError(key, "must be positive, got " + std::to_string(v));
}

// Half-depth condition of the Lorentzian-like dip: depends on x = t a only.
double half_width_phase(double x) {
  const double c = (1.0 + x * x - 2.0 * (1.0 - x) * (1.0 - x)) / (2.0 * x);
  if (c <= -1.0) return kPi;
  return std::acos(std::min(1.0, c));
}

double q_for_product(double x, double length_nm, double group_index, double wavelength_nm) {
  const double fsr = wavelength_nm * wavelength_nm / (group_index * length_nm);
  const double fwhm = 2.0 * half_width_phase(x) / (2.0 * kPi) * fsr;
  return wavelength_nm / fwhm;
}

}  // namespace

std::string_view to_string(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::Under:
      return "under";
    case CouplingRegime::Critical:
      return "critical";
    case CouplingRegime::Over:
      return "over";
  }
  return "critical";
}

CouplingRegime coupling_regime_from_string(std::string_view s) {
  if (s == "under") return CouplingRegime::Under;
  if (s == "critical") return CouplingRegime::Critical;
  if (s == "over") return CouplingRegime::Over;
  throw ValidationError("coupling_regime", "expected under|critical|over, got '" + std::string(s) + "'");
}

void validate(const MrmModel& m) {
  require_positive(m.radius_um, "radius_um");
  require_positive(m.group_index, "group_index");
  require_finite(m.q_factor, "q_factor");
  if (!(m.q_factor > 100.0)) throw ValidationError("q_factor", "must exceed 100");
  require_open_unit(m.self_coupling, "self_coupling");
  require_open_unit(m.round_trip_amplitude, "round_trip_amplitude");
  require_positive(m.resonance_wavelength_at_rest_nm, "resonance_wavelength_at_rest_nm");
  require_finite(m.modulation_efficiency_pm_per_v, "modulation_efficiency_pm_per_v");
  require_finite(m.modulation_quadratic_pm_per_v2, "modulation_quadratic_pm_per_v2");
  require_finite(m.thermal_shift_pm_per_mw, "thermal_shift_pm_per_mw");
  if (m.thermal_shift_pm_per_mw < 0.0)
    throw ValidationError("thermal_shift_pm_per_mw", "must be non-negative");
  require_positive(m.thermal_resistance_k_per_mw, "thermal_resistance_k_per_mw");
  require_positive(m.thermal_time_constant_s, "thermal_time_constant_s");
  require_finite(m.absorbed_fraction, "absorbed_fraction");
  if (m.absorbed_fraction < 0.0 || m.absorbed_fraction > 1.0)
    throw ValidationError("absorbed_fraction", "must lie in [0, 1]");
}

double round_trip_length_nm(const MrmModel& m) { return 2.0 * kPi * m.radius_um * 1e3; }

double fsr_nm(const MrmModel& m) {
  const double lam = m.resonance_wavelength_at_rest_nm;
  return lam * lam / (m.group_index * round_trip_length_nm(m));
}

double resonance_shift_pm(const MrmModel& m, double drive_voltage, double heater_mw) {
  return m.modulation_efficiency_pm_per_v * drive_voltage +
         m.modulation_quadratic_pm_per_v2 * drive_voltage * drive_voltage +
         m.thermal_shift_pm_per_mw * heater_mw;
}

double resonance_wavelength_nm(const MrmModel& m, double drive_voltage, double heater_mw) {
  return m.resonance_wavelength_at_rest_nm + 1e-3 * resonance_shift_pm(m, drive_voltage, heater_mw);
}

double ring_phase(const MrmModel& m, double detuning_pm) {
  const double fsr_pm = 1e3 * fsr_nm(m);
  // Fold into (-FSR/2, FSR/2].
  double d = std::remainder(detuning_pm, fsr_pm);
  if (d <= -0.5 * fsr_pm) d += fsr_pm;
  return 2.0 * kPi * d / fsr_pm;
}

ComplexAmplitude ring_response(double t, double a, double theta) {
  const ComplexAmplitude e = std::polar(1.0, theta);
  return (t - a * e) / (1.0 - t * a * e);
}

ComplexAmplitude mrm_transfer(const MrmModel& m, double drive_voltage, double heater_mw,
                              double wavelength_nm) {
  require_finite(drive_voltage, "drive_voltage");
  require_finite(heater_mw, "heater_mw");
  require_finite(wavelength_nm, "wavelength_nm");
  require_open_unit(m.self_coupling, "self_coupling");
  require_open_unit(m.round_trip_amplitude, "round_trip_amplitude");
  const double detuning_pm =
      1e3 * (resonance_wavelength_nm(m, drive_voltage, heater_mw) - wavelength_nm);
  return ring_response(m.self_coupling, m.round_trip_amplitude, ring_phase(m, detuning_pm));
}

double fwhm_nm(const MrmModel& m) {
  return half_width_phase(m.self_coupling * m.round_trip_amplitude) / kPi * fsr_nm(m);
}

double loaded_q(const MrmModel& m) { return m.resonance_wavelength_at_rest_nm / fwhm_nm(m); }

double min_transmission(const MrmModel& m) {
  const double t = m.self_coupling, a = m.round_trip_amplitude;
  return std::abs(t - a) / (1.0 - t * a);
}

double max_transmission(const MrmModel& m) {
  const double t = m.self_coupling, a = m.round_trip_amplitude;
  return (t + a) / (1.0 + t * a);
}

double coupling_product_for_q(double target_q, const CalibrationOptions& opt) {
  if (!std::isfinite(target_q) || !(target_q > 100.0))
    throw ValidationError("target_q", "must exceed 100");
  const double length = 2.0 * kPi * opt.radius_um * 1e3;
  // Q rises monotonically with x on (0, 1).
  double lo = 1e-6, hi = 1.0 - 1e-15;
  if (q_for_product(lo, length, opt.group_index, opt.wavelength_nm) > target_q)
    throw InfeasibleError("target Q " + std::to_string(target_q) +
                          " is below the geometry's minimum loaded Q");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (q_for_product(mid, length, opt.group_index, opt.wavelength_nm) < target_q)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

MrmModel calibrate_mrm(double target_q, double target_efficiency_pm_per_v,
                       CouplingRegime regime, const CalibrationOptions& opt) {
  require_positive(opt.radius_um, "radius_um");
  require_positive(opt.group_index, "group_index");
  require_positive(opt.wavelength_nm, "wavelength_nm");
  require_finite(target_efficiency_pm_per_v, "target_efficiency");
  const double x = coupling_product_for_q(target_q, opt);

  double t = 0.0, a = 0.0;
  if (regime == CouplingRegime::Critical) {
    t = a = std::sqrt(x);
  } else {
    if (!(opt.extinction > 0.0 && opt.extinction < 1.0))
      throw ValidationError("extinction", "must lie in (0, 1)");
    // |t - a| = e (1 - x) with t a = x.
    const double diff = opt.extinction * (1.0 - x);
    const double big = 0.5 * (diff + std::sqrt(diff * diff + 4.0 * x));
    const double small = x / big;
    t = regime == CouplingRegime::Under ? big : small;
    a = regime == CouplingRegime::Under ? small : big;
  }
  if (!(t < 1.0 && a < 1.0))
    throw InfeasibleError("no coupling pair reaches Q " + std::to_string(target_q) + " in the " +
                          std::string(to_string(regime)) + "-coupled regime");
  const double length = 2.0 * kPi * opt.radius_um * 1e3;
  const double intrinsic_q = kPi * opt.group_index * length * std::sqrt(a) /
                             (opt.wavelength_nm * (1.0 - a));
  if (intrinsic_q > opt.max_intrinsic_q)
    throw InfeasibleError("Q " + std::to_string(target_q) + " in the " +
                          std::string(to_string(regime)) + "-coupled regime needs intrinsic Q " +
                          std::to_string(intrinsic_q) + " above the limit " +
                          std::to_string(opt.max_intrinsic_q));

  MrmModel m;
  m.radius_um = opt.radius_um;
  m.group_index = opt.group_index;
  m.resonance_wavelength_at_rest_nm = opt.wavelength_nm;
  m.q_factor = target_q;
  m.self_coupling = t;
  m.round_trip_amplitude = a;
  m.modulation_efficiency_pm_per_v = target_efficiency_pm_per_v;
  return m;
}

ComplexAmplitude phase_shifter(ComplexAmplitude input, double phase) {
  return input * std::polar(1.0, phase);
}

std::pair<ComplexAmplitude, ComplexAmplitude> splitter(ComplexAmplitude input) {
  const ComplexAmplitude half = input * (1.0 / std::numbers::sqrt2);
  return {half, half};
}

ComplexAmplitude combiner(ComplexAmplitude a, ComplexAmplitude b) {
  return (a + b) * (1.0 / std::numbers::sqrt2);
}

void validate(const MzmModel& m) {
  require_positive(m.effective_oma_e, "effective_oma_e");
  require_positive(m.effective_oma, "effective_oma");
  require_finite(m.insertion_loss_db, "insertion_loss_db");
  if (m.insertion_loss_db < 0.0) throw ValidationError("insertion_loss_db", "must be non-negative");
  require_positive(m.bandwidth_ghz, "bandwidth_ghz");
}

std::vector<double> mzm_field_levels(const MzmModel& m, int levels) {
  if (levels < 2) throw ValidationError("levels", "need at least 2");
  const double scale = std::sqrt(std::pow(10.0, -m.insertion_loss_db / 10.0));
  std::vector<double> out(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k)
    out[static_cast<std::size_t>(k)] =
        scale * m.effective_oma_e * (static_cast<double>(k) / (levels - 1) - 0.5);
  return out;
}

std::vector<double> mzm_power_levels(const MzmModel& m, int levels) {
  if (levels < 2) throw ValidationError("levels", "need at least 2");
  const double scale = std::pow(10.0, -m.insertion_loss_db / 10.0);
  std::vector<double> out(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k)
    out[static_cast<std::size_t>(k)] = scale * m.effective_oma * static_cast<double>(k) / (levels - 1);
  return out;
}

}  // namespace ramzi
