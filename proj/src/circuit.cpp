#include "ramzi/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "ramzi/errors.hpp"

namespace ramzi {

namespace {

constexpr double kPi = std::numbers::pi;

double fold_pm(double value_pm, double fsr_pm) {
  double d = std::remainder(value_pm, fsr_pm);
  if (d <= -0.5 * fsr_pm) d += fsr_pm;
  return d;
}

// Into (-pi/2, pi/2].
double fold_half_turn(double x) {
  double d = std::remainder(x, kPi);
  if (d <= -0.5 * kPi) d += kPi;
  return d;
}

}  // namespace

void validate(const RamziConfig& c) {
  try {
    validate(c.mrm_top);
  } catch (const ValidationError& e) {
    throw ValidationError("mrm_top." + e.key(), e.what());
  }
  try {
    validate(c.mrm_bottom);
  } catch (const ValidationError& e) {
    throw ValidationError("mrm_bottom." + e.key(), e.what());
  }
  if (!std::isfinite(c.phi_ps)) throw ValidationError("phi_ps", "must be finite");
  if (!std::isfinite(c.detuning_offset_pm))
    throw ValidationError("detuning_offset_pm", "must be finite");
  if (!(c.laser_wavelength_nm > 0.0) || !std::isfinite(c.laser_wavelength_nm))
    throw ValidationError("laser_wavelength_nm", "must be positive");
  if (!std::isfinite(c.heater_top_mw) || c.heater_top_mw < 0.0)
    throw ValidationError("heater_top_mw", "must be finite and non-negative");
  if (!std::isfinite(c.heater_bottom_mw) || c.heater_bottom_mw < 0.0)
    throw ValidationError("heater_bottom_mw", "must be finite and non-negative");
  if (!std::isfinite(c.v_high) || !std::isfinite(c.v_low))
    throw ValidationError("v_high", "drive swing must be finite");
  if (c.v_low > c.v_high) throw ValidationError("v_low", "must not exceed v_high");
}

double mid_swing_shift_pm(const MrmModel& m, double v_high, double v_low) {
  return 0.5 * (resonance_shift_pm(m, v_high, 0.0) + resonance_shift_pm(m, v_low, 0.0));
}

double heater_for_resonance(const MrmModel& m, double target_nm, double v_high, double v_low) {
  const double fsr_pm = 1e3 * fsr_nm(m);
  const double needed_pm = 1e3 * (target_nm - m.resonance_wavelength_at_rest_nm) -
                           mid_swing_shift_pm(m, v_high, v_low);
  double wrapped = std::fmod(needed_pm, fsr_pm);
  if (wrapped < 0.0) wrapped += fsr_pm;
  if (m.thermal_shift_pm_per_mw <= 0.0) {
    if (std::min(wrapped, fsr_pm - wrapped) < 1e-9) return 0.0;
    throw ValidationError("thermal_shift_pm_per_mw", "heater cannot move the resonance");
  }
  return wrapped / m.thermal_shift_pm_per_mw;
}

RamziConfig realize_detuning(RamziConfig c) {
  const double sign = c.top_below_laser ? 1.0 : -1.0;
  const double top_target = c.laser_wavelength_nm - sign * 1e-3 * c.detuning_offset_pm;
  const double bottom_target = c.laser_wavelength_nm + sign * 1e-3 * c.detuning_offset_pm;
  c.heater_top_mw = heater_for_resonance(c.mrm_top, top_target, c.v_high, c.v_low);
  c.heater_bottom_mw = heater_for_resonance(c.mrm_bottom, bottom_target, c.v_high, c.v_low);
  return c;
}

double arm_detuning_pm(const RamziConfig& c, bool top) {
  const MrmModel& m = top ? c.mrm_top : c.mrm_bottom;
  const double heater = top ? c.heater_top_mw : c.heater_bottom_mw;
  const double mid = m.resonance_wavelength_at_rest_nm +
                     1e-3 * (mid_swing_shift_pm(m, c.v_high, c.v_low) +
                             m.thermal_shift_pm_per_mw * heater);
  return fold_pm(1e3 * (mid - c.laser_wavelength_nm), 1e3 * fsr_nm(m));
}

ArmFields arm_fields(const RamziConfig& c, double v_top, double v_bottom) {
  return {mrm_transfer(c.mrm_top, v_top, c.heater_top_mw, c.laser_wavelength_nm),
          mrm_transfer(c.mrm_bottom, v_bottom, c.heater_bottom_mw, c.laser_wavelength_nm)};
}

ComplexAmplitude ramzi_output(const RamziConfig& c, double v_top, double v_bottom) {
  const auto [top_in, bottom_in] = splitter(1.0);
  const ArmFields h = arm_fields(c, v_top, v_bottom);
  return combiner(top_in * h.top, phase_shifter(bottom_in * h.bottom, -c.phi_ps));
}

OutputPhase ramzi_output_phase(const RamziConfig& c, double v_top, double v_bottom,
                               double amplitude_tolerance) {
  const ArmFields h = arm_fields(c, v_top, v_bottom);
  OutputPhase out;
  out.phase = std::arg(ramzi_output(c, v_top, v_bottom));
  out.amplitude_difference = std::abs(std::abs(h.top) - std::abs(h.bottom)) * (1.0 / std::numbers::sqrt2);
  out.amplitude_mismatch = out.amplitude_difference > amplitude_tolerance;
  return out;
}

double ramzi_power(const RamziConfig& c, double v_top, double v_bottom) {
  return std::norm(ramzi_output(c, v_top, v_bottom));
}

double ramzi_oma_e(const RamziConfig& c, DrivePair hi, DrivePair lo) {
  return std::abs(ramzi_output(c, hi)) - std::abs(ramzi_output(c, lo));
}

double axis_phase(const RamziConfig& c) {
  const double base = -0.5 * c.phi_ps;
  const ComplexAmplitude rot = std::polar(1.0, -base);
  const double p1 = (ramzi_output(c, c.v_high, c.v_low) * rot).real();
  const double p2 = (ramzi_output(c, c.v_low, c.v_high) * rot).real();
  const double mean = 0.5 * (p1 + p2);
  const bool flip = std::abs(mean) > 1e-12 ? mean < 0.0 : p1 < 0.0;
  return flip ? base + kPi : base;
}

double field_projection(const RamziConfig& c, ComplexAmplitude e) {
  return (e * std::polar(1.0, -axis_phase(c))).real();
}

double phase_spread(const RamziConfig& c, const std::vector<ComplexAmplitude>& fields) {
  if (fields.empty()) return 0.0;
  const double axis = axis_phase(c);
  double lo = kPi, hi = -kPi;
  for (const auto& e : fields) {
    const double d = fold_half_turn(std::arg(e) - axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

double phase_spread(const RamziConfig& c, const DriveLevelTable& table) {
  std::vector<ComplexAmplitude> fields;
  fields.reserve(table.entries.size());
  for (const auto& e : table.entries) fields.push_back(ramzi_output(c, e.v_top, e.v_bottom));
  return phase_spread(c, fields);
}

unsigned gray_code(unsigned k) { return k ^ (k >> 1); }

Constellation build_constellation(const RamziConfig& i_config, const RamziConfig& q_config,
                                  const DriveLevelTable& i_levels,
                                  const DriveLevelTable& q_levels) {
  const std::size_t n = i_levels.entries.size();
  if (n < 2) throw ValidationError("i_levels", "need at least 2 levels");
  if (q_levels.entries.size() != n)
    throw ValidationError("q_levels", "length " + std::to_string(q_levels.entries.size()) +
                                          " differs from I table length " + std::to_string(n));
  if (!std::has_single_bit(n)) throw ValidationError("i_levels", "level count must be a power of 2");
  const int bits = std::countr_zero(n);

  auto dimension = [](const RamziConfig& c, const DriveLevelTable& t) {
    const ComplexAmplitude derotate = std::polar(1.0, -axis_phase(c));
    std::vector<ComplexAmplitude> out;
    for (const auto& e : t.entries) out.push_back(ramzi_output(c, e.v_top, e.v_bottom) * derotate);
    return out;
  };
  const auto ei = dimension(i_config, i_levels);
  const auto eq = dimension(q_config, q_levels);

  Constellation k;
  ComplexAmplitude sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const ComplexAmplitude p = (ei[a] + ComplexAmplitude(0.0, 1.0) * eq[b]) * (1.0 / std::numbers::sqrt2);
      k.points.push_back(p);
      k.symbols.push_back((gray_code(static_cast<unsigned>(a)) << bits) |
                          gray_code(static_cast<unsigned>(b)));
      sum += p;
    }
  }
  k.offset = sum / static_cast<double>(k.points.size());
  double lo = ei.front().real(), hi = lo;
  for (const auto& e : ei) {
    lo = std::min(lo, e.real());
    hi = std::max(hi, e.real());
  }
  k.oma_e_per_dimension = (hi - lo) * (1.0 / std::numbers::sqrt2);
  return k;
}

}  // namespace ramzi
