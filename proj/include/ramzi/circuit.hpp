#pragma once

// Ring-assisted Mach-Zehnder: one MRM per arm, a bias phase shifter in the
// bottom arm, field sum at the output combiner.
//
// Production code evaluates the output by direct complex superposition
// E = (E_top + E_bottom e^{-i phi_ps}) / sqrt(2), each arm carrying
// 1/sqrt(2) of the unit input. The closed forms for a symmetric drive pair
// (equal arm amplitude A, opposite arm phase ±phi_x) are
//   |E|² = A² (1 + cos(2 phi_x + phi_ps)),   arg E = -phi_ps / 2,
// and are used only as test oracles.

#include <string>
#include <vector>

#include "ramzi/devices.hpp"

namespace ramzi {

struct DrivePair {
  double v_top = 0.0;
  double v_bottom = 0.0;
};

struct RamziConfig {
  MrmModel mrm_top;
  MrmModel mrm_bottom;
  /// Bottom-arm phase setting, combiner pi/2 included.
  double phi_ps = 0.0;
  /// Symmetric resonance offset about the laser (pm), referenced to the
  /// mid-swing drive.
  double detuning_offset_pm = 0.0;
  double laser_wavelength_nm = 1310.0;
  double heater_top_mw = 0.0;
  double heater_bottom_mw = 0.0;
  /// Top resonance sits below the laser, bottom above. False mirrors.
  bool top_below_laser = true;
  /// Drive swing; extremes are (v_high, v_low) and (v_low, v_high).
  double v_high = 0.0;
  double v_low = -4.0;
};

void validate(const RamziConfig& c);

/// Mid-swing resonance shift (pm) of one ring: average over the two drive
/// extremes. Detuning is referenced to this point so the extremes are
/// mirror images.
double mid_swing_shift_pm(const MrmModel& m, double v_high, double v_low);

/// Smallest non-negative heater power putting the ring's mid-swing
/// resonance at `target_nm`.
double heater_for_resonance(const MrmModel& m, double target_nm, double v_high, double v_low);

/// Copy of `c` with both heaters solved so the mid-swing resonances sit at
/// laser ∓ detuning_offset (± when mirrored).
RamziConfig realize_detuning(RamziConfig c);

/// Mid-swing resonance minus laser (pm), folded into one FSR.
double arm_detuning_pm(const RamziConfig& c, bool top);

struct ArmFields {
  /// Ring responses H_T, H_B (unit ring input; the 1/sqrt(2) split is not applied).
  ComplexAmplitude top;
  ComplexAmplitude bottom;
};

ArmFields arm_fields(const RamziConfig& c, double v_top, double v_bottom);

ComplexAmplitude ramzi_output(const RamziConfig& c, double v_top, double v_bottom);
inline ComplexAmplitude ramzi_output(const RamziConfig& c, DrivePair p) {
  return ramzi_output(c, p.v_top, p.v_bottom);
}

struct OutputPhase {
  double phase = 0.0;
  /// | |H_T| - |H_B| | / sqrt(2) exceeded the amplitude tolerance.
  bool amplitude_mismatch = false;
  double amplitude_difference = 0.0;
};

OutputPhase ramzi_output_phase(const RamziConfig& c, double v_top, double v_bottom,
                               double amplitude_tolerance = 0.01);

double ramzi_power(const RamziConfig& c, double v_top, double v_bottom);

/// |E(hi)| - |E(lo)|. Negative when hi and lo are swapped; not corrected.
double ramzi_oma_e(const RamziConfig& c, DrivePair hi, DrivePair lo);

struct DriveLevel {
  double v_top = 0.0;
  double v_bottom = 0.0;
  /// Output field projected on the constellation axis (signed).
  double field_level = 0.0;
};

struct DriveLevelTable {
  std::vector<DriveLevel> entries;
  /// Largest |spacing_k - mean spacing| over full swing.
  double spacing_residual = 0.0;
  /// Spacing residual within tolerance.
  bool spacing_ok = true;
  /// Largest arm amplitude mismatch | |H_T| - |H_B| | / sqrt(2).
  double max_amplitude_mismatch = 0.0;
  /// Largest |arg H_T + arg H_B| (rad).
  double max_phase_mismatch = 0.0;
};

/// Unit vector angle of the constellation axis of a configured RAMZI:
/// -phi_ps/2, flipped by pi so the mean of the two drive extremes projects
/// non-negative. For a zero-mean pair, (v_high, v_low) projects positive.
double axis_phase(const RamziConfig& c);

/// Projection Re(E e^{-i axis}).
double field_projection(const RamziConfig& c, ComplexAmplitude e);

/// Largest pairwise deviation of arg(E) from the axis, folded mod pi (rad).
/// Equal to the plain pairwise spread when no point changes sign.
double phase_spread(const RamziConfig& c, const std::vector<ComplexAmplitude>& fields);
double phase_spread(const RamziConfig& c, const DriveLevelTable& table);

struct Constellation {
  std::vector<ComplexAmplitude> points;
  /// Gray-coded label of each point: I bits high, Q bits low.
  std::vector<unsigned> symbols;
  ComplexAmplitude offset;
  /// Spread between outer levels of one dimension, in constellation units
  /// (includes the final 1/sqrt(2) of the I/Q combiner).
  double oma_e_per_dimension = 0.0;
};

/// Gray code of a level index.
unsigned gray_code(unsigned k);

/// Points (E_I + i E_Q) / sqrt(2), each dimension de-rotated onto its axis
/// and normalized to unit field at its RAMZI input.
Constellation build_constellation(const RamziConfig& i_config, const RamziConfig& q_config,
                                  const DriveLevelTable& i_levels,
                                  const DriveLevelTable& q_levels);

}  // namespace ramzi
