#pragma once

// Quasi-static field models for the microring modulator, the thermal phase
// shifter, the 3 dB splitter/combiner and the reference Mach-Zehnder
// modulator used by the link budget.
//
// Units: lengths in µm (radius) and nm (wavelengths), resonance shifts in pm,
// heater power in mW, temperatures in K, time in s.

#include <complex>
#include <string_view>
#include <utility>
#include <vector>

namespace ramzi {

/// Normalized optical field, referenced to a unit field at the device input.
using ComplexAmplitude = std::complex<double>;

enum class CouplingRegime { Under, Critical, Over };

std::string_view to_string(CouplingRegime r);
CouplingRegime coupling_regime_from_string(std::string_view s);

struct MrmModel {
  double radius_um = 7.5;
  double group_index = 4.2;
  /// Loaded Q the coupling pair was calibrated to.
  double q_factor = 3500.0;
  /// Field self-coupling t of the bus coupler.
  double self_coupling = 0.9341112429;
  /// Round-trip field amplitude a.
  double round_trip_amplitude = 0.9341112429;
  /// Resonance at 0 V, 0 mW heater, ambient temperature.
  double resonance_wavelength_at_rest_nm = 1301.19;
  /// Linear voltage shift; negative bias moves the resonance to shorter
  /// wavelength, so this is positive.
  double modulation_efficiency_pm_per_v = 45.0;
  /// Optional quadratic voltage term (pm/V²).
  double modulation_quadratic_pm_per_v2 = 0.0;
  double thermal_shift_pm_per_mw = 400.0;
  double thermal_resistance_k_per_mw = 5.2;
  double thermal_time_constant_s = 1e-3;
  /// Fraction of extinguished optical power that heats the ring.
  double absorbed_fraction = 0.15;
};

/// Throws ValidationError naming the first bad field.
void validate(const MrmModel& m);

double round_trip_length_nm(const MrmModel& m);
double fsr_nm(const MrmModel& m);

/// Resonance shift relative to rest (pm): affine in V (plus the optional
/// quadratic term) and in heater power.
double resonance_shift_pm(const MrmModel& m, double drive_voltage, double heater_mw);
double resonance_wavelength_nm(const MrmModel& m, double drive_voltage, double heater_mw);

/// Round-trip phase detuning for a resonance-minus-laser offset in pm,
/// folded into (-pi, pi].
double ring_phase(const MrmModel& m, double detuning_pm);

/// All-pass response H(theta) = (t - a e^{i theta}) / (1 - t a e^{i theta}).
ComplexAmplitude ring_response(double t, double a, double theta);

/// Through-port field of the ring for a unit input at `wavelength_nm`.
/// The response is FSR-periodic; any finite wavelength is accepted.
ComplexAmplitude mrm_transfer(const MrmModel& m, double drive_voltage, double heater_mw,
                              double wavelength_nm);

/// Resonance FWHM (nm) from the exact half-depth condition of |H|².
double fwhm_nm(const MrmModel& m);
/// Loaded Q = resonance wavelength / FWHM.
double loaded_q(const MrmModel& m);
/// Min and max of |H| over one FSR.
double min_transmission(const MrmModel& m);
double max_transmission(const MrmModel& m);

struct CalibrationOptions {
  double radius_um = 7.5;
  double group_index = 4.2;
  double wavelength_nm = 1310.0;
  /// Target on-resonance |H| for the under- and over-coupled regimes.
  double extinction = 0.25;
  /// Upper bound on the intrinsic (a-limited) Q considered physical.
  double max_intrinsic_q = 1e6;
};

/// Product x = t·a giving a loaded Q of `target_q` for the given geometry.
double coupling_product_for_q(double target_q, const CalibrationOptions& opt);

/// Solve (t, a) for the target loaded Q in the requested regime. Critical
/// coupling sets t = a; otherwise |t - a| / (1 - t a) = extinction with
/// t > a (under) or t < a (over). Throws InfeasibleError when no pair
/// qualifies. Non-optical fields keep their MrmModel defaults.
MrmModel calibrate_mrm(double target_q, double target_efficiency_pm_per_v,
                       CouplingRegime regime, const CalibrationOptions& opt = {});

/// Multiply by e^{i phase}.
ComplexAmplitude phase_shifter(ComplexAmplitude input, double phase);

/// Ideal 3 dB splitter: both outputs carry input / sqrt(2).
std::pair<ComplexAmplitude, ComplexAmplitude> splitter(ComplexAmplitude input);
/// Ideal 2x1 combiner: (a + b) / sqrt(2).
ComplexAmplitude combiner(ComplexAmplitude a, ComplexAmplitude b);

struct MzmModel {
  /// Field swing from -1 to +1 when fully driven.
  double effective_oma_e = 2.0;
  /// Power swing from 0 to 1 when driven to quadrature swing.
  double effective_oma = 1.0;
  double insertion_loss_db = 4.0;
  double bandwidth_ghz = 100.0;
};

void validate(const MzmModel& m);

/// Evenly spaced field alphabet (after insertion loss) for a fully driven
/// push-pull MZM, symmetric about zero.
std::vector<double> mzm_field_levels(const MzmModel& m, int levels);
/// Evenly spaced power alphabet (after insertion loss) for intensity drive.
std::vector<double> mzm_power_levels(const MzmModel& m, int levels);

}  // namespace ramzi
