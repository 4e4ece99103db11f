#pragma once

// Lumped opto-thermal model of one ring:
//   C dT/dt = P_heater + f P_in (1 - |H|²) - (T - T_amb) / R_th,  C = tau / R_th
// with the resonance moved by (thermal_shift / R_th) per kelvin of rise, so a
// heater-only steady state reproduces the heater shift coefficient. Explicit
// Euler throughout.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ramzi/devices.hpp"

namespace ramzi {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

struct ThermalSeries {
  std::vector<double> time_s;
  /// Temperature rise over ambient at the start of each step.
  std::vector<double> delta_t_k;
  std::vector<double> heater_mw;
  std::vector<double> voltage;
  /// |H| seen at each step for the applied voltage.
  std::vector<double> transmission;
  /// f P_in (1 - |H|²) at each step.
  std::vector<double> absorbed_mw;
};

/// Integrate over heater_mw.size() steps. `drive_v` must have the same
/// length. Initial rise defaults to R_th * heater_mw[0]. Throws
/// ValidationError when dt > tau / 50, NumericalError with the step index on
/// a non-finite state.
ThermalSeries integrate_thermal(const MrmModel& m, double input_power_dbm,
                                std::span<const double> heater_mw,
                                std::span<const double> drive_v, double dt,
                                double laser_wavelength_nm,
                                std::optional<double> initial_delta_t_k = std::nullopt);

enum class SweepDirection { Up, Down };
std::string_view to_string(SweepDirection d);

struct ThermalTrace {
  /// Lag-compensated heater power P(t) - (dP/dt) tau of each record.
  std::vector<double> heater_powers;
  std::vector<double> transmission_v0;
  std::vector<double> transmission_v4;
  SweepDirection direction = SweepDirection::Up;
  double input_power_dbm = 0.0;
};

struct StabilityReport {
  bool bistable = false;
  double max_hysteresis_gap = 0.0;
  bool metastable = false;
  double max_jump = 0.0;
  std::optional<double> onset_power_dbm;
  double gap_threshold = 0.0;
  double jump_threshold = 0.0;
};

struct SweepOptions {
  double laser_wavelength_nm = 1310.0;
  /// Dither states (V). Records report |H| at both.
  double v_on = 0.0;
  double v_off = -4.0;
  std::size_t records = 1001;
  /// Fractions of the observed transmission swing.
  double gap_fraction = 0.01;
  double jump_fraction = 0.05;
  /// Zero selects min(tau / 100, 1 / (10 rate)).
  double dt = 0.0;
};

struct SweepResult {
  ThermalTrace up;
  ThermalTrace down;
  StabilityReport report;
};

/// Heater ramps p_min -> p_max and back over `duration_s` each while the
/// drive toggles between the two states at `drive_rate_hz`. The ramps are
/// offset by the first-order lag r tau so both traces share one heater axis
/// and zero-light traces coincide exactly.
SweepResult sweep_and_diagnose(const MrmModel& m, double input_power_dbm, double p_min_mw,
                               double p_max_mw, double duration_s, double drive_rate_hz,
                               const SweepOptions& opt = {});

/// Bisection on input power for the lowest power reported bistable or
/// metastable. Empty when p_lo is already unstable or p_hi is stable.
std::optional<double> find_instability_onset(const MrmModel& m, double p_lo_dbm, double p_hi_dbm,
                                             double p_min_mw, double p_max_mw, double duration_s,
                                             double drive_rate_hz, const SweepOptions& opt = {},
                                             double tolerance_db = 0.02);

struct Equilibrium {
  double delta_t_k = 0.0;
  bool stable = false;
};

/// Fixed points of the drive-averaged steady state
///   dT = R (P_h + f P_in (1 - mean_v |H(dT, v)|²))
/// for a 50 % duty dither over `voltages`.
std::vector<Equilibrium> thermal_equilibria(const MrmModel& m, double input_power_dbm,
                                            double heater_mw, std::span<const double> voltages,
                                            double laser_wavelength_nm);

}  // namespace ramzi
