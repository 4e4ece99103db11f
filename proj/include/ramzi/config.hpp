#pragma once

// Experiment configuration: one JSON document, strict schema. Unknown keys
// and out-of-range values raise ValidationError naming the dotted key path.
// Every section and key is optional; omitted values take the defaults below.
// The schema is documented in docs/config.md.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramzi/circuit.hpp"
#include "ramzi/link.hpp"
#include "ramzi/thermal.hpp"
#include "ramzi/tuner.hpp"

namespace ramzi {

/// Noise-bandwidth factor reproducing ROQ16 at 200 Gb/s = 6.71 dBm.
inline constexpr double kCalibratedNoiseBandwidth = 0.0162990928;

struct DeviceSection {
  MrmModel mrm;
  CouplingRegime coupling_regime = CouplingRegime::Critical;
  double extinction = 0.25;
  /// True when the config pinned (t, a) explicitly.
  bool explicit_coupling = false;
};

struct RamziSection {
  double phi_ps = 0.0;
  double detuning_offset_pm = 0.0;
  double laser_wavelength_nm = 1310.0;
  bool top_below_laser = true;
  double v_high = 0.0;
  double v_low = -4.0;
};

struct TransientSection {
  double baud_gbd = 50.0;
  int prbs_order = 7;
  double rise_fall_fraction = 0.2;
  double eo_bandwidth_ghz = 35.0;
  int samples_per_ui = 32;
};

struct ThermalSection {
  double input_power_dbm = -5.0;
  double p_min_mw = 21.0;
  double p_max_mw = 23.5;
  double duration_s = 50e-3;
  double drive_rate_hz = 2e6;
  std::size_t records = 1001;
  double gap_fraction = 0.01;
  double jump_fraction = 0.05;
  double onset_search_lo_dbm = -20.0;
  double onset_search_hi_dbm = 5.0;
};

struct PhaseNoiseSection {
  double linewidth_mhz = 1.0;
  double path_mismatch_cm = 1.0;
  double group_index = 1.468;
};

struct LinkSection {
  LinkConfig link;
  PhaseNoiseSection phase_noise;
  double target_ber = 1e-6;
  double power_min_dbm = -10.0;
  double power_max_dbm = 15.0;
  double power_step_dbm = 0.25;
  /// Calibration anchor for the noise bandwidth.
  double anchor_power_dbm = 6.71;
  /// Recalibrate on load instead of using link.noise_bandwidth_factor.
  bool calibrate_noise_bandwidth = false;
};

/// Bias found by `tune`; lets later commands skip re-tuning.
struct BiasSection {
  double heater_top_mw = 0.0;
  double heater_bottom_mw = 0.0;
  std::vector<DriveLevel> drive_table;
  double achieved_oma_e = 0.0;
  double achieved_offset = 0.0;
  double achieved_phase_error_deg = 0.0;
};

struct ExperimentConfig {
  DeviceSection device;
  std::optional<BiasSection> bias;
  RamziSection ramzi;
  TuneSpec tuner;
  RetuneOptions retune;
  TransientSection transient;
  ThermalSection thermal;
  LinkSection link;
  std::string output_dir = "out";
  std::uint64_t seed = 20240501;
};

/// Built-in defaults (the shipped configs/default.json holds the same values).
ExperimentConfig default_config();

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& c);

/// Device model implied by the device section (calibrated unless (t, a)
/// were pinned).
MrmModel device_model(const ExperimentConfig& c);
/// RAMZI template built from the device and ramzi sections.
RamziConfig ramzi_template(const ExperimentConfig& c);
SweepOptions sweep_options(const ExperimentConfig& c);

/// Stored bias when present and consistent with the config, else a fresh
/// tune_static run.
BiasSolution resolve_bias(const ExperimentConfig& c);
/// Copy of `c` with the ramzi section and bias set from `s`.
ExperimentConfig with_bias(ExperimentConfig c, const BiasSolution& s);

}  // namespace ramzi
