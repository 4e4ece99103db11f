#pragma once

// Bias tuning for one RAMZI:
//   1. grid over the symmetric detuning delta and the arm phase phi_ps,
//      scoring the two drive extremes (low optical power, no self-heating);
//   2. intermediate drive pairs on the equal-amplitude, opposite-phase locus
//      at evenly spaced output fields;
//   3. heater re-tune at operating optical power so the dithered mean
//      temperatures match the low-power bias.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ramzi/circuit.hpp"

namespace ramzi {

enum class TuneObjective { MaxOmaE, TargetOffset, Blend };

std::string_view to_string(TuneObjective o);
TuneObjective tune_objective_from_string(std::string_view s);

struct LevelSearchSpec {
  int levels = 4;
  std::size_t grid_points = 401;
  /// | |H_T| - |H_B| | / sqrt(2) bound per entry.
  double amplitude_tolerance = 0.01;
  double phase_tolerance_deg = 3.0;
  /// Spacing residual bound as a fraction of the full swing.
  double spacing_tolerance = 0.02;
};

struct TuneSpec {
  double delta_min_pm = 10.0;
  double delta_max_pm = 200.0;
  double delta_step_pm = 2.0;
  std::size_t phi_steps = 720;
  TuneObjective objective = TuneObjective::Blend;
  /// Desired mean field of the two extremes (offset objectives).
  double target_offset = 0.42;
  /// Blend score: OMA_E - weight * |offset - target|.
  double blend_weight = 5.0;
  double phase_budget_deg = 3.0;
  LevelSearchSpec levels;
  /// Optical power of the tuning stage; self-heating is disabled here.
  double tuning_power_dbm = -20.0;
};

struct SweepSurfacePoint {
  double delta_pm = 0.0;
  double phi_ps = 0.0;
  double oma_e = 0.0;
  double offset = 0.0;
  double objective = 0.0;
  bool feasible = false;
};

struct BiasSolution {
  RamziConfig config;
  double heater_top_mw = 0.0;
  double heater_bottom_mw = 0.0;
  double phi_ps = 0.0;
  double detuning_offset_pm = 0.0;
  DriveLevelTable drive_table;
  double achieved_oma_e = 0.0;
  double achieved_offset = 0.0;
  double achieved_phase_error_deg = 0.0;
  double objective_value = 0.0;
  /// Optical power at each ring input the heaters are set for.
  double optical_power_dbm = -20.0;
  /// Mean absorbed optical heat per ring at that power (mW).
  double self_heating_top_mw = 0.0;
  double self_heating_bottom_mw = 0.0;
};

/// Score of one (delta, phi) point for the given objective and extremes.
struct ExtremeScore {
  double hi = 0.0;
  double lo = 0.0;
  double oma_e = 0.0;
  double offset = 0.0;
  double objective = 0.0;
  bool feasible = false;
};

ExtremeScore score_extremes(ComplexAmplitude e_a, ComplexAmplitude e_b, const ArmFields& arms_a,
                            const ArmFields& arms_b, const TuneSpec& spec, double delta_pm);

/// Stage 1 and 2. `surface`, when given, receives every grid point in
/// (delta, phi) order. Throws InfeasibleError listing the nearest misses
/// when no grid point has admissible extremes.
BiasSolution tune_static(const RamziConfig& tmpl, const TuneSpec& spec = {},
                         std::vector<SweepSurfacePoint>* surface = nullptr);

/// Stage 2 for a fixed bias. n == 2 returns the drive extremes. Entries are
/// ordered by increasing field_level.
DriveLevelTable find_drive_levels(const RamziConfig& c, const LevelSearchSpec& spec = {});

/// For one top voltage, the bottom voltage minimizing |H_T - conj(H_B)|
/// (grid scan plus golden-section refinement).
double conjugate_partner(const RamziConfig& c, double v_top, std::size_t grid_points = 401);

struct RetuneOptions {
  double drive_rate_hz = 2e6;
  /// Integration window for the ODE check, in thermal time constants.
  double settle_tau = 20.0;
  double resonance_tolerance_pm = 0.2;
  int max_iterations = 8;
};

/// Stage 3. Heater powers whose dithered mean temperature reproduces the
/// static bias at `optical_power_dbm` per ring. Throws InstabilityError when
/// the required equilibrium is unstable or coexists with others.
BiasSolution retune_at_power(const BiasSolution& solution, double optical_power_dbm,
                             const RetuneOptions& opt = {});

/// Config with the mean self-heating folded into the heater terms, for
/// evaluating fields at the operating power.
RamziConfig operating_config(const BiasSolution& s);

}  // namespace ramzi
