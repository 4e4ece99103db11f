#pragma once

// Time-domain RAMZI response to a 4-level drive: piecewise-linear drive
// voltages, a single-pole electro-optic low-pass on each arm's voltage, then
// the quasi-static field map sample by sample.

#include <array>
#include <utility>
#include <vector>

#include "ramzi/circuit.hpp"
#include "ramzi/prbs.hpp"

namespace ramzi {

struct EyeTrace {
  std::vector<double> time_ui;
  std::vector<double> value;
  std::vector<int> trace_id;
};

struct EyeMetrics {
  /// Mean |E| at the UI centre per level index.
  std::array<double, 4> sampled_levels{};
  double oma_e = 0.0;
  /// Largest pairwise spread of the axis-referenced phase at UI centres.
  double phase_error_deg = 0.0;
  /// min(level k+1) - max(level k) at UI centres.
  std::array<double, 3> inner_eye_openings{};
  bool levels_resolvable = false;
};

struct EyeOptions {
  int samples_per_ui = 32;
  /// Folding origin shift in samples.
  int fold_offset = 0;
  double phase_budget_deg = 3.0;
};

struct EyeResult {
  /// |E| folded at 2 UI.
  EyeTrace amplitude;
  /// arg(E) minus the axis phase, in degrees, folded at 2 UI.
  EyeTrace phase;
  EyeMetrics metrics;
};

/// Per-sample drive voltages of one period, sample m at t = m / spui UI,
/// ramps of the rise/fall fraction centred on symbol boundaries (periodic).
std::pair<std::vector<double>, std::vector<double>> drive_voltages(const DriveWaveform& w,
                                                                   int samples_per_ui);

/// Smoothing factor of y += alpha (x - y) for a single pole at f (Hz).
double single_pole_alpha(double f_hz, double dt_s);

/// Simulates two sequence periods and analyses the second. Throws
/// ValidationError when the static phase spread of the level table exceeds
/// five times the budget.
EyeResult simulate_eye(const RamziConfig& config, const DriveWaveform& wave,
                       const EyeOptions& opt = {});

/// I and Q dimensions driven by separate waveforms through identical,
/// independently biased RAMZIs.
std::pair<EyeResult, EyeResult> simulate_eye(const RamziConfig& config, const DriveWaveform& wave_i,
                                             const DriveWaveform& wave_q, const EyeOptions& opt = {});

}  // namespace ramzi
