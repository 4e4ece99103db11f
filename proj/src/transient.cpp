#include "ramzi/transient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ramzi/errors.hpp"
#include "ramzi/simd/kernels.hpp"

namespace ramzi {

namespace {

constexpr double kPi = std::numbers::pi;

double fold_half_turn(double x) {
  double d = std::remainder(x, kPi);
  if (d <= -0.5 * kPi) d += kPi;
  return d;
}

double wrap_pi(double x) {
  double d = std::remainder(x, 2.0 * kPi);
  if (d <= -kPi) d += 2.0 * kPi;
  return d;
}

void arm_field(const MrmModel& m, double heater, double laser_nm, const std::vector<double>& volts,
               std::vector<double>& re, std::vector<double>& im) {
  std::vector<double> theta(volts.size());
  for (std::size_t k = 0; k < volts.size(); ++k)
    theta[k] = ring_phase(m, 1e3 * (resonance_wavelength_nm(m, volts[k], heater) - laser_nm));
  re.resize(volts.size());
  im.resize(volts.size());
  simd::ring_transfer(m.self_coupling, m.round_trip_amplitude, theta, re, im);
}

}  // namespace

double single_pole_alpha(double f_hz, double dt_s) {
  if (std::isinf(f_hz)) return 1.0;
  return 1.0 - std::exp(-2.0 * kPi * f_hz * dt_s);
}

std::pair<std::vector<double>, std::vector<double>> drive_voltages(const DriveWaveform& w,
                                                                   int samples_per_ui) {
  if (samples_per_ui < 2) throw ValidationError("samples_per_ui", "need at least 2");
  const std::size_t n = w.symbols.size();
  if (n == 0) throw ValidationError("symbols", "empty sequence");
  const auto& tab = w.level_table.entries;
  for (auto s : w.symbols)
    if (s >= tab.size()) throw ValidationError("symbols", "level index outside the table");

  const std::size_t total = n * static_cast<std::size_t>(samples_per_ui);
  std::vector<double> vt(total), vb(total);
  const double r = w.rise_fall_fraction;
  for (std::size_t m = 0; m < total; ++m) {
    const double t = static_cast<double>(m) / samples_per_ui;
    const std::size_t k = m / static_cast<std::size_t>(samples_per_ui);
    const double frac = t - static_cast<double>(k);
    std::size_t from = k, to = k;
    double w_to = 1.0;
    if (r > 0.0 && frac < 0.5 * r) {
      // Ramp in from the previous symbol.
      from = (k + n - 1) % n;
      w_to = 0.5 + frac / r;
    } else if (r > 0.0 && frac > 1.0 - 0.5 * r) {
      to = (k + 1) % n;
      w_to = (frac - (1.0 - 0.5 * r)) / r;
    }
    const auto& a = tab[w.symbols[from]];
    const auto& b = tab[w.symbols[to]];
    vt[m] = (1.0 - w_to) * a.v_top + w_to * b.v_top;
    vb[m] = (1.0 - w_to) * a.v_bottom + w_to * b.v_bottom;
  }
  return {std::move(vt), std::move(vb)};
}

EyeResult simulate_eye(const RamziConfig& config, const DriveWaveform& wave, const EyeOptions& opt) {
  validate(config);
  const int spui = opt.samples_per_ui;
  if (spui < 2 || spui % 2 != 0) throw ValidationError("samples_per_ui", "must be even and >= 2");
  if (wave.level_table.entries.size() != 4)
    throw ValidationError("level_table", "eye analysis needs a 4-level table");
  const double budget = opt.phase_budget_deg * kPi / 180.0;
  const double static_spread = phase_spread(config, wave.level_table);
  if (static_spread > 5.0 * budget)
    throw ValidationError("level_table", "config looks untuned: static phase spread " +
                                             std::to_string(static_spread * 180.0 / kPi) +
                                             " deg exceeds 5x the " +
                                             std::to_string(opt.phase_budget_deg) + " deg budget");

  const auto [vt1, vb1] = drive_voltages(wave, spui);
  const std::size_t per = vt1.size();
  const std::size_t total = 2 * per;
  const double dt = 1.0 / (wave.baud_gbd * 1e9 * spui);
  const double alpha = single_pole_alpha(wave.eo_bandwidth_ghz * 1e9, dt);

  std::vector<double> vt(total), vb(total);
  double yt = vt1[0], yb = vb1[0];
  for (std::size_t m = 0; m < total; ++m) {
    yt += alpha * (vt1[m % per] - yt);
    yb += alpha * (vb1[m % per] - yb);
    vt[m] = yt;
    vb[m] = yb;
  }
  // Analyse the second period only.
  vt.erase(vt.begin(), vt.begin() + static_cast<std::ptrdiff_t>(per));
  vb.erase(vb.begin(), vb.begin() + static_cast<std::ptrdiff_t>(per));

  std::vector<double> tr, ti, br, bi, er(per), ei(per);
  arm_field(config.mrm_top, config.heater_top_mw, config.laser_wavelength_nm, vt, tr, ti);
  arm_field(config.mrm_bottom, config.heater_bottom_mw, config.laser_wavelength_nm, vb, br, bi);
  simd::ramzi_combine(tr, ti, br, bi, std::cos(config.phi_ps), std::sin(config.phi_ps), er, ei);

  const double axis = axis_phase(config);
  EyeResult res;
  const std::size_t fold = 2 * static_cast<std::size_t>(spui);
  const std::size_t offset =
      static_cast<std::size_t>(((opt.fold_offset % static_cast<int>(fold)) + static_cast<int>(fold)) %
                               static_cast<int>(fold));
  for (auto* e : {&res.amplitude, &res.phase}) {
    e->time_ui.resize(per);
    e->value.resize(per);
    e->trace_id.resize(per);
  }
  for (std::size_t m = 0; m < per; ++m) {
    const std::size_t shifted = m + offset;
    const double t_ui = static_cast<double>(shifted % fold) / spui;
    const int id = static_cast<int>(shifted / fold);
    const ComplexAmplitude e(er[m], ei[m]);
    res.amplitude.time_ui[m] = res.phase.time_ui[m] = t_ui;
    res.amplitude.trace_id[m] = res.phase.trace_id[m] = id;
    res.amplitude.value[m] = std::abs(e);
    res.phase.value[m] = wrap_pi(std::arg(e) - axis) * 180.0 / kPi;
  }

  // Metrics at UI centres, independent of the folding origin.
  std::array<double, 4> sum{}, lo{}, hi{};
  std::array<std::size_t, 4> count{};
  lo.fill(INFINITY);
  hi.fill(-INFINITY);
  double ph_lo = INFINITY, ph_hi = -INFINITY;
  const std::size_t n = wave.symbols.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = k * static_cast<std::size_t>(spui) + static_cast<std::size_t>(spui / 2);
    const ComplexAmplitude e(er[m], ei[m]);
    const double a = std::abs(e);
    const std::size_t l = wave.symbols[k];
    sum[l] += a;
    ++count[l];
    lo[l] = std::min(lo[l], a);
    hi[l] = std::max(hi[l], a);
    const double d = fold_half_turn(std::arg(e) - axis);
    ph_lo = std::min(ph_lo, d);
    ph_hi = std::max(ph_hi, d);
  }
  EyeMetrics& mt = res.metrics;
  for (std::size_t l = 0; l < 4; ++l)
    mt.sampled_levels[l] = count[l] ? sum[l] / static_cast<double>(count[l]) : NAN;
  mt.oma_e = mt.sampled_levels[3] - mt.sampled_levels[0];
  mt.phase_error_deg = (ph_hi - ph_lo) * 180.0 / kPi;
  mt.levels_resolvable = true;
  for (std::size_t l = 0; l < 3; ++l) {
    mt.inner_eye_openings[l] = (count[l] && count[l + 1]) ? lo[l + 1] - hi[l] : NAN;
    if (!(mt.inner_eye_openings[l] > 0.0)) mt.levels_resolvable = false;
  }
  return res;
}

std::pair<EyeResult, EyeResult> simulate_eye(const RamziConfig& config, const DriveWaveform& wave_i,
                                             const DriveWaveform& wave_q, const EyeOptions& opt) {
  return {simulate_eye(config, wave_i, opt), simulate_eye(config, wave_q, opt)};
}

}  // namespace ramzi
