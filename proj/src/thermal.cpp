#include "ramzi/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ramzi/errors.hpp"

namespace ramzi {

namespace {

struct RingState {
  const MrmModel& m;
  double laser_nm;
  double p_in_mw;

  double transmission(double delta_t, double v) const {
    // A rise of dT moves the resonance like a heater power of dT / R_th.
    return std::abs(mrm_transfer(m, v, delta_t / m.thermal_resistance_k_per_mw, laser_nm));
  }
  double absorbed(double trans) const {
    return m.absorbed_fraction * p_in_mw * (1.0 - trans * trans);
  }
};

double step_euler(const MrmModel& m, double delta_t, double heater, double absorbed, double dt) {
  const double capacity = m.thermal_time_constant_s / m.thermal_resistance_k_per_mw;
  return delta_t + dt / capacity * (heater + absorbed - delta_t / m.thermal_resistance_k_per_mw);
}

bool dither_on(double t, double rate) {
  return static_cast<long long>(std::floor(2.0 * rate * t + 1e-9)) % 2 == 0;
}

}  // namespace

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

std::string_view to_string(SweepDirection d) { return d == SweepDirection::Up ? "up" : "down"; }

ThermalSeries integrate_thermal(const MrmModel& m, double input_power_dbm,
                                std::span<const double> heater_mw,
                                std::span<const double> drive_v, double dt,
                                double laser_wavelength_nm,
                                std::optional<double> initial_delta_t_k) {
  validate(m);
  if (heater_mw.size() != drive_v.size())
    throw ValidationError("drive_v", "length differs from heater schedule");
  if (heater_mw.empty()) throw ValidationError("heater_mw", "empty schedule");
  if (!(dt > 0.0) || dt > m.thermal_time_constant_s / 50.0)
    throw ValidationError("dt", "must lie in (0, tau/50]");
  if (!std::isfinite(input_power_dbm) && input_power_dbm != -INFINITY)
    throw ValidationError("input_power_dbm", "must be finite or -inf");

  const RingState ring{m, laser_wavelength_nm, dbm_to_mw(input_power_dbm)};
  const std::size_t n = heater_mw.size();
  ThermalSeries s;
  s.time_s.resize(n);
  s.delta_t_k.resize(n);
  s.heater_mw.assign(heater_mw.begin(), heater_mw.end());
  s.voltage.assign(drive_v.begin(), drive_v.end());
  s.transmission.resize(n);
  s.absorbed_mw.resize(n);

  double temp = initial_delta_t_k.value_or(m.thermal_resistance_k_per_mw * heater_mw[0]);
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(temp) || !std::isfinite(heater_mw[k]) || !std::isfinite(drive_v[k]))
      throw NumericalError("thermal state became non-finite at step " + std::to_string(k));
    const double trans = ring.transmission(temp, drive_v[k]);
    const double absorbed = ring.absorbed(trans);
    s.time_s[k] = static_cast<double>(k) * dt;
    s.delta_t_k[k] = temp;
    s.transmission[k] = trans;
    s.absorbed_mw[k] = absorbed;
    temp = step_euler(m, temp, heater_mw[k], absorbed, dt);
  }
  return s;
}

std::vector<Equilibrium> thermal_equilibria(const MrmModel& m, double input_power_dbm,
                                            double heater_mw, std::span<const double> voltages,
                                            double laser_wavelength_nm) {
  validate(m);
  if (voltages.empty()) throw ValidationError("voltages", "need at least one drive state");
  const RingState ring{m, laser_wavelength_nm, dbm_to_mw(input_power_dbm)};
  const double r = m.thermal_resistance_k_per_mw;
  auto residual = [&](double dt_k) {
    double absorbed = 0.0;
    for (double v : voltages) absorbed += ring.absorbed(ring.transmission(dt_k, v));
    absorbed /= static_cast<double>(voltages.size());
    return dt_k - r * (heater_mw + absorbed);
  };

  // Every root lies between the dark and fully absorbing steady states.
  const double lo = r * heater_mw;
  const double hi = r * (heater_mw + m.absorbed_fraction * ring.p_in_mw);
  if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) return {{lo, true}};

  // Grid fine against the linewidth expressed in kelvin.
  const double k_per_pm = r / std::max(m.thermal_shift_pm_per_mw, 1e-300);
  const double fwhm_k = 1e3 * fwhm_nm(m) * k_per_pm;
  const std::size_t n = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(200.0 * (hi - lo) / std::max(fwhm_k, 1e-300))), 2000,
      2000000);
  std::vector<Equilibrium> out;
  double x0 = lo, f0 = residual(lo);
  for (std::size_t k = 1; k <= n; ++k) {
    const double x1 = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
    const double f1 = residual(x1);
    if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
      double a = x0, b = x1, fa = f0;
      if (f0 != 0.0) {
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = residual(mid);
          if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
      }
      const double root = f0 == 0.0 ? x0 : 0.5 * (a + b);
      // F rising through zero is stable: a perturbation upward cools.
      const bool stable = f0 == 0.0 ? f1 > 0.0 : f0 < 0.0;
      if (out.empty() || std::abs(out.back().delta_t_k - root) > 1e-12)
        out.push_back({root, stable});
    }
    x0 = x1;
    f0 = f1;
  }
  if (out.empty()) {
    // Endpoint roots when the residual only touches zero.
    out.push_back({std::abs(residual(lo)) < std::abs(residual(hi)) ? lo : hi, true});
  }
  return out;
}

SweepResult sweep_and_diagnose(const MrmModel& m, double input_power_dbm, double p_min_mw,
                               double p_max_mw, double duration_s, double drive_rate_hz,
                               const SweepOptions& opt) {
  validate(m);
  if (!(p_max_mw > p_min_mw)) throw ValidationError("range_mw", "need p_max > p_min");
  if (!(duration_s > 0.0)) throw ValidationError("duration_s", "must be positive");
  if (!(drive_rate_hz > 0.0)) throw ValidationError("drive_rate_hz", "must be positive");
  if (opt.records < 2) throw ValidationError("records", "need at least 2");

  const double tau = m.thermal_time_constant_s;
  const double dt_max = opt.dt > 0.0 ? opt.dt : std::min(tau / 100.0, 1.0 / (10.0 * drive_rate_hz));
  const std::size_t intervals = opt.records - 1;
  const std::size_t per_record = static_cast<std::size_t>(
      std::ceil(duration_s / dt_max / static_cast<double>(intervals) - 1e-9));
  const double dt = duration_s / static_cast<double>(intervals * per_record);
  const double rate = (p_max_mw - p_min_mw) / duration_s;
  const RingState ring{m, opt.laser_wavelength_nm, dbm_to_mw(input_power_dbm)};
  const double r_th = m.thermal_resistance_k_per_mw;
  const double states[2] = {opt.v_on, opt.v_off};

  auto run = [&](SweepDirection dir) {
    const double slope = dir == SweepDirection::Up ? rate : -rate;
    const double p_eff0 = dir == SweepDirection::Up ? p_min_mw : p_max_mw;
    // Heater schedule leads the indexed power by the steady ramp lag.
    auto heater_at = [&](double t) { return p_eff0 + slope * (t + tau); };

    const auto eq = thermal_equilibria(m, input_power_dbm, p_eff0, states, opt.laser_wavelength_nm);
    const double dark = r_th * p_eff0;
    double temp = eq.front().delta_t_k;
    for (const auto& e : eq)
      if (std::abs(e.delta_t_k - dark) < std::abs(temp - dark)) temp = e.delta_t_k;

    ThermalTrace tr;
    tr.direction = dir;
    tr.input_power_dbm = input_power_dbm;
    tr.heater_powers.reserve(opt.records);
    tr.transmission_v0.reserve(opt.records);
    tr.transmission_v4.reserve(opt.records);
    const std::size_t steps = intervals * per_record;
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      if (k % per_record == 0) {
        const std::size_t j = k / per_record;
        tr.heater_powers.push_back(dir == SweepDirection::Up
                                       ? p_min_mw + (p_max_mw - p_min_mw) * static_cast<double>(j) / static_cast<double>(intervals)
                                       : p_max_mw - (p_max_mw - p_min_mw) * static_cast<double>(j) / static_cast<double>(intervals));
        tr.transmission_v0.push_back(ring.transmission(temp, opt.v_on));
        tr.transmission_v4.push_back(ring.transmission(temp, opt.v_off));
      }
      if (k == steps) break;
      const double v = dither_on(t, drive_rate_hz) ? opt.v_on : opt.v_off;
      const double absorbed = ring.absorbed(ring.transmission(temp, v));
      temp = step_euler(m, temp, heater_at(t), absorbed, dt);
      if (!std::isfinite(temp))
        throw NumericalError("thermal sweep became non-finite at step " + std::to_string(k));
    }
    return tr;
  };

  SweepResult res;
  res.up = run(SweepDirection::Up);
  res.down = run(SweepDirection::Down);

  double lo = 1.0, hi = 0.0;
  for (const auto* tr : {&res.up, &res.down}) {
    for (const auto* v : {&tr->transmission_v0, &tr->transmission_v4}) {
      const auto [a, b] = std::minmax_element(v->begin(), v->end());
      lo = std::min(lo, *a);
      hi = std::max(hi, *b);
    }
  }
  const double swing = std::max(0.0, hi - lo);
  StabilityReport& rep = res.report;
  rep.gap_threshold = opt.gap_fraction * swing;
  rep.jump_threshold = opt.jump_fraction * swing;
  const std::size_t n = opt.records;
  for (std::size_t j = 0; j < n; ++j) {
    rep.max_hysteresis_gap = std::max(
        {rep.max_hysteresis_gap, std::abs(res.up.transmission_v0[j] - res.down.transmission_v0[n - 1 - j]),
         std::abs(res.up.transmission_v4[j] - res.down.transmission_v4[n - 1 - j])});
  }
  for (const auto* tr : {&res.up, &res.down}) {
    for (const auto* v : {&tr->transmission_v0, &tr->transmission_v4}) {
      for (std::size_t j = 1; j < n; ++j)
        rep.max_jump = std::max(rep.max_jump, std::abs((*v)[j] - (*v)[j - 1]));
    }
  }
  rep.bistable = rep.max_hysteresis_gap > rep.gap_threshold;
  rep.metastable = rep.max_jump > rep.jump_threshold;
  return res;
}

std::optional<double> find_instability_onset(const MrmModel& m, double p_lo_dbm, double p_hi_dbm,
                                             double p_min_mw, double p_max_mw, double duration_s,
                                             double drive_rate_hz, const SweepOptions& opt,
                                             double tolerance_db) {
  if (!(p_hi_dbm > p_lo_dbm)) throw ValidationError("p_hi_dbm", "must exceed p_lo_dbm");
  auto unstable = [&](double dbm) {
    const auto r = sweep_and_diagnose(m, dbm, p_min_mw, p_max_mw, duration_s, drive_rate_hz, opt).report;
    return r.bistable || r.metastable;
  };
  if (unstable(p_lo_dbm) || !unstable(p_hi_dbm)) return std::nullopt;
  double lo = p_lo_dbm, hi = p_hi_dbm;
  while (hi - lo > tolerance_db) {
    const double mid = 0.5 * (lo + hi);
    (unstable(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace ramzi
