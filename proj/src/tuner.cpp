#include "ramzi/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ramzi/errors.hpp"
#include "ramzi/simd/kernels.hpp"
#include "ramzi/thermal.hpp"

namespace ramzi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double wrap_pi(double x) {
  double d = std::remainder(x, 2.0 * kPi);
  if (d <= -kPi) d += 2.0 * kPi;
  return d;
}

double arm_amplitude_mismatch(const ArmFields& h) {
  return std::abs(std::abs(h.top) - std::abs(h.bottom)) * (1.0 / std::numbers::sqrt2);
}

double arm_phase_mismatch(const ArmFields& h) {
  return std::abs(wrap_pi(std::arg(h.top) + std::arg(h.bottom)));
}

template <class F>
double golden_min(F&& f, double a, double b, int iterations = 90) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && (b - a) > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// Detuning phases of one ring across a voltage grid.
std::vector<double> grid_phases(const MrmModel& m, double heater, double laser_nm,
                                const std::vector<double>& volts) {
  std::vector<double> theta(volts.size());
  for (std::size_t k = 0; k < volts.size(); ++k)
    theta[k] = ring_phase(m, 1e3 * (resonance_wavelength_nm(m, volts[k], heater) - laser_nm));
  return theta;
}

struct BottomGrid {
  std::vector<double> volts, re, im;
};

BottomGrid bottom_grid(const RamziConfig& c, std::size_t n) {
  BottomGrid g;
  g.volts.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    g.volts[k] = c.v_low + (c.v_high - c.v_low) * static_cast<double>(k) / static_cast<double>(n - 1);
  const auto theta = grid_phases(c.mrm_bottom, c.heater_bottom_mw, c.laser_wavelength_nm, g.volts);
  g.re.resize(n);
  g.im.resize(n);
  simd::ring_transfer(c.mrm_bottom.self_coupling, c.mrm_bottom.round_trip_amplitude, theta, g.re, g.im);
  return g;
}

double partner_on_grid(const RamziConfig& c, const BottomGrid& g, double v_top,
                       std::vector<double>& scratch) {
  const ComplexAmplitude ht =
      mrm_transfer(c.mrm_top, v_top, c.heater_top_mw, c.laser_wavelength_nm);
  scratch.resize(g.volts.size());
  simd::conj_mismatch(ht, g.re, g.im, scratch);
  const std::size_t j =
      static_cast<std::size_t>(std::min_element(scratch.begin(), scratch.end()) - scratch.begin());
  const std::size_t lo = j == 0 ? 0 : j - 1;
  const std::size_t hi = std::min(j + 1, g.volts.size() - 1);
  return golden_min(
      [&](double vb) {
        return std::abs(ht - std::conj(mrm_transfer(c.mrm_bottom, vb, c.heater_bottom_mw,
                                                     c.laser_wavelength_nm)));
      },
      g.volts[lo], g.volts[hi]);
}

DriveLevel make_level(const RamziConfig& c, double vt, double vb) {
  return {vt, vb, field_projection(c, ramzi_output(c, vt, vb))};
}

void fill_table_stats(const RamziConfig& c, DriveLevelTable& t, double spacing_tol) {
  t.max_amplitude_mismatch = 0.0;
  t.max_phase_mismatch = 0.0;
  for (const auto& e : t.entries) {
    const ArmFields h = arm_fields(c, e.v_top, e.v_bottom);
    t.max_amplitude_mismatch = std::max(t.max_amplitude_mismatch, arm_amplitude_mismatch(h));
    t.max_phase_mismatch = std::max(t.max_phase_mismatch, arm_phase_mismatch(h));
  }
  const std::size_t n = t.entries.size();
  const double swing = t.entries.back().field_level - t.entries.front().field_level;
  const double mean = swing / static_cast<double>(n - 1);
  t.spacing_residual = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double s = t.entries[k].field_level - t.entries[k - 1].field_level;
    t.spacing_residual = std::max(t.spacing_residual, std::abs(s - mean));
  }
  if (swing != 0.0) t.spacing_residual /= std::abs(swing);
  t.spacing_ok = t.spacing_residual <= spacing_tol && swing > 0.0;
}

bool better(double obj, double delta, double phi, double best_obj, double best_delta,
            double best_phi) {
  const double eps = 1e-12 * std::max(1.0, std::abs(best_obj));
  if (obj > best_obj + eps) return true;
  if (obj < best_obj - eps) return false;
  if (delta != best_delta) return delta < best_delta;
  return std::abs(wrap_pi(phi)) < std::abs(wrap_pi(best_phi));
}

}  // namespace

std::string_view to_string(TuneObjective o) {
  switch (o) {
    case TuneObjective::MaxOmaE:
      return "max-oma";
    case TuneObjective::TargetOffset:
      return "target-offset";
    case TuneObjective::Blend:
      return "blend";
  }
  return "blend";
}

TuneObjective tune_objective_from_string(std::string_view s) {
  if (s == "max-oma") return TuneObjective::MaxOmaE;
  if (s == "target-offset") return TuneObjective::TargetOffset;
  if (s == "blend") return TuneObjective::Blend;
  throw ValidationError("objective", "expected max-oma|target-offset|blend, got '" + std::string(s) + "'");
}

namespace {

ExtremeScore score_from(double ma, double mb, double phase_diff, bool arms_ok,
                        const TuneSpec& spec, double delta_pm) {
  ExtremeScore s;
  s.hi = std::max(ma, mb);
  s.lo = std::min(ma, mb);
  s.oma_e = s.hi - s.lo;
  s.offset = 0.5 * (s.hi + s.lo);
  switch (spec.objective) {
    case TuneObjective::MaxOmaE:
      s.objective = s.oma_e;
      break;
    case TuneObjective::TargetOffset:
      s.objective = -std::abs(s.offset - spec.target_offset);
      break;
    case TuneObjective::Blend:
      s.objective = s.oma_e - spec.blend_weight * std::abs(s.offset - spec.target_offset);
      break;
  }
  // Both extremes on one side of the origin, within the phase budget.
  const bool phase_ok = std::abs(phase_diff) <= spec.phase_budget_deg * kDeg;
  const bool contrast_ok = spec.objective != TuneObjective::MaxOmaE || delta_pm > 0.0;
  s.feasible = arms_ok && phase_ok && contrast_ok;
  return s;
}

bool arms_admissible(const ArmFields& a, const ArmFields& b, const TuneSpec& spec) {
  const double amp_tol = spec.levels.amplitude_tolerance;
  const double ph_tol = spec.levels.phase_tolerance_deg * kDeg;
  return arm_amplitude_mismatch(a) <= amp_tol && arm_amplitude_mismatch(b) <= amp_tol &&
         arm_phase_mismatch(a) <= ph_tol && arm_phase_mismatch(b) <= ph_tol;
}

}  // namespace

ExtremeScore score_extremes(ComplexAmplitude e_a, ComplexAmplitude e_b, const ArmFields& arms_a,
                            const ArmFields& arms_b, const TuneSpec& spec, double delta_pm) {
  return score_from(std::abs(e_a), std::abs(e_b), std::arg(e_a * std::conj(e_b)),
                    arms_admissible(arms_a, arms_b, spec), spec, delta_pm);
}

BiasSolution tune_static(const RamziConfig& tmpl, const TuneSpec& spec,
                         std::vector<SweepSurfacePoint>* surface) {
  validate(tmpl);
  if (!(spec.delta_step_pm > 0.0)) throw ValidationError("tuner.delta_step_pm", "must be positive");
  if (spec.delta_max_pm < spec.delta_min_pm)
    throw ValidationError("tuner.delta_max_pm", "must not be below delta_min_pm");
  if (spec.phi_steps < 1) throw ValidationError("tuner.phi_steps", "must be at least 1");

  const std::size_t n_phi = spec.phi_steps;
  std::vector<double> phis(n_phi), cs(n_phi), sn(n_phi), mag_a(n_phi), mag_b(n_phi);
  for (std::size_t j = 0; j < n_phi; ++j) {
    phis[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi);
    cs[j] = std::cos(phis[j]);
    sn[j] = std::sin(phis[j]);
  }
  const std::size_t n_delta = static_cast<std::size_t>(
      std::floor((spec.delta_max_pm - spec.delta_min_pm) / spec.delta_step_pm + 1e-9)) + 1;

  bool found = false;
  double best_obj = -INFINITY, best_delta = 0.0, best_phi = 0.0;
  struct Miss {
    double delta, phi, objective;
    std::string why;
  };
  std::vector<Miss> misses;
  if (surface) surface->clear();

  RamziConfig cfg = tmpl;
  for (std::size_t k = 0; k < n_delta; ++k) {
    const double delta = spec.delta_min_pm + spec.delta_step_pm * static_cast<double>(k);
    cfg.detuning_offset_pm = delta;
    cfg = realize_detuning(cfg);
    const ArmFields arms_a = arm_fields(cfg, cfg.v_high, cfg.v_low);
    const ArmFields arms_b = arm_fields(cfg, cfg.v_low, cfg.v_high);
    const bool arms_ok = arms_admissible(arms_a, arms_b, spec);
    simd::ramzi_magnitude_sweep(arms_a.top, arms_a.bottom, cs, sn, mag_a);
    simd::ramzi_magnitude_sweep(arms_b.top, arms_b.bottom, cs, sn, mag_b);
    for (std::size_t j = 0; j < n_phi; ++j) {
      const ComplexAmplitude rot(cs[j], -sn[j]);
      const double phase_diff = std::arg((arms_a.top + arms_a.bottom * rot) *
                                         std::conj(arms_b.top + arms_b.bottom * rot));
      const ExtremeScore s = score_from(mag_a[j], mag_b[j], phase_diff, arms_ok, spec, delta);
      if (surface)
        surface->push_back({delta, phis[j], s.oma_e, s.offset, s.objective, s.feasible});
      if (!s.feasible) {
        if (misses.size() < 5 || s.objective > misses.back().objective) {
          std::string why = delta <= 0.0 && spec.objective == TuneObjective::MaxOmaE
                                ? "zero drive contrast"
                                : "extremes not equal-amplitude/opposite-phase or on opposite sides";
          misses.push_back({delta, phis[j], s.objective, why});
          std::sort(misses.begin(), misses.end(),
                    [](const Miss& x, const Miss& y) { return x.objective > y.objective; });
          if (misses.size() > 5) misses.pop_back();
        }
        continue;
      }
      if (!found || better(s.objective, delta, phis[j], best_obj, best_delta, best_phi)) {
        found = true;
        best_obj = s.objective;
        best_delta = delta;
        best_phi = phis[j];
      }
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "no grid point gives admissible extremes; nearest misses:";
    for (const auto& m : misses)
      os << " (delta=" << m.delta << " pm, phi=" << m.phi << " rad, objective=" << m.objective
         << ": " << m.why << ")";
    throw InfeasibleError(os.str());
  }

  cfg = tmpl;
  cfg.detuning_offset_pm = best_delta;
  cfg.phi_ps = best_phi;
  cfg = realize_detuning(cfg);

  BiasSolution sol;
  sol.config = cfg;
  sol.heater_top_mw = cfg.heater_top_mw;
  sol.heater_bottom_mw = cfg.heater_bottom_mw;
  sol.phi_ps = best_phi;
  sol.detuning_offset_pm = best_delta;
  sol.objective_value = best_obj;
  sol.optical_power_dbm = spec.tuning_power_dbm;
  sol.drive_table = find_drive_levels(cfg, spec.levels);
  const auto& tab = sol.drive_table.entries;
  sol.achieved_oma_e = std::abs(ramzi_output(cfg, tab.back().v_top, tab.back().v_bottom)) -
                       std::abs(ramzi_output(cfg, tab.front().v_top, tab.front().v_bottom));
  sol.achieved_offset = 0.5 * (tab.back().field_level + tab.front().field_level);
  sol.achieved_phase_error_deg = phase_spread(cfg, sol.drive_table) / kDeg;
  if (!(sol.achieved_phase_error_deg < spec.phase_budget_deg))
    throw InfeasibleError("drive table phase error " + std::to_string(sol.achieved_phase_error_deg) +
                          " deg exceeds the budget of " + std::to_string(spec.phase_budget_deg) + " deg");
  return sol;
}

double conjugate_partner(const RamziConfig& c, double v_top, std::size_t grid_points) {
  if (grid_points < 3) throw ValidationError("grid_points", "need at least 3");
  const BottomGrid g = bottom_grid(c, grid_points);
  std::vector<double> scratch;
  return partner_on_grid(c, g, v_top, scratch);
}

DriveLevelTable find_drive_levels(const RamziConfig& c, const LevelSearchSpec& spec) {
  validate(c);
  if (spec.levels < 2) throw ValidationError("levels.levels", "need at least 2");
  if (spec.grid_points < 3) throw ValidationError("levels.grid_points", "need at least 3");

  DriveLevel ea = make_level(c, c.v_high, c.v_low);
  DriveLevel eb = make_level(c, c.v_low, c.v_high);
  if (ea.field_level > eb.field_level) std::swap(ea, eb);

  DriveLevelTable table;
  table.entries.push_back(ea);
  if (spec.levels > 2) {
    const BottomGrid g = bottom_grid(c, spec.grid_points);
    std::vector<double> scratch;
    auto locus = [&](double vt) {
      const double vb = partner_on_grid(c, g, vt, scratch);
      return make_level(c, vt, vb);
    };
    // Locus sampled on the top-voltage grid, walked from the low extreme.
    std::vector<DriveLevel> samples;
    samples.reserve(g.volts.size());
    for (double vt : g.volts) samples.push_back(locus(vt));
    if (ea.v_top != c.v_low) std::reverse(samples.begin(), samples.end());
    samples.front() = ea;
    samples.back() = eb;

    for (int m = 1; m < spec.levels - 1; ++m) {
      const double target = ea.field_level + (eb.field_level - ea.field_level) *
                                                 static_cast<double>(m) / (spec.levels - 1);
      std::optional<DriveLevel> hit;
      for (std::size_t k = 0; k + 1 < samples.size() && !hit; ++k) {
        const double f0 = samples[k].field_level - target;
        const double f1 = samples[k + 1].field_level - target;
        if (f0 == 0.0) {
          hit = samples[k];
        } else if ((f0 < 0.0) != (f1 < 0.0)) {
          double a = samples[k].v_top, b = samples[k + 1].v_top, fa = f0;
          DriveLevel mid_level = samples[k];
          for (int it = 0; it < 60 && std::abs(b - a) > 1e-12; ++it) {
            const double mid = 0.5 * (a + b);
            mid_level = locus(mid);
            const double fm = mid_level.field_level - target;
            if ((fm < 0.0) == (fa < 0.0)) {
              a = mid;
              fa = fm;
            } else {
              b = mid;
            }
          }
          hit = mid_level;
        }
      }
      if (!hit) {
        // Unreachable: nearest locus sample; the residual reports it.
        hit = *std::min_element(samples.begin(), samples.end(), [&](const auto& x, const auto& y) {
          return std::abs(x.field_level - target) < std::abs(y.field_level - target);
        });
      }
      table.entries.push_back(*hit);
    }
  }
  table.entries.push_back(eb);
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const auto& x, const auto& y) { return x.field_level < y.field_level; });
  fill_table_stats(c, table, spec.spacing_tolerance);
  return table;
}

RamziConfig operating_config(const BiasSolution& s) {
  RamziConfig c = s.config;
  c.heater_top_mw = s.heater_top_mw + s.self_heating_top_mw;
  c.heater_bottom_mw = s.heater_bottom_mw + s.self_heating_bottom_mw;
  return c;
}

BiasSolution retune_at_power(const BiasSolution& solution, double optical_power_dbm,
                             const RetuneOptions& opt) {
  const RamziConfig& base = solution.config;
  validate(base);
  if (!(opt.drive_rate_hz > 0.0)) throw ValidationError("drive_rate_hz", "must be positive");
  const double states[2] = {base.v_high, base.v_low};
  const double p_in = dbm_to_mw(optical_power_dbm);

  struct RingResult {
    double heater, self_heating;
  };
  auto solve_ring = [&](const MrmModel& m, double static_heater, const char* name) -> RingResult {
    const double r_th = m.thermal_resistance_k_per_mw;
    const double fsr_heater = 1e3 * fsr_nm(m) / std::max(m.thermal_shift_pm_per_mw, 1e-300);
    auto mean_absorbed = [&](double heater_equiv) {
      double s = 0.0;
      for (double v : states) {
        const double h = std::abs(mrm_transfer(m, v, heater_equiv, base.laser_wavelength_nm));
        s += m.absorbed_fraction * p_in * (1.0 - h * h);
      }
      return 0.5 * s;
    };
    // Target: same resonance as the static heater alone.
    double target_equiv = static_heater;
    const double absorbed = mean_absorbed(target_equiv);
    double heater = target_equiv - absorbed;
    while (heater < 0.0) {
      target_equiv += fsr_heater;
      heater += fsr_heater;
    }
    if (p_in == 0.0) return {static_heater, 0.0};

    auto check_equilibria = [&](double h) {
      const auto eq = thermal_equilibria(m, optical_power_dbm, h, states, base.laser_wavelength_nm);
      if (eq.size() != 1 || !eq.front().stable) {
        std::ostringstream os;
        os << name << " ring: at " << optical_power_dbm << " dBm the bias needs heater " << h
           << " mW where the dithered steady state has " << eq.size()
           << " equilibria (bistable region); thermal sweep diagnosis reports this range unstable";
        throw InstabilityError(os.str());
      }
    };
    check_equilibria(heater);

    const double tau = m.thermal_time_constant_s;
    const double dt = std::min(tau / 100.0, 1.0 / (10.0 * opt.drive_rate_hz));
    const std::size_t steps = static_cast<std::size_t>(std::ceil(opt.settle_tau * tau / dt));
    const double k_pm = m.thermal_shift_pm_per_mw / r_th;
    auto resonance_error_pm = [&](double h) {
      std::vector<double> heat(steps, h), volts(steps);
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        volts[k] = static_cast<long long>(std::floor(2.0 * opt.drive_rate_hz * t + 1e-9)) % 2 == 0
                       ? states[0]
                       : states[1];
      }
      const auto s = integrate_thermal(m, optical_power_dbm, heat, volts, dt,
                                       base.laser_wavelength_nm, r_th * target_equiv);
      double mean = 0.0;
      const std::size_t from = steps / 2;
      for (std::size_t k = from; k < steps; ++k) mean += s.delta_t_k[k];
      mean /= static_cast<double>(steps - from);
      return k_pm * (mean - r_th * target_equiv);
    };

    double h0 = heater, e0 = resonance_error_pm(h0);
    if (std::abs(e0) <= opt.resonance_tolerance_pm) return {h0, target_equiv - h0};
    double h1 = h0 - e0 / m.thermal_shift_pm_per_mw;
    for (int it = 0; it < opt.max_iterations; ++it) {
      check_equilibria(h1);
      const double e1 = resonance_error_pm(h1);
      if (std::abs(e1) <= opt.resonance_tolerance_pm) return {h1, target_equiv - h1};
      const double slope = (e1 - e0) / (h1 - h0);
      h0 = h1;
      e0 = e1;
      h1 = h1 - e1 / (slope != 0.0 ? slope : m.thermal_shift_pm_per_mw);
    }
    throw NumericalError(std::string(name) + " ring: heater re-tune did not converge within " +
                         std::to_string(opt.max_iterations) + " iterations");
  };

  const RingResult top = solve_ring(base.mrm_top, solution.heater_top_mw, "top");
  const RingResult bottom = solve_ring(base.mrm_bottom, solution.heater_bottom_mw, "bottom");

  BiasSolution out = solution;
  out.optical_power_dbm = optical_power_dbm;
  out.heater_top_mw = top.heater;
  out.heater_bottom_mw = bottom.heater;
  out.self_heating_top_mw = top.self_heating;
  out.self_heating_bottom_mw = bottom.self_heating;
  out.config.heater_top_mw = top.heater;
  out.config.heater_bottom_mw = bottom.heater;
  const RamziConfig op = operating_config(out);
  const auto& tab = out.drive_table.entries;
  out.achieved_oma_e = std::abs(ramzi_output(op, tab.back().v_top, tab.back().v_bottom)) -
                       std::abs(ramzi_output(op, tab.front().v_top, tab.front().v_bottom));
  out.achieved_phase_error_deg = phase_spread(op, out.drive_table) / kDeg;
  return out;
}

}  // namespace ramzi
