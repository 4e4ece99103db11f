#include "ramzi/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ramzi/errors.hpp"

namespace ramzi {

namespace {

using json = nlohmann::json;

using Check = std::function<void(double, const std::string&)>;

void positive(double v, const std::string& key) {
  if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(key, "must be positive");
}
void nonneg(double v, const std::string& key) {
  if (!std::isfinite(v) || v < 0.0) throw ValidationError(key, "must be non-negative");
}
void finite(double v, const std::string& key) {
  if (!std::isfinite(v)) throw ValidationError(key, "must be finite");
}
Check within(double lo, double hi) {
  return [lo, hi](double v, const std::string& key) {
    if (!std::isfinite(v) || v < lo || v > hi)
      throw ValidationError(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  };
}
Check open_unit() {
  return [](double v, const std::string& key) {
    if (!std::isfinite(v) || !(v > 0.0 && v < 1.0)) throw ValidationError(key, "must lie in (0, 1)");
  };
}

// Reads keys of one JSON object and rejects whatever is left over.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const char* k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const char* k) const { return j_.contains(k); }

  void number(const char* k, double& out, const Check& check = finite) {
    if (!take(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number()) throw ValidationError(key(k), "expected a number");
    const double x = v.get<double>();
    check(x, key(k));
    out = x;
  }

  template <class Int>
  void integer(const char* k, Int& out, long long lo, long long hi) {
    if (!take(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number_integer()) throw ValidationError(key(k), "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi)
      throw ValidationError(key(k), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = static_cast<Int>(x);
  }

  void boolean(const char* k, bool& out) {
    if (!take(k)) return;
    const json& v = j_.at(k);
    if (!v.is_boolean()) throw ValidationError(key(k), "expected true or false");
    out = v.get<bool>();
  }

  void string(const char* k, std::string& out) {
    if (!take(k)) return;
    const json& v = j_.at(k);
    if (!v.is_string()) throw ValidationError(key(k), "expected a string");
    out = v.get<std::string>();
  }

  template <class F>
  void object(const char* k, F&& f) {
    if (!take(k)) return;
    Section sub(j_.at(k), key(k));
    f(sub);
    sub.finish();
  }

  const json* raw(const char* k) {
    if (!take(k)) return nullptr;
    return &j_.at(k);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ValidationError(key(it.key().c_str()), "unknown key");
  }

 private:
  bool take(const char* k) {
    seen_.insert(k);
    return j_.contains(k);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void rekey(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    const std::string body = e.key().empty() ? what : what.substr(std::min(what.size(), e.key().size() + 2));
    throw ValidationError(prefix + "." + e.key(), body);
  }
}

void read_device(Section& s, DeviceSection& d) {
  MrmModel& m = d.mrm;
  s.number("radius_um", m.radius_um, positive);
  s.number("group_index", m.group_index, positive);
  s.number("q_factor", m.q_factor, [](double v, const std::string& k) {
    if (!std::isfinite(v) || !(v > 100.0)) throw ValidationError(k, "must exceed 100");
  });
  std::string regime(to_string(d.coupling_regime));
  s.string("coupling_regime", regime);
  rekey("device", [&] { d.coupling_regime = coupling_regime_from_string(regime); });
  s.number("extinction", d.extinction, open_unit());
  const bool has_t = s.has("self_coupling"), has_a = s.has("round_trip_amplitude");
  if (has_t != has_a)
    throw ValidationError(s.key(has_t ? "round_trip_amplitude" : "self_coupling"),
                          "self_coupling and round_trip_amplitude must be given together");
  s.number("self_coupling", m.self_coupling, open_unit());
  s.number("round_trip_amplitude", m.round_trip_amplitude, open_unit());
  d.explicit_coupling = has_t;
  s.number("resonance_wavelength_at_rest_nm", m.resonance_wavelength_at_rest_nm, positive);
  s.number("modulation_efficiency_pm_per_v", m.modulation_efficiency_pm_per_v);
  s.number("modulation_quadratic_pm_per_v2", m.modulation_quadratic_pm_per_v2);
  s.number("thermal_shift_pm_per_mw", m.thermal_shift_pm_per_mw, nonneg);
  s.number("thermal_resistance_k_per_mw", m.thermal_resistance_k_per_mw, positive);
  s.number("thermal_time_constant_s", m.thermal_time_constant_s, positive);
  s.number("absorbed_fraction", m.absorbed_fraction, within(0.0, 1.0));
  if (d.explicit_coupling) {
    const double q = loaded_q(m);
    if (std::abs(q / m.q_factor - 1.0) > 0.02)
      throw ValidationError(s.key("q_factor"), "pinned (t, a) give loaded Q " + std::to_string(q) +
                                                   ", more than 2% from q_factor");
  }
}

void read_ramzi(Section& s, RamziSection& r) {
  s.number("phi_ps", r.phi_ps);
  s.number("detuning_offset_pm", r.detuning_offset_pm);
  s.number("laser_wavelength_nm", r.laser_wavelength_nm, positive);
  s.boolean("top_below_laser", r.top_below_laser);
  s.number("v_high", r.v_high);
  s.number("v_low", r.v_low);
  if (r.v_low > r.v_high) throw ValidationError(s.key("v_low"), "must not exceed v_high");
}

void read_levels(Section& s, LevelSearchSpec& l) {
  s.integer("levels", l.levels, 2, 64);
  s.integer("grid_points", l.grid_points, 3, 100001);
  s.number("amplitude_tolerance", l.amplitude_tolerance, positive);
  s.number("phase_tolerance_deg", l.phase_tolerance_deg, positive);
  s.number("spacing_tolerance", l.spacing_tolerance, positive);
}

void read_tuner(Section& s, TuneSpec& t) {
  s.number("delta_min_pm", t.delta_min_pm, nonneg);
  s.number("delta_max_pm", t.delta_max_pm, nonneg);
  s.number("delta_step_pm", t.delta_step_pm, positive);
  if (t.delta_max_pm < t.delta_min_pm)
    throw ValidationError(s.key("delta_max_pm"), "must not be below delta_min_pm");
  s.integer("phi_steps", t.phi_steps, 1, 1000000);
  std::string obj(to_string(t.objective));
  s.string("objective", obj);
  rekey("tuner", [&] { t.objective = tune_objective_from_string(obj); });
  s.number("target_offset", t.target_offset, nonneg);
  s.number("blend_weight", t.blend_weight, nonneg);
  s.number("phase_budget_deg", t.phase_budget_deg, positive);
  s.number("tuning_power_dbm", t.tuning_power_dbm);
  s.object("levels", [&](Section& sub) { read_levels(sub, t.levels); });
}

void read_retune(Section& s, RetuneOptions& r) {
  s.number("drive_rate_hz", r.drive_rate_hz, positive);
  s.number("settle_tau", r.settle_tau, positive);
  s.number("resonance_tolerance_pm", r.resonance_tolerance_pm, positive);
  s.integer("max_iterations", r.max_iterations, 1, 1000);
}

void read_transient(Section& s, TransientSection& t) {
  s.number("baud_gbd", t.baud_gbd, positive);
  s.integer("prbs_order", t.prbs_order, 7, 31);
  if (t.prbs_order != 7 && t.prbs_order != 15 && t.prbs_order != 31)
    throw ValidationError(s.key("prbs_order"), "must be 7, 15 or 31");
  s.number("rise_fall_fraction", t.rise_fall_fraction, [](double v, const std::string& k) {
    if (!std::isfinite(v) || v < 0.0 || v >= 0.5) throw ValidationError(k, "must lie in [0, 0.5)");
  });
  s.number("eo_bandwidth_ghz", t.eo_bandwidth_ghz, positive);
  s.integer("samples_per_ui", t.samples_per_ui, 2, 4096);
  if (t.samples_per_ui % 2 != 0) throw ValidationError(s.key("samples_per_ui"), "must be even");
}

void read_thermal(Section& s, ThermalSection& t) {
  s.number("input_power_dbm", t.input_power_dbm);
  s.number("p_min_mw", t.p_min_mw, nonneg);
  s.number("p_max_mw", t.p_max_mw, positive);
  if (!(t.p_max_mw > t.p_min_mw)) throw ValidationError(s.key("p_max_mw"), "must exceed p_min_mw");
  s.number("duration_s", t.duration_s, positive);
  s.number("drive_rate_hz", t.drive_rate_hz, positive);
  s.integer("records", t.records, 2, 1000001);
  s.number("gap_fraction", t.gap_fraction, positive);
  s.number("jump_fraction", t.jump_fraction, positive);
  s.number("onset_search_lo_dbm", t.onset_search_lo_dbm);
  s.number("onset_search_hi_dbm", t.onset_search_hi_dbm);
  if (!(t.onset_search_hi_dbm > t.onset_search_lo_dbm))
    throw ValidationError(s.key("onset_search_hi_dbm"), "must exceed onset_search_lo_dbm");
}

void read_link(Section& s, LinkSection& l) {
  LinkConfig& c = l.link;
  std::string fmt(to_string(c.format));
  s.string("format", fmt);
  rekey("link", [&] { c.format = format_from_string(fmt); });
  s.number("datarate_gbps", c.datarate_gbps, positive);
  s.number("gc_loss_db", c.gc_loss_db, nonneg);
  s.number("muxdemux_loss_db", c.muxdemux_loss_db, nonneg);
  s.number("margin_db", c.margin_db, nonneg);
  s.number("responsivity_a_per_w", c.responsivity_a_per_w, positive);
  s.object("mzm", [&](Section& m) {
    m.number("effective_oma_e", c.mzm.effective_oma_e, positive);
    m.number("effective_oma", c.mzm.effective_oma, positive);
    m.number("insertion_loss_db", c.mzm.insertion_loss_db, nonneg);
    m.number("bandwidth_ghz", c.mzm.bandwidth_ghz, positive);
  });
  s.number("ramzi_offset", c.ramzi_offset, nonneg);
  s.number("ramzi_oma_e", c.ramzi_oma_e, positive);
  s.number("mrm_oma", c.mrm_oma, positive);
  s.number("afe_noise_a_per_rthz", c.afe_noise_a_per_rthz, positive);
  s.number("comparator_threshold_a_at_50gbd", c.comparator_threshold_a_at_50gbd, nonneg);
  s.number("mrm_bw_ghz", c.mrm_bw_ghz, positive);
  s.number("lo_split_fraction", c.lo_split_fraction, open_unit());
  s.number("noise_bandwidth_factor", c.noise_bandwidth_factor, positive);
  s.integer("quadrature_nodes", c.quadrature_nodes, 21, 200);
  s.object("phase_noise", [&](Section& p) {
    p.number("linewidth_mhz", l.phase_noise.linewidth_mhz, nonneg);
    p.number("path_mismatch_cm", l.phase_noise.path_mismatch_cm, nonneg);
    p.number("group_index", l.phase_noise.group_index, positive);
  });
  s.number("target_ber", l.target_ber, [](double v, const std::string& k) {
    if (!std::isfinite(v) || !(v > 0.0 && v < 0.5)) throw ValidationError(k, "must lie in (0, 0.5)");
  });
  s.number("power_min_dbm", l.power_min_dbm);
  s.number("power_max_dbm", l.power_max_dbm);
  s.number("power_step_dbm", l.power_step_dbm, positive);
  if (!(l.power_max_dbm > l.power_min_dbm))
    throw ValidationError(s.key("power_max_dbm"), "must exceed power_min_dbm");
  s.number("anchor_power_dbm", l.anchor_power_dbm);
  s.boolean("calibrate_noise_bandwidth", l.calibrate_noise_bandwidth);
}

void read_bias(Section& s, BiasSection& b) {
  s.number("heater_top_mw", b.heater_top_mw, nonneg);
  s.number("heater_bottom_mw", b.heater_bottom_mw, nonneg);
  s.number("achieved_oma_e", b.achieved_oma_e);
  s.number("achieved_offset", b.achieved_offset);
  s.number("achieved_phase_error_deg", b.achieved_phase_error_deg, nonneg);
  if (const json* t = s.raw("drive_table")) {
    if (!t->is_array()) throw ValidationError(s.key("drive_table"), "expected an array");
    for (std::size_t k = 0; k < t->size(); ++k) {
      Section e((*t)[k], s.key("drive_table") + "[" + std::to_string(k) + "]");
      DriveLevel lv;
      e.number("v_top", lv.v_top);
      e.number("v_bottom", lv.v_bottom);
      e.number("field_level", lv.field_level);
      e.finish();
      b.drive_table.push_back(lv);
    }
  }
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.link.link.noise_bandwidth_factor = kCalibratedNoiseBandwidth;
  return c;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("<root>", std::string("malformed JSON: ") + e.what());
  }
  ExperimentConfig c = default_config();
  Section root(j, "");
  root.object("device", [&](Section& s) { read_device(s, c.device); });
  root.object("ramzi", [&](Section& s) { read_ramzi(s, c.ramzi); });
  root.object("tuner", [&](Section& s) { read_tuner(s, c.tuner); });
  root.object("retune", [&](Section& s) { read_retune(s, c.retune); });
  root.object("transient", [&](Section& s) { read_transient(s, c.transient); });
  root.object("thermal", [&](Section& s) { read_thermal(s, c.thermal); });
  root.object("link", [&](Section& s) { read_link(s, c.link); });
  root.object("bias", [&](Section& s) {
    BiasSection b;
    read_bias(s, b);
    c.bias = b;
  });
  root.string("output_dir", c.output_dir);
  if (const json* seed = root.raw("seed")) {
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0))
      throw ValidationError("seed", "expected a non-negative integer");
    c.seed = seed->get<std::uint64_t>();
  }
  root.finish();
  rekey("device", [&] { validate(device_model(c)); });
  rekey("link", [&] { validate(c.link.link); });
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  const MrmModel& m = c.device.mrm;
  json dev = {
      {"radius_um", m.radius_um},
      {"group_index", m.group_index},
      {"q_factor", m.q_factor},
      {"coupling_regime", std::string(to_string(c.device.coupling_regime))},
      {"extinction", c.device.extinction},
      {"resonance_wavelength_at_rest_nm", m.resonance_wavelength_at_rest_nm},
      {"modulation_efficiency_pm_per_v", m.modulation_efficiency_pm_per_v},
      {"modulation_quadratic_pm_per_v2", m.modulation_quadratic_pm_per_v2},
      {"thermal_shift_pm_per_mw", m.thermal_shift_pm_per_mw},
      {"thermal_resistance_k_per_mw", m.thermal_resistance_k_per_mw},
      {"thermal_time_constant_s", m.thermal_time_constant_s},
      {"absorbed_fraction", m.absorbed_fraction},
  };
  if (c.device.explicit_coupling) {
    dev["self_coupling"] = m.self_coupling;
    dev["round_trip_amplitude"] = m.round_trip_amplitude;
  }
  const TuneSpec& t = c.tuner;
  const LinkConfig& l = c.link.link;
  json j = {
      {"device", dev},
      {"ramzi",
       {{"phi_ps", c.ramzi.phi_ps},
        {"detuning_offset_pm", c.ramzi.detuning_offset_pm},
        {"laser_wavelength_nm", c.ramzi.laser_wavelength_nm},
        {"top_below_laser", c.ramzi.top_below_laser},
        {"v_high", c.ramzi.v_high},
        {"v_low", c.ramzi.v_low}}},
      {"tuner",
       {{"delta_min_pm", t.delta_min_pm},
        {"delta_max_pm", t.delta_max_pm},
        {"delta_step_pm", t.delta_step_pm},
        {"phi_steps", t.phi_steps},
        {"objective", std::string(to_string(t.objective))},
        {"target_offset", t.target_offset},
        {"blend_weight", t.blend_weight},
        {"phase_budget_deg", t.phase_budget_deg},
        {"tuning_power_dbm", t.tuning_power_dbm},
        {"levels",
         {{"levels", t.levels.levels},
          {"grid_points", t.levels.grid_points},
          {"amplitude_tolerance", t.levels.amplitude_tolerance},
          {"phase_tolerance_deg", t.levels.phase_tolerance_deg},
          {"spacing_tolerance", t.levels.spacing_tolerance}}}}},
      {"retune",
       {{"drive_rate_hz", c.retune.drive_rate_hz},
        {"settle_tau", c.retune.settle_tau},
        {"resonance_tolerance_pm", c.retune.resonance_tolerance_pm},
        {"max_iterations", c.retune.max_iterations}}},
      {"transient",
       {{"baud_gbd", c.transient.baud_gbd},
        {"prbs_order", c.transient.prbs_order},
        {"rise_fall_fraction", c.transient.rise_fall_fraction},
        {"eo_bandwidth_ghz", c.transient.eo_bandwidth_ghz},
        {"samples_per_ui", c.transient.samples_per_ui}}},
      {"thermal",
       {{"input_power_dbm", c.thermal.input_power_dbm},
        {"p_min_mw", c.thermal.p_min_mw},
        {"p_max_mw", c.thermal.p_max_mw},
        {"duration_s", c.thermal.duration_s},
        {"drive_rate_hz", c.thermal.drive_rate_hz},
        {"records", c.thermal.records},
        {"gap_fraction", c.thermal.gap_fraction},
        {"jump_fraction", c.thermal.jump_fraction},
        {"onset_search_lo_dbm", c.thermal.onset_search_lo_dbm},
        {"onset_search_hi_dbm", c.thermal.onset_search_hi_dbm}}},
      {"link",
       {{"format", std::string(to_string(l.format))},
        {"datarate_gbps", l.datarate_gbps},
        {"gc_loss_db", l.gc_loss_db},
        {"muxdemux_loss_db", l.muxdemux_loss_db},
        {"margin_db", l.margin_db},
        {"responsivity_a_per_w", l.responsivity_a_per_w},
        {"mzm",
         {{"effective_oma_e", l.mzm.effective_oma_e},
          {"effective_oma", l.mzm.effective_oma},
          {"insertion_loss_db", l.mzm.insertion_loss_db},
          {"bandwidth_ghz", l.mzm.bandwidth_ghz}}},
        {"ramzi_offset", l.ramzi_offset},
        {"ramzi_oma_e", l.ramzi_oma_e},
        {"mrm_oma", l.mrm_oma},
        {"afe_noise_a_per_rthz", l.afe_noise_a_per_rthz},
        {"comparator_threshold_a_at_50gbd", l.comparator_threshold_a_at_50gbd},
        {"mrm_bw_ghz", l.mrm_bw_ghz},
        {"lo_split_fraction", l.lo_split_fraction},
        {"noise_bandwidth_factor", l.noise_bandwidth_factor},
        {"quadrature_nodes", l.quadrature_nodes},
        {"phase_noise",
         {{"linewidth_mhz", c.link.phase_noise.linewidth_mhz},
          {"path_mismatch_cm", c.link.phase_noise.path_mismatch_cm},
          {"group_index", c.link.phase_noise.group_index}}},
        {"target_ber", c.link.target_ber},
        {"power_min_dbm", c.link.power_min_dbm},
        {"power_max_dbm", c.link.power_max_dbm},
        {"power_step_dbm", c.link.power_step_dbm},
        {"anchor_power_dbm", c.link.anchor_power_dbm},
        {"calibrate_noise_bandwidth", c.link.calibrate_noise_bandwidth}}},
      {"output_dir", c.output_dir},
      {"seed", c.seed},
  };
  if (c.bias) {
    json table = json::array();
    for (const auto& e : c.bias->drive_table)
      table.push_back({{"v_top", e.v_top}, {"v_bottom", e.v_bottom}, {"field_level", e.field_level}});
    j["bias"] = {{"heater_top_mw", c.bias->heater_top_mw},
                 {"heater_bottom_mw", c.bias->heater_bottom_mw},
                 {"drive_table", table},
                 {"achieved_oma_e", c.bias->achieved_oma_e},
                 {"achieved_offset", c.bias->achieved_offset},
                 {"achieved_phase_error_deg", c.bias->achieved_phase_error_deg}};
  }
  return j.dump(2) + "\n";
}

MrmModel device_model(const ExperimentConfig& c) {
  const DeviceSection& d = c.device;
  if (d.explicit_coupling) return d.mrm;
  CalibrationOptions opt;
  opt.radius_um = d.mrm.radius_um;
  opt.group_index = d.mrm.group_index;
  opt.wavelength_nm = d.mrm.resonance_wavelength_at_rest_nm;
  opt.extinction = d.extinction;
  const MrmModel cal =
      calibrate_mrm(d.mrm.q_factor, d.mrm.modulation_efficiency_pm_per_v, d.coupling_regime, opt);
  MrmModel m = d.mrm;
  m.self_coupling = cal.self_coupling;
  m.round_trip_amplitude = cal.round_trip_amplitude;
  return m;
}

RamziConfig ramzi_template(const ExperimentConfig& c) {
  RamziConfig r;
  r.mrm_top = r.mrm_bottom = device_model(c);
  r.phi_ps = c.ramzi.phi_ps;
  r.detuning_offset_pm = c.ramzi.detuning_offset_pm;
  r.laser_wavelength_nm = c.ramzi.laser_wavelength_nm;
  r.top_below_laser = c.ramzi.top_below_laser;
  r.v_high = c.ramzi.v_high;
  r.v_low = c.ramzi.v_low;
  return realize_detuning(r);
}

SweepOptions sweep_options(const ExperimentConfig& c) {
  SweepOptions o;
  o.laser_wavelength_nm = c.ramzi.laser_wavelength_nm;
  o.v_on = c.ramzi.v_high;
  o.v_off = c.ramzi.v_low;
  o.records = c.thermal.records;
  o.gap_fraction = c.thermal.gap_fraction;
  o.jump_fraction = c.thermal.jump_fraction;
  return o;
}

BiasSolution resolve_bias(const ExperimentConfig& c) {
  if (!c.bias || c.bias->drive_table.size() < 2) return tune_static(ramzi_template(c), c.tuner);
  BiasSolution s;
  RamziConfig r = ramzi_template(c);
  r.heater_top_mw = c.bias->heater_top_mw;
  r.heater_bottom_mw = c.bias->heater_bottom_mw;
  s.config = r;
  s.heater_top_mw = r.heater_top_mw;
  s.heater_bottom_mw = r.heater_bottom_mw;
  s.phi_ps = r.phi_ps;
  s.detuning_offset_pm = r.detuning_offset_pm;
  s.drive_table.entries = c.bias->drive_table;
  s.optical_power_dbm = c.tuner.tuning_power_dbm;
  const auto& tab = s.drive_table.entries;
  s.achieved_oma_e = std::abs(ramzi_output(r, tab.back().v_top, tab.back().v_bottom)) -
                     std::abs(ramzi_output(r, tab.front().v_top, tab.front().v_bottom));
  s.achieved_offset = 0.5 * (tab.back().field_level + tab.front().field_level);
  s.achieved_phase_error_deg = phase_spread(r, s.drive_table) * 180.0 / std::numbers::pi;
  return s;
}

ExperimentConfig with_bias(ExperimentConfig c, const BiasSolution& s) {
  c.ramzi.phi_ps = s.phi_ps;
  c.ramzi.detuning_offset_pm = s.detuning_offset_pm;
  BiasSection b;
  b.heater_top_mw = s.heater_top_mw;
  b.heater_bottom_mw = s.heater_bottom_mw;
  b.drive_table = s.drive_table.entries;
  b.achieved_oma_e = s.achieved_oma_e;
  b.achieved_offset = s.achieved_offset;
  b.achieved_phase_error_deg = s.achieved_phase_error_deg;
  c.bias = b;
  return c;
}

}  // namespace ramzi
