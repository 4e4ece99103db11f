#include "ramzi/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ramzi/errors.hpp"

namespace ramzi {

namespace {

using json = nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string sweep_surface_csv(const std::vector<SweepSurfacePoint>& surface) {
  std::ostringstream s;
  s << "delta_pm,phi_ps_rad,oma_e_field,offset_field,objective,feasible\n";
  for (const auto& p : surface)
    s << format_number(p.delta_pm) << ',' << format_number(p.phi_ps) << ',' << format_number(p.oma_e)
      << ',' << format_number(p.offset) << ',' << format_number(p.objective) << ','
      << (p.feasible ? 1 : 0) << '\n';
  return s.str();
}

std::string drive_table_csv(const DriveLevelTable& table) {
  std::ostringstream s;
  s << "level,v_top_V,v_bottom_V,field_level\n";
  for (std::size_t k = 0; k < table.entries.size(); ++k) {
    const auto& e = table.entries[k];
    s << k << ',' << format_number(e.v_top) << ',' << format_number(e.v_bottom) << ','
      << format_number(e.field_level) << '\n';
  }
  return s.str();
}

std::string drive_table_json(const DriveLevelTable& table) {
  json entries = json::array();
  for (const auto& e : table.entries)
    entries.push_back({{"v_top_V", e.v_top}, {"v_bottom_V", e.v_bottom}, {"field_level", e.field_level}});
  json j = {{"entries", entries},
            {"spacing_residual_fraction", table.spacing_residual},
            {"spacing_ok", table.spacing_ok},
            {"max_amplitude_mismatch", table.max_amplitude_mismatch},
            {"max_phase_mismatch_rad", table.max_phase_mismatch}};
  return j.dump(2) + "\n";
}

std::string constellation_csv(const Constellation& c, int bits_per_dimension) {
  std::ostringstream s;
  s << "index,re_field,im_field,gray_bits\n";
  const int bits = 2 * bits_per_dimension;
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    std::string label;
    for (int b = bits - 1; b >= 0; --b) label += ((c.symbols[k] >> b) & 1u) ? '1' : '0';
    s << k << ',' << format_number(c.points[k].real()) << ',' << format_number(c.points[k].imag()) << ','
      << label << '\n';
  }
  return s.str();
}

std::string eye_trace_csv(const EyeTrace& trace, const std::string& value_column) {
  std::ostringstream s;
  s << "time_ui," << value_column << ",trace_id\n";
  for (std::size_t k = 0; k < trace.value.size(); ++k)
    s << format_number(trace.time_ui[k]) << ',' << format_number(trace.value[k]) << ','
      << trace.trace_id[k] << '\n';
  return s.str();
}

std::string eye_metrics_json(const EyeMetrics& m, double baud_gbd, double eo_bandwidth_ghz) {
  json j = {{"baud_gbd", baud_gbd},
            {"eo_bandwidth_ghz", number_or_null(eo_bandwidth_ghz)},
            {"sampled_levels_field", m.sampled_levels},
            {"oma_e_field", m.oma_e},
            {"phase_error_deg", m.phase_error_deg},
            {"inner_eye_openings_field", m.inner_eye_openings},
            {"levels_resolvable", m.levels_resolvable}};
  return j.dump(2) + "\n";
}

std::string thermal_traces_csv(const SweepResult& r) {
  std::ostringstream s;
  s << "heater_mw,transmission_0V_field,transmission_m4V_field,direction\n";
  for (const auto* tr : {&r.up, &r.down}) {
    const std::string dir(to_string(tr->direction));
    for (std::size_t k = 0; k < tr->heater_powers.size(); ++k)
      s << format_number(tr->heater_powers[k]) << ',' << format_number(tr->transmission_v0[k]) << ','
        << format_number(tr->transmission_v4[k]) << ',' << dir << '\n';
  }
  return s.str();
}

std::string stability_json(const StabilityReport& r, double input_power_dbm) {
  json j = {{"input_power_dbm", input_power_dbm},
            {"bistable", r.bistable},
            {"max_hysteresis_gap_field", r.max_hysteresis_gap},
            {"gap_threshold_field", r.gap_threshold},
            {"metastable", r.metastable},
            {"max_jump_field", r.max_jump},
            {"jump_threshold_field", r.jump_threshold},
            {"onset_power_dbm", r.onset_power_dbm ? json(*r.onset_power_dbm) : json(nullptr)}};
  return j.dump(2) + "\n";
}

std::string ber_curves_csv(const std::vector<BerCurve>& curves) {
  std::ostringstream s;
  s << "format,datarate_gbps,phase_noise,laser_power_dbm,ber\n";
  for (const auto& c : curves) {
    const std::string f(to_string(c.format));
    for (std::size_t k = 0; k < c.ber.size(); ++k)
      s << f << ',' << format_number(c.datarate_gbps) << ',' << (c.phase_noise_enabled ? 1 : 0) << ','
        << format_number(c.laser_powers_dbm[k]) << ',' << format_number(c.ber[k]) << '\n';
  }
  return s.str();
}

std::string comparison_json(const std::vector<Comparison>& runs, double target_ber) {
  json out = json::array();
  for (const auto& r : runs) {
    json rows = json::array();
    for (const auto& s : r.summary)
      rows.push_back({{"format", std::string(to_string(s.format))},
                      {"required_power_dbm", s.required_power_dbm ? json(*s.required_power_dbm) : json(nullptr)},
                      {"energy_fj_per_bit", s.energy_fj_per_bit ? json(*s.energy_fj_per_bit) : json(nullptr)}});
    out.push_back({{"datarate_gbps", r.datarate_gbps},
                   {"phase_noise", r.phase_noise_enabled},
                   {"target_ber", target_ber},
                   {"formats", rows}});
  }
  return out.dump(2) + "\n";
}

std::string audit_csv(const ChainResult& chain) {
  std::ostringstream s;
  s << "path,stage,loss_db,power_mw\n";
  for (const auto& a : chain.audit)
    s << a.path << ',' << a.stage << ',' << format_number(a.loss_db) << ',' << format_number(a.power_mw)
      << '\n';
  return s.str();
}

std::string retune_json(const BiasSolution& static_bias, const BiasSolution& retuned) {
  json j = {{"optical_power_dbm", retuned.optical_power_dbm},
            {"static_heater_top_mw", static_bias.heater_top_mw},
            {"static_heater_bottom_mw", static_bias.heater_bottom_mw},
            {"heater_top_mw", retuned.heater_top_mw},
            {"heater_bottom_mw", retuned.heater_bottom_mw},
            {"self_heating_top_mw", retuned.self_heating_top_mw},
            {"self_heating_bottom_mw", retuned.self_heating_bottom_mw},
            {"achieved_oma_e", retuned.achieved_oma_e}};
  return j.dump(2) + "\n";
}

}  // namespace ramzi
