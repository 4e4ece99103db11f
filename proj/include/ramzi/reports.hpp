#pragma once

// Plot-ready artifacts. Every CSV starts with a header row whose column
// names carry their units; numbers use a fixed %.12g format so identical
// inputs give byte-identical files. Schemas are listed in docs/artifacts.md.

#include <filesystem>
#include <string>
#include <vector>

#include "ramzi/circuit.hpp"
#include "ramzi/link.hpp"
#include "ramzi/thermal.hpp"
#include "ramzi/transient.hpp"
#include "ramzi/tuner.hpp"

namespace ramzi {

/// Writes `text` to `path`, creating parent directories. Throws Error on
/// I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Fixed-format number used by every emitter.
std::string format_number(double x);

std::string sweep_surface_csv(const std::vector<SweepSurfacePoint>& surface);
std::string drive_table_csv(const DriveLevelTable& table);
std::string drive_table_json(const DriveLevelTable& table);
std::string constellation_csv(const Constellation& c, int bits_per_dimension);
std::string eye_trace_csv(const EyeTrace& trace, const std::string& value_column);
std::string eye_metrics_json(const EyeMetrics& m, double baud_gbd, double eo_bandwidth_ghz);
std::string thermal_traces_csv(const SweepResult& r);
std::string stability_json(const StabilityReport& r, double input_power_dbm);
std::string ber_curves_csv(const std::vector<BerCurve>& curves);
std::string comparison_json(const std::vector<Comparison>& runs, double target_ber);
std::string audit_csv(const ChainResult& chain);
std::string retune_json(const BiasSolution& static_bias, const BiasSolution& retuned);

}  // namespace ramzi
