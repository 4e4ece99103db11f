#pragma once

// Link budget and analytic BER for a laser-forwarded coherent link and an
// IM-DD link.
//
// Optical path (element counts are declared here and echoed in the audit):
//   coherent  laser -> split rho to LO / (1 - rho) to signal
//             LO:     2 grating couplers (laser -> fibre -> receiver)
//             signal: 1 GC into the transmitter, I/Q split 3 dB, modulator,
//                     I/Q combine 3 dB, 2 GC across the TX -> RX fibre
//             MZI formats add two mux/demux passes on the signal path
//             receiver: 90° hybrid 3 dB per quadrature, balanced coupler 3 dB
//   IM-DD     laser -> 1 GC -> modulator -> 2 GC -> photodiode, MZI formats
//             again with two mux/demux passes
// Coherent current spacing i = 2 R sqrt(P_LO,pd P_unit,pd) Δe with both
// powers taken per photodiode. IM-DD spacing i = R ΔP. The margin is
// applied as a power-ratio loss on the spacing, then the single-pole ISI
// factor 1 - 2 exp(-2 pi f3dB / baud).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ramzi/devices.hpp"

namespace ramzi {

enum class Architecture { Coherent, Imdd };
enum class Format { MziPam4, MziPam8, MziQam4, MziQam16, MrmPam4, Roq16 };

inline constexpr Format kAllFormats[] = {Format::MziPam4, Format::MziPam8, Format::MziQam4,
                                         Format::MziQam16, Format::MrmPam4, Format::Roq16};

std::string_view to_string(Format f);
Format format_from_string(std::string_view s);
std::string_view to_string(Architecture a);

struct FormatInfo {
  Architecture architecture;
  /// Levels per dimension.
  int levels;
  /// 1 (PAM) or 2 (QAM).
  int dimensions;
  int bits_per_symbol;
  bool mzi;
};

FormatInfo format_info(Format f);

struct LinkConfig {
  Format format = Format::Roq16;
  double datarate_gbps = 200.0;
  double gc_loss_db = 1.8;
  double muxdemux_loss_db = 2.8;
  double margin_db = 5.0;
  double responsivity_a_per_w = 1.0;
  MzmModel mzm;
  double ramzi_offset = 0.42;
  double ramzi_oma_e = 0.64;
  double mrm_oma = 0.4;
  double afe_noise_a_per_rthz = 15e-12;
  /// Comparator threshold at 50 GBd; scales linearly with baud.
  double comparator_threshold_a_at_50gbd = 5e-6;
  double mrm_bw_ghz = 67.0;
  double lo_split_fraction = 0.5;
  /// Noise bandwidth as a fraction of the baud rate.
  double noise_bandwidth_factor = 0.75;
  /// Phase-noise quadrature nodes.
  int quadrature_nodes = 64;
};

void validate(const LinkConfig& c);

Architecture architecture_of(Format f);

/// Symbol rate in GBd.
double baud_for(Format f, double datarate_gbps);

struct AuditRow {
  std::string path;
  std::string stage;
  double loss_db = 0.0;
  /// Optical power after the stage (mW).
  double power_mw = 0.0;
};

struct ChainResult {
  /// Current spacing between adjacent levels per dimension after margin
  /// and ISI (A).
  double d = 0.0;
  double sigma = 0.0;
  double comparator_threshold = 0.0;
  double baud_gbd = 0.0;
  /// Field (coherent) or power (IM-DD) spacing of the alphabet that d maps.
  double alphabet_spacing = 0.0;
  /// d / alphabet_spacing: current per unit alphabet step (A).
  double current_per_unit = 0.0;
  double isi_factor = 1.0;
  std::vector<AuditRow> audit;
};

ChainResult signal_chain(const LinkConfig& c, double laser_power_dbm);

double q_function(double x);

/// Per-dimension L-level Gray error rate aggregated over all bits.
double ber(const LinkConfig& c, double laser_power_dbm);

/// Phase-noise std for linewidth (MHz) and path mismatch (cm): sqrt(2 pi Δν ΔL n_g / c).
double phase_noise_sigma(double linewidth_mhz, double path_mismatch_cm, double group_index);

/// BER of the constellation rotated about the I-Q origin by `phi`.
double ber_rotated(const LinkConfig& c, double laser_power_dbm, double phi);

/// Gaussian-averaged rotated BER. Linewidth 0 returns ber() exactly.
/// Throws ValidationError for IM-DD formats.
double ber_with_phase_noise(const LinkConfig& c, double laser_power_dbm, double linewidth_mhz,
                            double path_mismatch_cm, double group_index = 1.468);

struct PhaseNoiseSpec {
  double linewidth_mhz = 1.0;
  double path_mismatch_cm = 1.0;
  double group_index = 1.468;
};

/// Laser power reaching `target_ber`: bisection over [-30, +20] dBm to
/// 0.01 dB. Throws InfeasibleError when +20 dBm does not suffice.
double required_power(const LinkConfig& c, double target_ber = 1e-6,
                      const std::optional<PhaseNoiseSpec>& phase_noise = std::nullopt);

struct BerCurve {
  Format format = Format::Roq16;
  double datarate_gbps = 0.0;
  bool phase_noise_enabled = false;
  std::vector<double> laser_powers_dbm;
  std::vector<double> ber;
};

BerCurve ber_curve(const LinkConfig& c, const std::vector<double>& powers_dbm,
                   const std::optional<PhaseNoiseSpec>& phase_noise = std::nullopt);

struct FormatSummary {
  Format format = Format::Roq16;
  std::optional<double> required_power_dbm;
  std::optional<double> energy_fj_per_bit;
};

struct Comparison {
  double datarate_gbps = 0.0;
  bool phase_noise_enabled = false;
  std::vector<BerCurve> curves;
  std::vector<FormatSummary> summary;
  /// Required power of `f` (empty when unreachable).
  std::optional<double> required(Format f) const;
};

Comparison compare_formats(const LinkConfig& base, double datarate_gbps,
                           const std::vector<double>& powers_dbm,
                           const std::optional<PhaseNoiseSpec>& phase_noise = std::nullopt,
                           double target_ber = 1e-6);

/// Laser wall-plug energy per bit (fJ/b).
double laser_energy_fj_per_bit(double laser_power_dbm, double datarate_gbps,
                               double wall_plug_efficiency = 0.1);

/// Noise-bandwidth factor for which `anchor_format` at `datarate` needs
/// exactly `anchor_power_dbm`.
double calibrate_noise_bandwidth(const LinkConfig& base, double anchor_power_dbm = 6.71,
                                 Format anchor_format = Format::Roq16,
                                 double datarate_gbps = 200.0, double target_ber = 1e-6);

/// Alphabet (field or power units) of one dimension.
std::vector<double> dimension_levels(const LinkConfig& c);

}  // namespace ramzi
