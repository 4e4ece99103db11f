#pragma once

#include <cstdint>
#include <vector>

#include "ramzi/circuit.hpp"

namespace ramzi {

/// Fibonacci LFSR for the ITU-T polynomials x^7+x^6+1, x^15+x^14+1 and
/// x^31+x^28+1, all-ones seed.
class Prbs {
 public:
  explicit Prbs(int order);
  int order() const { return order_; }
  std::uint64_t period() const { return (std::uint64_t{1} << order_) - 1; }
  int next_bit();

 private:
  int order_;
  int tap_;
  std::uint32_t state_;
};

struct DriveWaveform {
  double baud_gbd = 50.0;
  /// Level indices 0..3 (Gray-decoded two-bit symbols).
  std::vector<std::uint8_t> symbols;
  double rise_fall_fraction = 0.2;
  DriveLevelTable level_table;
  /// Single-pole EO bandwidth; infinity bypasses the filter.
  double eo_bandwidth_ghz = 35.0;
};

/// Two PRBS bits per symbol, first bit MSB, Gray-mapped to a level index.
/// Sequence length: one full PRBS period for orders 7 and 15, capped at
/// `max_symbols` for order 31.
DriveWaveform generate_prbs_drive(int order, double baud_gbd, const DriveLevelTable& levels,
                                  double rise_fall_fraction, double eo_bandwidth_ghz = 35.0,
                                  std::size_t max_symbols = 32767);

/// Level index of a two-bit Gray symbol (00, 01, 11, 10 -> 0, 1, 2, 3).
std::uint8_t gray_decode2(unsigned bits);

}  // namespace ramzi
