#include "ramzi/prbs.hpp"

#include <cmath>

#include "ramzi/errors.hpp"

namespace ramzi {

Prbs::Prbs(int order) : order_(order), state_(0) {
  switch (order) {
    case 7:
      tap_ = 6;
      break;
    case 15:
      tap_ = 14;
      break;
    case 31:
      tap_ = 28;
      break;
    default:
      throw ValidationError("prbs_order", "expected 7, 15 or 31, got " + std::to_string(order));
  }
  state_ = static_cast<std::uint32_t>((std::uint64_t{1} << order) - 1);
}

int Prbs::next_bit() {
  const std::uint32_t bit = ((state_ >> (order_ - 1)) ^ (state_ >> (tap_ - 1))) & 1u;
  const std::uint32_t mask = static_cast<std::uint32_t>((std::uint64_t{1} << order_) - 1);
  state_ = ((state_ << 1) | bit) & mask;
  return static_cast<int>(bit);
}

std::uint8_t gray_decode2(unsigned bits) {
  static constexpr std::uint8_t table[4] = {0, 1, 3, 2};
  return table[bits & 3u];
}

DriveWaveform generate_prbs_drive(int order, double baud_gbd, const DriveLevelTable& levels,
                                  double rise_fall_fraction, double eo_bandwidth_ghz,
                                  std::size_t max_symbols) {
  if (!(baud_gbd > 0.0) || !std::isfinite(baud_gbd))
    throw ValidationError("baud_gbd", "must be positive");
  if (!(rise_fall_fraction >= 0.0 && rise_fall_fraction < 0.5))
    throw ValidationError("rise_fall_fraction", "must lie in [0, 0.5)");
  if (!(eo_bandwidth_ghz > 0.0)) throw ValidationError("eo_bandwidth_ghz", "must be positive");
  if (levels.entries.size() != 4)
    throw ValidationError("level_table", "PRBS drive needs a 4-level table");

  Prbs gen(order);
  const std::size_t n = static_cast<std::size_t>(
      std::min<std::uint64_t>(gen.period(), std::max<std::size_t>(max_symbols, 127)));
  DriveWaveform w;
  w.baud_gbd = baud_gbd;
  w.rise_fall_fraction = rise_fall_fraction;
  w.level_table = levels;
  w.eo_bandwidth_ghz = eo_bandwidth_ghz;
  w.symbols.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned hi = static_cast<unsigned>(gen.next_bit());
    const unsigned lo = static_cast<unsigned>(gen.next_bit());
    w.symbols[k] = gray_decode2((hi << 1) | lo);
  }
  return w;
}

}  // namespace ramzi
