#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ramzi/circuit.hpp"
#include "ramzi/config.hpp"
#include "ramzi/errors.hpp"
#include "ramzi/tuner.hpp"
#include "rng.hpp"

#ifdef RAMZI_HAVE_BOOST
#include <boost/multiprecision/cpp_bin_float.hpp>
#endif

using namespace ramzi;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

const BiasSolution& tuned() {
  static const BiasSolution s = tune_static(ramzi_template(default_config()), default_config().tuner);
  return s;
}

// Identical rings placed at laser -/+ delta; drives mirrored about mid-swing
// give exactly conjugate arm fields.
RamziConfig symmetric_config(double t, double a, double delta_pm, double phi_ps) {
  RamziConfig c;
  c.mrm_top.self_coupling = c.mrm_bottom.self_coupling = t;
  c.mrm_top.round_trip_amplitude = c.mrm_bottom.round_trip_amplitude = a;
  c.detuning_offset_pm = delta_pm;
  c.phi_ps = phi_ps;
  return realize_detuning(c);
}

struct Closed {
  double amplitude;  // arm amplitude after the split
  double phi_x;
};

Closed closed_of(const RamziConfig& c, double vt, double vb) {
  const ArmFields h = arm_fields(c, vt, vb);
  return {0.5 * (std::abs(h.top) + std::abs(h.bottom)) / sqrt2,
          0.5 * (std::arg(h.top) - std::arg(h.bottom))};
}

double closed_power(const Closed& k, double phi_ps) {
  return k.amplitude * k.amplitude * (1.0 + std::cos(2.0 * k.phi_x + phi_ps));
}

// Into (-pi/2, pi/2].
double fold_half(double x) {
  double d = std::remainder(x, pi);
  if (d <= -0.5 * pi) d += pi;
  return d;
}

}  // namespace

TEST_CASE("fully transmitting arms interfere constructively and destructively") {
  // Rings far off resonance with lossless coupling limit approximated by a
  // per-arm field of exactly 1 / sqrt(2) after the split.
  const auto [top, bottom] = splitter(1.0);
  CHECK(std::abs(combiner(top, phase_shifter(bottom, 0.0))) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(combiner(top, phase_shifter(bottom, -pi))) < 1e-15);
}

TEST_CASE("power vanishes when 2 phi_x + phi_ps = pi") {
  ramzi::testing::SplitMix64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const double phi_x = rng.uniform() - 0.5;
    const ComplexAmplitude ht = std::polar(0.8, phi_x), hb = std::polar(0.8, -phi_x);
    const double phi_ps = pi - 2.0 * phi_x;
    const ComplexAmplitude e = combiner(ht * (1.0 / sqrt2), phase_shifter(hb * (1.0 / sqrt2), -phi_ps));
    CHECK(std::norm(e) < 1e-30);
  }
}

TEST_CASE("closed forms match direct superposition over random symmetric configs") {
  ramzi::testing::SplitMix64 rng(42);
  double worst_power = 0.0, worst_oma = 0.0, worst_phase = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double t = 0.85 + 0.14 * rng.uniform(), a = 0.85 + 0.14 * rng.uniform();
    const double delta = 10.0 + 190.0 * rng.uniform();
    const double phi_ps = 2.0 * pi * rng.uniform();
    const RamziConfig c = symmetric_config(t, a, delta, phi_ps);
    const double u1 = 2.0 * rng.uniform(), u2 = 2.0 * rng.uniform();
    const DrivePair hi{-2.0 + u1, -2.0 - u1}, lo{-2.0 + u2, -2.0 - u2};

    const Closed ch = closed_of(c, hi.v_top, hi.v_bottom), cl = closed_of(c, lo.v_top, lo.v_bottom);
    const double scale = ch.amplitude * ch.amplitude;
    worst_power = std::max(worst_power,
                           std::abs(ramzi_power(c, hi.v_top, hi.v_bottom) - closed_power(ch, phi_ps)) / scale);
    const double oma_closed = std::sqrt(closed_power(ch, phi_ps)) - std::sqrt(closed_power(cl, phi_ps));
    worst_oma = std::max(worst_oma, std::abs(ramzi_oma_e(c, hi, lo) - oma_closed) / ch.amplitude);
    if (std::abs(ramzi_output(c, hi)) > 1e-3)
      worst_phase = std::max(worst_phase,
                             std::abs(fold_half(ramzi_output_phase(c, hi.v_top, hi.v_bottom).phase + 0.5 * phi_ps)));
  }
  CHECK(worst_power < 1e-12);
  CHECK(worst_oma < 1e-12);
  CHECK(worst_phase < 1e-9);
}

#ifdef RAMZI_HAVE_BOOST
TEST_CASE("output phase is -phi_ps / 2 at 50 digits") {
  using big = boost::multiprecision::cpp_bin_float_50;
  const RamziConfig c = symmetric_config(0.95, 0.93, 60.0, 0.8);
  const ArmFields h = arm_fields(c, -1.5, -2.5);
  // E = (H_T + H_B e^{-i phi}) / 2 evaluated in extended precision.
  const big ph(0.8);
  const big re = (big(h.top.real()) + big(h.bottom.real()) * cos(ph) + big(h.bottom.imag()) * sin(ph)) / 2;
  const big im = (big(h.top.imag()) + big(h.bottom.imag()) * cos(ph) - big(h.bottom.real()) * sin(ph)) / 2;
  const double phase = atan2(im, re).convert_to<double>();
  CHECK(std::abs(fold_half(phase + 0.4)) < 1e-9);
  CHECK(std::abs(ramzi_output_phase(c, -1.5, -2.5).phase - phase) < 1e-12);
}
#endif

TEST_CASE("output phase does not depend on the symmetric drive level") {
  const RamziConfig c = symmetric_config(0.94, 0.94, 80.0, 1.1);
  const double p1 = ramzi_output_phase(c, -2.0 + 0.2, -2.0 - 0.2).phase;
  const double p2 = ramzi_output_phase(c, -2.0 + 0.5, -2.0 - 0.5).phase;
  CHECK(std::abs(fold_half(p1 - p2)) < 1e-9);
  const RamziConfig z = symmetric_config(0.94, 0.94, 80.0, 0.0);
  CHECK(std::abs(fold_half(ramzi_output_phase(z, -1.0, -3.0).phase)) < 1e-9);
}

TEST_CASE("analytically symmetric drive table has no phase spread") {
  const RamziConfig c = symmetric_config(0.9341112429, 0.9341112429, 116.0, 4.96546);
  std::vector<ComplexAmplitude> fields;
  for (double u : {-2.0, -0.7, 0.7, 2.0}) fields.push_back(ramzi_output(c, -2.0 + u, -2.0 - u));
  CHECK(phase_spread(c, fields) < 1e-9);
}

TEST_CASE("swapping the arms and negating phi_ps conjugates the field") {
  const RamziConfig c = symmetric_config(0.95, 0.92, 70.0, 2.3);
  RamziConfig s = c;
  std::swap(s.mrm_top, s.mrm_bottom);
  std::swap(s.heater_top_mw, s.heater_bottom_mw);
  s.phi_ps = -c.phi_ps;
  for (double u : {0.1, 0.9, 2.0}) {
    const ComplexAmplitude e = ramzi_output(c, -2.0 + u, -2.0 - u);
    const ComplexAmplitude f = ramzi_output(s, -2.0 - u, -2.0 + u);
    CHECK(std::abs(f - std::conj(e)) < 1e-13);
  }
}

TEST_CASE("OMA of identical drives is zero") {
  const RamziConfig& c = tuned().config;
  CHECK(ramzi_oma_e(c, {-1.0, -3.0}, {-1.0, -3.0}) == 0.0);
}

TEST_CASE("tuned extremes reach the reported field levels and OMA") {
  const RamziConfig& c = tuned().config;
  const double lo = std::abs(ramzi_output(c, c.v_low, c.v_high));
  const double hi = std::abs(ramzi_output(c, c.v_high, c.v_low));
  CHECK(std::max(lo, hi) == doctest::Approx(0.72).epsilon(0.05 / 0.72));
  CHECK(std::min(lo, hi) == doctest::Approx(0.08).epsilon(0.05 / 0.08));
  CHECK(std::abs(hi - lo) == doctest::Approx(0.64).epsilon(0.05 / 0.64));
}

TEST_CASE("tuned drive table keeps the output phase constant") {
  const BiasSolution& s = tuned();
  CHECK(phase_spread(s.config, s.drive_table) * 180.0 / pi < 3.0);
}

TEST_CASE("gray code") {
  const unsigned want[] = {0, 1, 3, 2, 6, 7, 5, 4};
  for (unsigned k = 0; k < 8; ++k) CHECK(gray_code(k) == want[k]);
  for (unsigned k = 0; k + 1 < 64; ++k) CHECK(std::popcount(gray_code(k) ^ gray_code(k + 1)) == 1);
}

TEST_CASE("constellation from tuned configs") {
  const BiasSolution& s = tuned();
  const Constellation k = build_constellation(s.config, s.config, s.drive_table, s.drive_table);
  REQUIRE(k.points.size() == 16);
  CHECK(k.offset.real() * sqrt2 == doctest::Approx(0.42).epsilon(0.05 / 0.42));
  CHECK(k.offset.imag() * sqrt2 == doctest::Approx(0.42).epsilon(0.05 / 0.42));
  CHECK(k.oma_e_per_dimension * sqrt2 == doctest::Approx(s.achieved_oma_e).epsilon(1e-12));
  std::vector<unsigned> labels = k.symbols;
  std::sort(labels.begin(), labels.end());
  for (unsigned j = 0; j < 16; ++j) CHECK(labels[j] == j);
  // Horizontal neighbours differ in one bit.
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b + 1 < 4; ++b)
      CHECK(std::popcount(k.symbols[a * 4 + b] ^ k.symbols[a * 4 + b + 1]) == 1);
}

TEST_CASE("zero-offset bias gives a centrosymmetric constellation") {
  TuneSpec spec = default_config().tuner;
  spec.objective = TuneObjective::TargetOffset;
  spec.target_offset = 0.0;
  const BiasSolution s = tune_static(ramzi_template(default_config()), spec);
  const Constellation k = build_constellation(s.config, s.config, s.drive_table, s.drive_table);
  CHECK(std::abs(k.offset) < 0.02);
  for (std::size_t j = 0; j < k.points.size(); ++j)
    CHECK(std::abs(k.points[j] + k.points[k.points.size() - 1 - j]) < 0.02);
}

TEST_CASE("constellation rejects mismatched tables") {
  const BiasSolution& s = tuned();
  DriveLevelTable short_table = s.drive_table;
  short_table.entries.pop_back();
  CHECK_THROWS_AS(build_constellation(s.config, s.config, s.drive_table, short_table), ValidationError);
}

TEST_CASE("config validation names the arm") {
  RamziConfig c;
  c.mrm_bottom.group_index = -1.0;
  try {
    validate(c);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "mrm_bottom.group_index");
  }
  c = RamziConfig{};
  c.v_low = 1.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
}
