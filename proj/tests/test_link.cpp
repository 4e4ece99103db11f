#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ramzi/config.hpp"
#include "ramzi/errors.hpp"
#include "ramzi/link.hpp"
#include "ramzi/quadrature.hpp"

#ifdef RAMZI_HAVE_BOOST
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#endif

using namespace ramzi;

namespace {

LinkConfig base(Format f, double rate = 200.0) {
  LinkConfig c = default_config().link.link;
  c.format = f;
  c.datarate_gbps = rate;
  return c;
}

double dbm_of(double mw) { return 10.0 * std::log10(mw); }

}  // namespace

TEST_CASE("symbol rates") {
  CHECK(baud_for(Format::Roq16, 200.0) == 50.0);
  CHECK(baud_for(Format::MziPam4, 400.0) == 200.0);
  CHECK(baud_for(Format::MziPam8, 200.0) == doctest::Approx(66.6667).epsilon(1e-5));
  CHECK(baud_for(Format::MziQam4, 200.0) == 100.0);
  CHECK_THROWS_AS(baud_for(Format::Roq16, 0.0), ValidationError);
}

TEST_CASE("format names round-trip") {
  for (Format f : kAllFormats) CHECK(format_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(format_from_string("OOK"), ValidationError);
}

TEST_CASE("spacing vanishes in the dark and noise does not") {
  for (Format f : kAllFormats) {
    const ChainResult bright = signal_chain(base(f), 5.0);
    const ChainResult dark = signal_chain(base(f), -300.0);
    CHECK(dark.d < 1e-25);
    CHECK(dark.sigma == bright.sigma);
  }
}

TEST_CASE("spacing is homogeneous of degree one in laser power") {
  for (Format f : kAllFormats) {
    CAPTURE(to_string(f));
    const double p = 0.7;
    const double a = signal_chain(base(f), dbm_of(p)).d, b = signal_chain(base(f), dbm_of(2.0 * p)).d;
    CHECK(b / a == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("ROQ16 200G chain against a hand budget") {
  const LinkConfig c = base(Format::Roq16);
  const double p = 6.71;
  // Hand budget in dB: LO = split, 2 GC, hybrid, balanced coupler.
  const double three = 10.0 * std::log10(2.0);
  const double lo_dbm = p - three - 1.8 - 1.8 - three - three;
  // Signal = split, GC, I/Q split, I/Q combine, 2 GC, hybrid, balanced coupler.
  const double sig_dbm = p - three - 1.8 - three - three - 1.8 - 1.8 - three - three;
  const double lo_w = 1e-3 * std::pow(10.0, lo_dbm / 10.0), sig_w = 1e-3 * std::pow(10.0, sig_dbm / 10.0);
  const double spacing = 0.64 / 3.0;
  const double isi = 1.0 - 2.0 * std::exp(-2.0 * std::numbers::pi * 67.0 / 50.0);
  const double d_hand = 2.0 * 1.0 * std::sqrt(lo_w * sig_w) * spacing * std::pow(10.0, -0.5) * isi;
  const ChainResult r = signal_chain(c, p);
  CHECK(std::abs(20.0 * std::log10(r.d / d_hand)) < 0.01);
  CHECK(r.d == doctest::Approx(d_hand).epsilon(1e-12));
  CHECK(r.sigma == doctest::Approx(15e-12 * std::sqrt(c.noise_bandwidth_factor * 50e9)).epsilon(1e-12));
  CHECK(r.comparator_threshold == doctest::Approx(5e-6));
  // Audit rows end at the per-photodiode powers.
  double lo_last = 0.0, sig_last = 0.0;
  for (const auto& a : r.audit) {
    if (a.path == "LO") lo_last = a.power_mw;
    if (a.path == "signal") sig_last = a.power_mw;
  }
  CHECK(dbm_of(lo_last) == doctest::Approx(lo_dbm).epsilon(1e-12));
  CHECK(dbm_of(sig_last) == doctest::Approx(sig_dbm).epsilon(1e-12));
}

TEST_CASE("MZI formats pay the mux and demux on the signal only") {
  const ChainResult r = signal_chain(base(Format::MziQam16), 0.0);
  int mux = 0;
  for (const auto& a : r.audit)
    if (a.stage == "mux" || a.stage == "demux") {
      ++mux;
      CHECK(a.path == "signal");
      CHECK(a.loss_db == doctest::Approx(2.8));
    }
  CHECK(mux == 2);
}

TEST_CASE("Q function") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(q_function(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
#ifdef RAMZI_HAVE_BOOST
  using big = boost::multiprecision::cpp_bin_float_50;
  for (double x : {0.5, 2.0, 4.75, 7.0, 12.0, 25.0}) {
    const big want = boost::math::erfc(big(x) / boost::multiprecision::sqrt(big(2))) / 2;
    CHECK(q_function(x) == doctest::Approx(want.convert_to<double>()).epsilon(1e-13));
  }
#endif
}

TEST_CASE("zero eye margin gives the Q(0) error rate") {
  LinkConfig c = base(Format::MziPam4);
  // d is linear in milliwatts for IM-DD: pick the power with d / 2 = threshold.
  const ChainResult unit = signal_chain(c, 0.0);
  const double p = dbm_of(2.0 * unit.comparator_threshold / unit.d);
  CHECK(ber(c, p) == doctest::Approx(0.375).epsilon(1e-9));
}

TEST_CASE("noise-free link with open eye has no errors") {
  LinkConfig c = base(Format::Roq16);
  c.afe_noise_a_per_rthz = 1e-30;
  CHECK(ber(c, 10.0) == 0.0);
}

TEST_CASE("BER falls with laser power") {
  for (Format f : kAllFormats) {
    CAPTURE(to_string(f));
    const LinkConfig c = base(f);
    double prev = 1.0;
    for (double p = -10.0; p <= 15.0; p += 0.25) {
      const double b = ber(c, p);
      CHECK(b <= prev);
      prev = b;
    }
  }
}

TEST_CASE("rotation by zero reproduces the plain BER") {
  for (Format f : {Format::Roq16, Format::MziQam16, Format::MziQam4}) {
    const LinkConfig c = base(f);
    for (double p : {4.0, 6.0, 8.0}) CHECK(ber_rotated(c, p, 0.0) == doctest::Approx(ber(c, p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ber_rotated(base(Format::MziPam4), 5.0, 0.1), ValidationError);
}

TEST_CASE("zero linewidth is exactly the plain BER") {
  const LinkConfig c = base(Format::Roq16);
  CHECK(ber_with_phase_noise(c, 6.5, 0.0, 1.0) == ber(c, 6.5));
  CHECK(ber_with_phase_noise(c, 6.5, 1.0, 0.0) == ber(c, 6.5));
  CHECK_THROWS_AS(ber_with_phase_noise(base(Format::MrmPam4), 6.5, 1.0, 1.0), ValidationError);
}

TEST_CASE("phase-noise sigma") {
  const double want = std::sqrt(2.0 * std::numbers::pi * 1e6 * 0.01 * 1.468 / 299792458.0);
  CHECK(phase_noise_sigma(1.0, 1.0, 1.468) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(phase_noise_sigma(-1.0, 1.0, 1.468), ValidationError);
}

TEST_CASE("Gauss-Hermite rule integrates normal moments exactly") {
  for (int n : {5, 21, 64}) {
    const QuadratureRule r = gauss_hermite_normal(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    // E[X^2k] = (2k - 1)!! up to degree 2n - 1.
    double dfact = 1.0;
    for (int k = 1; 2 * k <= std::min(2 * n - 1, 20); ++k) {
      dfact *= 2 * k - 1;
      double m = 0.0, odd = 0.0;
      for (std::size_t j = 0; j < r.nodes.size(); ++j) {
        m += r.weights[j] * std::pow(r.nodes[j], 2 * k);
        odd += r.weights[j] * std::pow(r.nodes[j], 2 * k - 1);
      }
      CAPTURE(n);
      CAPTURE(k);
      CHECK(m == doctest::Approx(dfact).epsilon(1e-10));
      CHECK(std::abs(odd) < 1e-10 * dfact);
    }
  }
  CHECK_THROWS_AS(gauss_hermite_normal(0), ValidationError);
}

TEST_CASE("required power hits the target BER") {
  for (Format f : kAllFormats) {
    CAPTURE(to_string(f));
    const LinkConfig c = base(f);
    const double p = required_power(c, 1e-6);
    CHECK(ber(c, p + 0.001) <= 1e-6);
    CHECK(ber(c, p - 0.001) > 1e-6);
  }
  CHECK_THROWS_AS(required_power(base(Format::Roq16), 0.7), ValidationError);
  LinkConfig starved = base(Format::MziPam8);
  starved.margin_db = 40.0;
  CHECK_THROWS_AS(required_power(starved, 1e-6), InfeasibleError);
}

TEST_CASE("phase noise only raises the coherent required power") {
  const PhaseNoiseSpec pn{1.0, 1.0, 1.468};
  for (Format f : kAllFormats) {
    CAPTURE(to_string(f));
    const LinkConfig c = base(f);
    const double plain = required_power(c), noisy = required_power(c, 1e-6, pn);
    if (architecture_of(f) == Architecture::Coherent)
      CHECK(noisy >= plain);
    else
      CHECK(noisy == plain);
  }
}

TEST_CASE("noise-bandwidth calibration reproduces the anchor") {
  LinkConfig c = base(Format::Roq16);
  c.noise_bandwidth_factor = 0.75;
  const double beta = calibrate_noise_bandwidth(c, 6.71);
  CHECK(beta == doctest::Approx(kCalibratedNoiseBandwidth).epsilon(1e-6));
  c.noise_bandwidth_factor = beta;
  CHECK(std::abs(required_power(c) - 6.71) < 0.01);
}

TEST_CASE("laser energy per bit") {
  // 10 mW at 100 Gb/s and 10 % wall plug: 100 mW / 100 Gb/s = 1 pJ/b.
  CHECK(laser_energy_fj_per_bit(10.0, 100.0) == doctest::Approx(1000.0));
  CHECK_THROWS_AS(laser_energy_fj_per_bit(0.0, 100.0, 0.0), ValidationError);
}

TEST_CASE("comparison covers every format") {
  const Comparison cmp = compare_formats(base(Format::Roq16), 200.0, {0.0, 5.0, 10.0});
  CHECK(cmp.curves.size() == std::size(kAllFormats));
  for (Format f : kAllFormats) {
    REQUIRE(cmp.required(f).has_value());
    CHECK(*cmp.required(f) == doctest::Approx(required_power(base(f))).epsilon(1e-12));
  }
}

TEST_CASE("link validation") {
  LinkConfig c = base(Format::Roq16);
  c.lo_split_fraction = 1.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = base(Format::Roq16);
  c.quadrature_nodes = 5;
  CHECK_THROWS_AS(validate(c), ValidationError);
}
