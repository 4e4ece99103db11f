#include <doctest.h>

#include <cmath>

#include "monte_carlo.hpp"
#include "ramzi/config.hpp"
#include "ramzi/link.hpp"
#include "rng.hpp"

using namespace ramzi;
using ramzi::testing::McResult;

namespace {

LinkConfig base(Format f) {
  LinkConfig c = default_config().link.link;
  c.format = f;
  return c;
}

McResult simulate(const LinkConfig& c, double p_dbm, std::uint64_t symbols, std::uint64_t seed) {
  const FormatInfo info = format_info(c.format);
  const ChainResult r = signal_chain(c, p_dbm);
  return ramzi::testing::mc_pam(info.levels, info.dimensions, r.d, r.sigma, r.comparator_threshold, symbols,
                                seed);
}

}  // namespace

TEST_CASE("generators are reproducible") {
  ramzi::testing::SplitMix64 a(5), b(5);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  ramzi::testing::Normal n(9);
  double s = 0.0, s2 = 0.0;
  const int count = 400000;
  for (int k = 0; k < count; ++k) {
    const double x = n();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / count) < 5.0 / std::sqrt(count));
  CHECK(s2 / count == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("Monte-Carlo receiver agrees with the analytic BER") {
  std::uint64_t seed = 100;
  for (Format f : kAllFormats) {
    const LinkConfig c = base(f);
    for (double target : {1e-2, 1e-3}) {
      const double p = required_power(c, target);
      const McResult mc = simulate(c, p, 1'000'000, ++seed);
      const double want = ber(c, p);
      CAPTURE(to_string(f));
      CAPTURE(target);
      CHECK(std::abs(mc.ber() - want) <= 3.0 * mc.sigma_at(want));
    }
  }
}

TEST_CASE("Wiener phase walk through the delay line agrees with the averaged BER") {
  const double linewidth = 1.0, mismatch = 1.0, ng = 1.468;
  const double s = phase_noise_sigma(linewidth, mismatch, ng);
  for (Format f : {Format::Roq16, Format::MziQam16}) {
    LinkConfig c = base(f);
    const PhaseNoiseSpec pn{linewidth, mismatch, ng};
    const double p = required_power(c, 1e-3, pn);
    const ChainResult r = signal_chain(c, p);
    std::vector<double> alphabet = dimension_levels(c);
    for (auto& a : alphabet) a *= r.current_per_unit;
    const McResult mc =
        ramzi::testing::mc_qam_wiener(alphabet, r.sigma, r.comparator_threshold, s * s, 16, 1'000'000, 23);
    const double want = ber_with_phase_noise(c, p, linewidth, mismatch, ng);
    CAPTURE(to_string(f));
    CHECK(want > 1.5 * ber(c, p));
    CHECK(std::abs(mc.ber() - want) <= 3.0 * mc.sigma_at(want));
  }
}
