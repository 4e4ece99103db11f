#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ramzi/devices.hpp"
#include "ramzi/errors.hpp"
#include "ramzi/simd/kernels.hpp"
#include "rng.hpp"

#ifdef RAMZI_HAVE_BOOST
#include <boost/multiprecision/cpp_bin_float.hpp>
#endif

using namespace ramzi;
using std::numbers::pi;

namespace {

constexpr std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 17, 1000, 1023};

std::vector<double> uniform(std::size_t n, double lo, double hi, std::uint64_t seed) {
  ramzi::testing::SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Restores the dispatch choice on scope exit.
struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("scalar ring kernel matches the device model") {
  const auto th = uniform(257, -pi, pi, 1);
  std::vector<double> re(th.size()), im(th.size());
  simd::scalar::ring_transfer(0.97, 0.95, th.data(), re.data(), im.data(), th.size());
  for (std::size_t k = 0; k < th.size(); ++k) {
    const ComplexAmplitude h = ring_response(0.97, 0.95, th[k]);
    CHECK(std::abs(re[k] - h.real()) < 1e-14);
    CHECK(std::abs(im[k] - h.imag()) < 1e-14);
  }
}

#ifdef RAMZI_HAVE_BOOST
TEST_CASE("scalar ring kernel against 50-digit arithmetic") {
  using big = boost::multiprecision::cpp_bin_float_50;
  const auto th = uniform(64, -pi, pi, 2);
  const double t = 0.9341112429, a = 0.9341112429;
  std::vector<double> re(th.size()), im(th.size());
  simd::scalar::ring_transfer(t, a, th.data(), re.data(), im.data(), th.size());
  for (std::size_t k = 0; k < th.size(); ++k) {
    const big c = cos(big(th[k])), s = sin(big(th[k])), bt(t), ba(a);
    const big nr = bt - ba * c, ni = -ba * s, dr = 1 - bt * ba * c, di = -bt * ba * s;
    const big den = dr * dr + di * di;
    CHECK(std::abs(re[k] - ((nr * dr + ni * di) / den).convert_to<double>()) < 1e-13);
    CHECK(std::abs(im[k] - ((ni * dr - nr * di) / den).convert_to<double>()) < 1e-13);
  }
}
#endif

#if defined(RAMZI_HAVE_AVX2)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!simd::isa_available(simd::Isa::Avx2)) {
    MESSAGE("AVX2 not available on this CPU; skipped");
    return;
  }
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto th = uniform(n, -4.0 * pi, 4.0 * pi, 10 + n);
    const auto tr = uniform(n, -1, 1, 20 + n), ti = uniform(n, -1, 1, 30 + n);
    const auto br = uniform(n, -1, 1, 40 + n), bi = uniform(n, -1, 1, 50 + n);
    const auto cs = uniform(n, -1, 1, 60 + n), sn = uniform(n, -1, 1, 70 + n);
    std::vector<double> r1(n), i1(n), r2(n), i2(n);

    simd::scalar::ring_transfer(0.93, 0.91, th.data(), r1.data(), i1.data(), n);
    simd::avx2::ring_transfer(0.93, 0.91, th.data(), r2.data(), i2.data(), n);
    CHECK(max_abs_diff(r1, r2) < 1e-12);
    CHECK(max_abs_diff(i1, i2) < 1e-12);

    simd::scalar::ramzi_combine(tr.data(), ti.data(), br.data(), bi.data(), 0.6, 0.8, r1.data(), i1.data(), n);
    simd::avx2::ramzi_combine(tr.data(), ti.data(), br.data(), bi.data(), 0.6, 0.8, r2.data(), i2.data(), n);
    CHECK(max_abs_diff(r1, r2) < 1e-15);
    CHECK(max_abs_diff(i1, i2) < 1e-15);

    simd::scalar::ramzi_magnitude_sweep(0.3, -0.2, 0.1, 0.4, cs.data(), sn.data(), r1.data(), n);
    simd::avx2::ramzi_magnitude_sweep(0.3, -0.2, 0.1, 0.4, cs.data(), sn.data(), r2.data(), n);
    CHECK(max_abs_diff(r1, r2) < 1e-15);

    simd::scalar::conj_mismatch(0.3, -0.2, br.data(), bi.data(), r1.data(), n);
    simd::avx2::conj_mismatch(0.3, -0.2, br.data(), bi.data(), r2.data(), n);
    CHECK(max_abs_diff(r1, r2) < 1e-15);
  }
}

TEST_CASE("avx2 ring kernel near resonance at the calibrated coupling") {
  if (!simd::isa_available(simd::Isa::Avx2)) return;
  const auto th = uniform(4096, -0.05, 0.05, 99);
  std::vector<double> r1(th.size()), i1(th.size()), r2(th.size()), i2(th.size());
  simd::scalar::ring_transfer(0.9341112429, 0.9341112429, th.data(), r1.data(), i1.data(), th.size());
  simd::avx2::ring_transfer(0.9341112429, 0.9341112429, th.data(), r2.data(), i2.data(), th.size());
  CHECK(max_abs_diff(r1, r2) < 1e-12);
  CHECK(max_abs_diff(i1, i2) < 1e-12);
}
#endif

TEST_CASE("dispatch can be forced and reports its choice") {
  IsaGuard guard;
  simd::set_active_isa(simd::Isa::Scalar);
  CHECK(simd::active_isa() == simd::Isa::Scalar);
  CHECK(simd::isa_name(simd::Isa::Scalar) == "scalar");
  if (!simd::isa_available(simd::Isa::Avx2)) CHECK_THROWS_AS(simd::set_active_isa(simd::Isa::Avx2), ValidationError);
}

TEST_CASE("dispatched entry points give the same result on every ISA") {
  IsaGuard guard;
  const auto th = uniform(333, -pi, pi, 5);
  std::vector<double> base_re(th.size()), base_im(th.size());
  simd::set_active_isa(simd::Isa::Scalar);
  simd::ring_transfer(0.95, 0.94, th, base_re, base_im);
  for (simd::Isa isa : {simd::Isa::Scalar, simd::Isa::Avx2}) {
    if (!simd::isa_available(isa)) continue;
    simd::set_active_isa(isa);
    std::vector<double> re(th.size()), im(th.size());
    simd::ring_transfer(0.95, 0.94, th, re, im);
    CHECK(max_abs_diff(re, base_re) < 1e-12);
    CHECK(max_abs_diff(im, base_im) < 1e-12);
  }
}

TEST_CASE("dispatched entry points reject mismatched spans") {
  std::vector<double> th(8), re(8), im(7);
  CHECK_THROWS_AS(simd::ring_transfer(0.9, 0.9, th, re, im), ValidationError);
}
