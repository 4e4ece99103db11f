#include <atomic>
#include <cstdlib>
#include <string>

#include "ramzi/errors.hpp"
#include "ramzi/simd/kernels.hpp"

namespace ramzi::simd {

namespace {

bool cpu_has_avx2() {
#if defined(RAMZI_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("RAMZI_SIMD"); env != nullptr) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_equal(std::size_t expected, std::size_t got, const char* name) {
  if (expected != got)
    throw ValidationError(name, "span length " + std::to_string(got) + " != " +
                                    std::to_string(expected));
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa))
    throw ValidationError("simd", std::string(isa_name(isa)) + " is not available here");
  current().store(isa, std::memory_order_relaxed);
}

void ring_transfer(double t, double a, std::span<const double> theta,
                   std::span<double> out_re, std::span<double> out_im) {
  check_equal(theta.size(), out_re.size(), "out_re");
  check_equal(theta.size(), out_im.size(), "out_im");
#if defined(RAMZI_HAVE_AVX2)
  if (active_isa() == Isa::Avx2)
    return avx2::ring_transfer(t, a, theta.data(), out_re.data(), out_im.data(), theta.size());
#endif
  scalar::ring_transfer(t, a, theta.data(), out_re.data(), out_im.data(), theta.size());
}

void ramzi_combine(std::span<const double> top_re, std::span<const double> top_im,
                   std::span<const double> bottom_re, std::span<const double> bottom_im,
                   double cos_phase, double sin_phase,
                   std::span<double> out_re, std::span<double> out_im) {
  const std::size_t n = top_re.size();
  check_equal(n, top_im.size(), "top_im");
  check_equal(n, bottom_re.size(), "bottom_re");
  check_equal(n, bottom_im.size(), "bottom_im");
  check_equal(n, out_re.size(), "out_re");
  check_equal(n, out_im.size(), "out_im");
#if defined(RAMZI_HAVE_AVX2)
  if (active_isa() == Isa::Avx2)
    return avx2::ramzi_combine(top_re.data(), top_im.data(), bottom_re.data(),
                               bottom_im.data(), cos_phase, sin_phase, out_re.data(),
                               out_im.data(), n);
#endif
  scalar::ramzi_combine(top_re.data(), top_im.data(), bottom_re.data(), bottom_im.data(),
                        cos_phase, sin_phase, out_re.data(), out_im.data(), n);
}

void ramzi_magnitude_sweep(std::complex<double> top, std::complex<double> bottom,
                           std::span<const double> cos_phase,
                           std::span<const double> sin_phase,
                           std::span<double> out_mag) {
  const std::size_t n = cos_phase.size();
  check_equal(n, sin_phase.size(), "sin_phase");
  check_equal(n, out_mag.size(), "out_mag");
#if defined(RAMZI_HAVE_AVX2)
  if (active_isa() == Isa::Avx2)
    return avx2::ramzi_magnitude_sweep(top.real(), top.imag(), bottom.real(), bottom.imag(),
                                       cos_phase.data(), sin_phase.data(), out_mag.data(), n);
#endif
  scalar::ramzi_magnitude_sweep(top.real(), top.imag(), bottom.real(), bottom.imag(),
                                cos_phase.data(), sin_phase.data(), out_mag.data(), n);
}

void conj_mismatch(std::complex<double> top, std::span<const double> bottom_re,
                   std::span<const double> bottom_im, std::span<double> out) {
  const std::size_t n = bottom_re.size();
  check_equal(n, bottom_im.size(), "bottom_im");
  check_equal(n, out.size(), "out");
#if defined(RAMZI_HAVE_AVX2)
  if (active_isa() == Isa::Avx2)
    return avx2::conj_mismatch(top.real(), top.imag(), bottom_re.data(), bottom_im.data(),
                               out.data(), n);
#endif
  scalar::conj_mismatch(top.real(), top.imag(), bottom_re.data(), bottom_im.data(),
                        out.data(), n);
}

}  // namespace ramzi::simd
