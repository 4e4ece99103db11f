#pragma once

// Batched inner loops used by the sweep, grid-search and transient code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at first use from the CPU
// feature bits; set RAMZI_SIMD=scalar in the environment to force the
// reference path. Both paths agree to a few ulp (see tests/test_simd.cpp).
//
// All spans of one call must have equal length.

#include <complex>
#include <span>
#include <string_view>

namespace ramzi::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// ISA used by the dispatched entry points below.
Isa active_isa();

/// Whether `isa` can run on this machine (and was compiled in).
bool isa_available(Isa isa);

/// Override the dispatch (tests, benchmarks). Throws if unavailable.
void set_active_isa(Isa isa);

/// All-pass ring response H = (t - a e^{i theta}) / (1 - t a e^{i theta}).
void ring_transfer(double t, double a, std::span<const double> theta,
                   std::span<double> out_re, std::span<double> out_im);

/// Two-arm combination out = (top + bottom * e^{-i phase}) / 2, element-wise.
/// The 1/2 is the 1/sqrt(2) splitter times the 1/sqrt(2) combiner.
void ramzi_combine(std::span<const double> top_re, std::span<const double> top_im,
                   std::span<const double> bottom_re, std::span<const double> bottom_im,
                   double cos_phase, double sin_phase,
                   std::span<double> out_re, std::span<double> out_im);

/// |top + bottom * (cos_phase[k] - i sin_phase[k])| / 2 for a sweep of
/// arm phases with fixed arm fields.
void ramzi_magnitude_sweep(std::complex<double> top, std::complex<double> bottom,
                           std::span<const double> cos_phase,
                           std::span<const double> sin_phase,
                           std::span<double> out_mag);

/// |top - conj(bottom[k])|: distance from the equal-amplitude,
/// opposite-phase condition between one top field and a row of bottoms.
void conj_mismatch(std::complex<double> top, std::span<const double> bottom_re,
                   std::span<const double> bottom_im, std::span<double> out);

// Direct access to each implementation, for equivalence testing.
namespace scalar {
void ring_transfer(double t, double a, const double* theta, double* re, double* im,
                   std::size_t n);
void ramzi_combine(const double* tr, const double* ti, const double* br, const double* bi,
                   double c, double s, double* orr, double* oi, std::size_t n);
void ramzi_magnitude_sweep(double tr, double ti, double br, double bi, const double* c,
                           const double* s, double* mag, std::size_t n);
void conj_mismatch(double tr, double ti, const double* br, const double* bi, double* out,
                   std::size_t n);
}  // namespace scalar

#if defined(RAMZI_HAVE_AVX2)
namespace avx2 {
void ring_transfer(double t, double a, const double* theta, double* re, double* im,
                   std::size_t n);
void ramzi_combine(const double* tr, const double* ti, const double* br, const double* bi,
                   double c, double s, double* orr, double* oi, std::size_t n);
void ramzi_magnitude_sweep(double tr, double ti, double br, double bi, const double* c,
                           const double* s, double* mag, std::size_t n);
void conj_mismatch(double tr, double ti, const double* br, const double* bi, double* out,
                   std::size_t n);
}  // namespace avx2
#endif

}  // namespace ramzi::simd
