// AVX2 + FMA variants of the batched kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; it is never entered unless the CPU
// reports both features.

#include <immintrin.h>

#include <array>

#include "ramzi/simd/kernels.hpp"

namespace ramzi::simd::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

// Cody-Waite split of pi/4 and minimax coefficients on [-pi/4, pi/4]
// (Cephes sin.c).
constexpr double kDp1 = 7.85398125648498535156e-1;
constexpr double kDp2 = 3.77489470793079817668e-8;
constexpr double kDp3 = 2.69515142907905952645e-15;
constexpr double kFourOverPi = 1.27323954473516268615;

constexpr std::array<double, 6> kSinCoef = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
    -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr std::array<double, 6> kCosCoef = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
    2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2};

inline __m256d polevl(__m256d x, const std::array<double, 6>& c) {
  __m256d r = _mm256_set1_pd(c[0]);
  for (std::size_t k = 1; k < c.size(); ++k) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[k]));
  return r;
}

inline void sincos(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d sign_x = _mm256_and_pd(x, sign_mask);
  const __m256d ax = _mm256_andnot_pd(sign_mask, x);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  // Round the octant up to even.
  const __m256d half_y = _mm256_mul_pd(y, _mm256_set1_pd(0.5));
  const __m256d odd = _mm256_cmp_pd(_mm256_floor_pd(half_y), half_y, _CMP_NEQ_OQ);
  y = _mm256_add_pd(y, _mm256_and_pd(odd, _mm256_set1_pd(1.0)));

  // y mod 8 in {0, 2, 4, 6}
  const __m256d jm = _mm256_fnmadd_pd(
      _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125))), _mm256_set1_pd(8.0), y);
  const __m256d hi = _mm256_cmp_pd(jm, _mm256_set1_pd(3.0), _CMP_GT_OQ);
  const __m256d jr = _mm256_sub_pd(jm, _mm256_and_pd(hi, _mm256_set1_pd(4.0)));
  const __m256d swap = _mm256_cmp_pd(jr, _mm256_set1_pd(1.0), _CMP_GT_OQ);

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), polevl(zz, kSinCoef), z);
  const __m256d cos_poly =
      _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), polevl(zz, kCosCoef),
                      _mm256_fnmadd_pd(zz, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

  __m256d s = _mm256_blendv_pd(sin_poly, cos_poly, swap);
  __m256d c = _mm256_blendv_pd(cos_poly, sin_poly, swap);

  const __m256d sin_flip = _mm256_xor_pd(sign_x, _mm256_and_pd(hi, sign_mask));
  const __m256d cos_flip = _mm256_and_pd(_mm256_xor_pd(hi, swap), sign_mask);
  s_out = _mm256_xor_pd(s, sin_flip);
  c_out = _mm256_xor_pd(c, cos_flip);
}

inline void ring_block(__m256d t, __m256d a, __m256d ta, __m256d theta, __m256d& re,
                       __m256d& im) {
  __m256d s, c;
  sincos(theta, s, c);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d nr = _mm256_fnmadd_pd(a, c, t);
  const __m256d ni = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(a, s));
  const __m256d dr = _mm256_fnmadd_pd(ta, c, one);
  const __m256d di = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(ta, s));
  const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di)));
  re = _mm256_mul_pd(_mm256_fmadd_pd(nr, dr, _mm256_mul_pd(ni, di)), inv);
  im = _mm256_mul_pd(_mm256_fmsub_pd(ni, dr, _mm256_mul_pd(nr, di)), inv);
}

// Copies a partial block into zero-padded lane buffers so the tail goes
// through the same arithmetic as the body.
struct Tail {
  alignas(32) std::array<double, kLanes> v{};
  explicit Tail(const double* src, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) v[k] = src[k];
  }
  __m256d load() const { return _mm256_load_pd(v.data()); }
};

inline void store_tail(__m256d x, double* dst, std::size_t n) {
  alignas(32) std::array<double, kLanes> buf;
  _mm256_store_pd(buf.data(), x);
  for (std::size_t k = 0; k < n; ++k) dst[k] = buf[k];
}

}  // namespace

void ring_transfer(double t, double a, const double* theta, double* re, double* im,
                   std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vta = _mm256_set1_pd(t * a);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d r, i;
    ring_block(vt, va, vta, _mm256_loadu_pd(theta + k), r, i);
    _mm256_storeu_pd(re + k, r);
    _mm256_storeu_pd(im + k, i);
  }
  if (k < n) {
    const std::size_t rem = n - k;
    __m256d r, i;
    ring_block(vt, va, vta, Tail(theta + k, rem).load(), r, i);
    store_tail(r, re + k, rem);
    store_tail(i, im + k, rem);
  }
}

void ramzi_combine(const double* tr, const double* ti, const double* br, const double* bi,
                   double c, double s, double* orr, double* oi, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d half = _mm256_set1_pd(0.5);
  auto block = [&](__m256d a_re, __m256d a_im, __m256d b_re, __m256d b_im, __m256d& o_re,
                   __m256d& o_im) {
    const __m256d rr = _mm256_fmadd_pd(b_re, vc, _mm256_mul_pd(b_im, vs));
    const __m256d ri = _mm256_fmsub_pd(b_im, vc, _mm256_mul_pd(b_re, vs));
    o_re = _mm256_mul_pd(half, _mm256_add_pd(a_re, rr));
    o_im = _mm256_mul_pd(half, _mm256_add_pd(a_im, ri));
  };
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d o_re, o_im;
    block(_mm256_loadu_pd(tr + k), _mm256_loadu_pd(ti + k), _mm256_loadu_pd(br + k),
          _mm256_loadu_pd(bi + k), o_re, o_im);
    _mm256_storeu_pd(orr + k, o_re);
    _mm256_storeu_pd(oi + k, o_im);
  }
  if (k < n) {
    const std::size_t rem = n - k;
    __m256d o_re, o_im;
    block(Tail(tr + k, rem).load(), Tail(ti + k, rem).load(), Tail(br + k, rem).load(),
          Tail(bi + k, rem).load(), o_re, o_im);
    store_tail(o_re, orr + k, rem);
    store_tail(o_im, oi + k, rem);
  }
}

void ramzi_magnitude_sweep(double tr, double ti, double br, double bi, const double* c,
                           const double* s, double* mag, std::size_t n) {
  const __m256d vtr = _mm256_set1_pd(tr);
  const __m256d vti = _mm256_set1_pd(ti);
  const __m256d vbr = _mm256_set1_pd(br);
  const __m256d vbi = _mm256_set1_pd(bi);
  const __m256d half = _mm256_set1_pd(0.5);
  auto block = [&](__m256d vc, __m256d vs) {
    const __m256d re = _mm256_add_pd(vtr, _mm256_fmadd_pd(vbr, vc, _mm256_mul_pd(vbi, vs)));
    const __m256d im = _mm256_add_pd(vti, _mm256_fmsub_pd(vbi, vc, _mm256_mul_pd(vbr, vs)));
    return _mm256_mul_pd(half, _mm256_sqrt_pd(_mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im))));
  };
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes)
    _mm256_storeu_pd(mag + k, block(_mm256_loadu_pd(c + k), _mm256_loadu_pd(s + k)));
  if (k < n) {
    const std::size_t rem = n - k;
    store_tail(block(Tail(c + k, rem).load(), Tail(s + k, rem).load()), mag + k, rem);
  }
}

void conj_mismatch(double tr, double ti, const double* br, const double* bi, double* out,
                   std::size_t n) {
  const __m256d vtr = _mm256_set1_pd(tr);
  const __m256d vti = _mm256_set1_pd(ti);
  auto block = [&](__m256d b_re, __m256d b_im) {
    const __m256d dr = _mm256_sub_pd(vtr, b_re);
    const __m256d di = _mm256_add_pd(vti, b_im);
    return _mm256_sqrt_pd(_mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di)));
  };
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes)
    _mm256_storeu_pd(out + k, block(_mm256_loadu_pd(br + k), _mm256_loadu_pd(bi + k)));
  if (k < n) {
    const std::size_t rem = n - k;
    store_tail(block(Tail(br + k, rem).load(), Tail(bi + k, rem).load()), out + k, rem);
  }
}

}  // namespace ramzi::simd::avx2
