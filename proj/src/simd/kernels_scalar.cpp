#include "ramzi/simd/kernels.hpp"

#include <cmath>

namespace ramzi::simd::scalar {

void ring_transfer(double t, double a, const double* theta, double* re, double* im,
                   std::size_t n) {
  const double ta = t * a;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = std::cos(theta[k]);
    const double s = std::sin(theta[k]);
    // num = t - a e^{i theta}, den = 1 - t a e^{i theta}
    const double nr = t - a * c;
    const double ni = -a * s;
    const double dr = 1.0 - ta * c;
    const double di = -ta * s;
    const double inv = 1.0 / (dr * dr + di * di);
    re[k] = (nr * dr + ni * di) * inv;
    im[k] = (ni * dr - nr * di) * inv;
  }
}

void ramzi_combine(const double* tr, const double* ti, const double* br, const double* bi,
                   double c, double s, double* orr, double* oi, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    // bottom * (c - i s)
    const double rr = br[k] * c + bi[k] * s;
    const double ri = bi[k] * c - br[k] * s;
    orr[k] = 0.5 * (tr[k] + rr);
    oi[k] = 0.5 * (ti[k] + ri);
  }
}

void ramzi_magnitude_sweep(double tr, double ti, double br, double bi, const double* c,
                           const double* s, double* mag, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = tr + br * c[k] + bi * s[k];
    const double im = ti + bi * c[k] - br * s[k];
    mag[k] = 0.5 * std::sqrt(re * re + im * im);
  }
}

void conj_mismatch(double tr, double ti, const double* br, const double* bi, double* out,
                   std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double dr = tr - br[k];
    const double di = ti + bi[k];
    out[k] = std::sqrt(dr * dr + di * di);
  }
}

}  // namespace ramzi::simd::scalar
