#pragma once

#include <vector>

namespace ramzi {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for E[f(X)], X ~ N(0, 1): sum w_k f(x_k), weights sum
/// to 1. Exact for polynomials up to degree 2n - 1.
QuadratureRule gauss_hermite_normal(int n);

}  // namespace ramzi
