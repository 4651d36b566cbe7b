#pragma once

// Chebyshev polynomials of the first and second kind, their zero and
// critical-point sets, and the product identities the filter solver relies
// on. Everything is evaluated through the trigonometric/hyperbolic branch
// formulas: coefficient recurrences cancel catastrophically long before the
// degrees used here (up to several thousand).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sdm/log_domain.hpp"

namespace sdm {

/// T_m(x) = cos(m arccos x) on [-1,1], cosh(m arccosh|x|) with sign outside.
inline double cheb_t(int m, double x) {
  if (m < 0) throw std::invalid_argument("cheb_t: degree must be >= 0");
  if (std::abs(x) <= 1.0) return std::cos(m * std::acos(x));
  double v = std::cosh(m * std::acosh(std::abs(x)));
  return (x < 0.0 && (m % 2 != 0)) ? -v : v;
}

/// U_m(x) = sin((m+1)θ)/sin θ with x = cos θ; hyperbolic branch for |x| > 1,
/// limit values (m+1) and (-1)^m (m+1) at x = ±1.
inline double cheb_u(int m, double x) {
  if (m < 0) throw std::invalid_argument("cheb_u: degree must be >= 0");
  double ax = std::abs(x);
  double v;
  if (ax == 1.0) {
    v = m + 1.0;
  } else if (ax < 1.0) {
    double th = std::acos(ax);
    v = std::sin((m + 1) * th) / std::sin(th);
  } else {
    double t = std::acosh(ax);
    v = std::sinh((m + 1) * t) / std::sinh(t);
  }
  return (x < 0.0 && (m % 2 != 0)) ? -v : v;
}

/// Zeros of U_{m-1}: z_j = cos((m-j)π/m), j = 1..m-1, ascending. These are
/// also the interior critical points of T_m.
struct ChebNodeSet {
  int m = 0;
  std::vector<double> z;
};

/// Builds the zero set so that z_j = -z_{m-j} holds exactly in floating
/// point (the antisymmetry is relied on downstream).
inline ChebNodeSet second_kind_zeros(int m) {
  if (m < 2) throw std::invalid_argument("second_kind_zeros: need m >= 2");
  ChebNodeSet out;
  out.m = m;
  out.z.resize(m - 1);
  const double pi = std::acos(-1.0);
  for (int j = 1; 2 * j <= m - 1; ++j) {
    double c = std::cos(j * pi / m);  // j π/m < π/2, so c > 0
    out.z[j - 1] = -c;
    out.z[m - j - 1] = c;
  }
  if (m % 2 == 0) out.z[m / 2 - 1] = 0.0;
  return out;
}

/// For the critical points z_0 = -1 < z_1 < ... < z_{m-1} of T_m, returns
/// prod_{i != k} (z_k - z_i) for k = 0..m-1. Matches the closed forms
/// m(-1)^{m-1}/2^{m-1} (k = 0) and m(-1)^{m-1-k}/(2^{m-1}(1-z_k)) (k > 0).
inline std::vector<double> critical_point_products(int m) {
  if (m < 2) throw std::invalid_argument("critical_point_products: need m >= 2");
  ChebNodeSet nodes = second_kind_zeros(m);
  std::vector<double> pts;
  pts.reserve(m);
  pts.push_back(-1.0);
  pts.insert(pts.end(), nodes.z.begin(), nodes.z.end());

  std::vector<double> out(m);
  if (m <= 40) {
    for (int k = 0; k < m; ++k) {
      double p = 1.0;
      for (int i = 0; i < m; ++i)
        if (i != k) p *= pts[k] - pts[i];
      out[k] = p;
    }
  } else {
    // The direct product underflows double range for large m.
    for (int k = 0; k < m; ++k) {
      LogProduct p;
      for (int i = 0; i < m; ++i)
        if (i != k) p.mul(pts[k] - pts[i]);
      out[k] = p.result().value();
    }
  }
  return out;
}

}  // namespace sdm
