#pragma once

// Closed-form solution of the relaxed filter-support minimization problem:
// minimize η(x) = Π x_j over 1 < x_1 < ... < x_{m-1} subject to the L¹
// constraint f(x) = γ. The minimizer is an affine image of the zeros of
// U_{m-1}, with scale K = 1/(2 sinh²β) where β solves
// cosh((2m-1)β)/cosh(β) = γ. This header also carries the numeric
// validations of the underlying linear-algebra facts (kernel of B, the
// residue identity, and the Jordan decomposition of the extended matrix).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sdm/chebyshev.hpp"
#include "sdm/log_domain.hpp"

namespace sdm {

inline double gamma_from_sigma(double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("gamma_from_sigma: sigma must be > 0");
  const double pi = std::acos(-1.0);
  return std::cosh(pi / std::sqrt(sigma));
}

inline double sigma_from_gamma(double gamma) {
  if (gamma <= 1.0) throw std::invalid_argument("sigma_from_gamma: gamma must be > 1");
  const double pi = std::acos(-1.0);
  double c = std::acosh(gamma);
  return pi * pi / (c * c);
}

/// Unique positive root of cosh((2m-1)β)/cosh(β) = γ, located by bisection
/// on the a-priori bracket [arccosh(γ)/(2m), arccosh(γ)/(2m-2)]. The ratio
/// is strictly increasing in β, so bisection cannot fail.
inline double solve_beta(int m, double gamma) {
  if (m < 2) throw std::invalid_argument("solve_beta: order must be >= 2");
  if (gamma <= 1.0) throw std::domain_error("solve_beta: no solution for gamma <= 1");
  const double c = std::acosh(gamma);
  double lo = c / (2.0 * m);
  double hi = c / (2.0 * m - 2.0);
  auto ratio = [m](double b) { return std::cosh((2.0 * m - 1.0) * b) / std::cosh(b); };
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * lo; ++it) {
    double mid = 0.5 * (lo + hi);
    (ratio(mid) < gamma ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct RelaxedSolution {
  int m = 0;
  double gamma = 0.0;
  double beta = 0.0;
  double K = 0.0;
  std::vector<double> x;      // minimizer, x_1..x_{m-1}; x_0 ≡ 1 implicit
  double log_eta_min = 0.0;   // ln of the optimal objective value
};

/// Minimizer of the relaxed problem at order m, constraint level γ.
/// x_j = 1 + 2K sin²(jπ/2m); the sin² form is exact (no cancellation) and is
/// the one the integer ceiling recursion consumes.
inline RelaxedSolution relaxed_minimizer(int m, double gamma) {
  RelaxedSolution sol;
  sol.m = m;
  sol.gamma = gamma;
  sol.beta = solve_beta(m, gamma);
  double sh = std::sinh(sol.beta);
  sol.K = 1.0 / (2.0 * sh * sh);
  const double pi = std::acos(-1.0);
  sol.x.resize(m - 1);
  for (int j = 1; j < m; ++j) {
    double s = std::sin(j * pi / (2.0 * m)) / sh;
    sol.x[j - 1] = 1.0 + s * s;
  }
  sol.log_eta_min = std::log(std::sinh(2.0 * m * sol.beta)) -
                    (2.0 * m - 1.0) * std::log(2.0 * sh) -
                    std::log(std::cosh(sol.beta));
  // The closed form must reproduce the product of the coordinates.
  double check = 0.0;
  for (double v : sol.x) check += std::log(v);
  if (std::abs(check - sol.log_eta_min) > 1e-9 * std::max(1.0, std::abs(check)))
    throw std::runtime_error("relaxed_minimizer: eta closed form disagrees with product");
  return sol;
}

/// A point of the constraint domain D, stored both as coordinates (x_0 ≡ 1
/// implicit) and as consecutive ratios r_j = x_j/x_{j-1}.
struct ConstraintPoint {
  std::vector<double> x;
  std::vector<double> r;

  static ConstraintPoint from_coordinates(std::vector<double> coords) {
    ConstraintPoint p;
    p.x = std::move(coords);
    p.r.resize(p.x.size());
    double prev = 1.0;
    for (size_t j = 0; j < p.x.size(); ++j) {
      if (p.x[j] <= 0.0)
        throw std::domain_error("ConstraintPoint: coordinates must be positive");
      p.r[j] = p.x[j] / prev;
      prev = p.x[j];
    }
    return p;
  }

  static ConstraintPoint from_ratios(const std::vector<double>& ratios) {
    ConstraintPoint p;
    p.r = ratios;
    p.x.resize(ratios.size());
    double acc = 1.0;
    for (size_t j = 0; j < ratios.size(); ++j) {
      acc *= ratios[j];
      p.x[j] = acc;
    }
    return p;
  }

  bool in_domain() const {
    double prev = 1.0;
    for (double v : x) {
      if (v <= prev) return false;
      prev = v;
    }
    return true;
  }
};

namespace detail {

// Direct form of one constraint term, log domain:
// term_j = Π'_i x_i / |x_i - x_j| over the augmented point (1, x_1, ...).
inline double log_term_direct(const std::vector<double>& pts, size_t j) {
  LogProduct p;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i == j) continue;
    double gap = pts[i] - pts[j];
    if (gap == 0.0) throw std::domain_error("constraint_f: repeated coordinates");
    p.mul(pts[i]);
    p.div(std::abs(gap));
  }
  return p.result().log_mag;
}

// Ratio form (monotone in each r_j): the same term written with
// x_j/x_i - 1 = expm1(Σ log r), which survives nearly coincident
// coordinates where the direct differences cancel.
inline double log_term_ratio(const std::vector<double>& logx, size_t j) {
  double acc = 0.0;
  for (size_t i = 0; i < logx.size(); ++i) {
    if (i == j) continue;
    double d = logx[j] - logx[i];  // log(x_j/x_i)
    double gap = (d > 0.0) ? std::expm1(d) : -std::expm1(d);
    if (gap <= 0.0) throw std::domain_error("constraint_f: repeated coordinates");
    acc -= std::log(gap);
  }
  return acc;
}

}  // namespace detail

/// Constraint functional f(x) = Σ_j Π'_i x_i/|x_i - x_j| with x_0 ≡ 1.
/// Evaluated in log-magnitude form; switches to the ratio representation
/// when coordinates nearly coincide.
inline double constraint_f(const ConstraintPoint& pt) {
  size_t n = pt.x.size() + 1;
  std::vector<double> pts(n);
  pts[0] = 1.0;
  std::copy(pt.x.begin(), pt.x.end(), pts.begin() + 1);

  double max_coord = pts.back();
  double min_gap = max_coord;
  for (size_t i = 1; i < n; ++i)
    min_gap = std::min(min_gap, std::abs(pts[i] - pts[i - 1]));
  bool use_ratio = min_gap < 1e-6 * max_coord;

  std::vector<double> logs(n);
  if (use_ratio) {
    std::vector<double> logx(n);
    logx[0] = 0.0;
    for (size_t i = 1; i < n; ++i) logx[i] = logx[i - 1] + std::log(pt.r[i - 1]);
    for (size_t j = 0; j < n; ++j) logs[j] = detail::log_term_ratio(logx, j);
  } else {
    for (size_t j = 0; j < n; ++j) logs[j] = detail::log_term_direct(pts, j);
  }
  return std::exp(log_sum_exp(logs));
}

/// ln η(x) = Σ_j ln x_j.
inline double log_eta(const ConstraintPoint& pt) {
  double acc = 0.0;
  for (double v : pt.x) {
    if (v <= 0.0) throw std::domain_error("log_eta: nonpositive coordinate");
    acc += std::log(v);
  }
  return acc;
}

/// True iff y is subordinate to x: 1 <= y_1/x_1 <= ... <= y_{m-1}/x_{m-1}.
/// Comparisons are cross-multiplied with a 1e-12 relative slack so that
/// mathematically tied ratios do not flip on rounding.
inline bool is_subordinate(const ConstraintPoint& x, const ConstraintPoint& y) {
  if (x.x.size() != y.x.size())
    throw std::invalid_argument("is_subordinate: length mismatch");
  const double slack = 1e-12;
  double prev_num = 1.0, prev_den = 1.0;  // y_0/x_0
  for (size_t j = 0; j < x.x.size(); ++j) {
    double lhs = y.x[j] * prev_den;
    double rhs = x.x[j] * prev_num;
    if (lhs < rhs * (1.0 - slack)) return false;
    prev_num = y.x[j];
    prev_den = x.x[j];
  }
  return true;
}

namespace detail {

// b_j(y) = Π'_i 1/(y_i - y_j) over the augmented vector (1, y_1, ..., y_{m-1}).
inline std::vector<double> barycentric_weights(const std::vector<double>& pts) {
  size_t n = pts.size();
  std::vector<double> b(n);
  for (size_t j = 0; j < n; ++j) {
    LogProduct p;
    for (size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      double gap = pts[i] - pts[j];
      if (gap == 0.0) throw std::domain_error("coincident coordinates");
      p.div(gap);
    }
    b[j] = p.result().value();
  }
  return b;
}

inline std::vector<double> augment(const std::vector<double>& y) {
  std::vector<double> pts(y.size() + 1);
  pts[0] = 1.0;
  std::copy(y.begin(), y.end(), pts.begin() + 1);
  return pts;
}

}  // namespace detail

/// The (m-1)×m matrix B(y) of the critical-point equations: column j of row
/// k holds b_j(y)/(y_k - y_j), with the primed sum on the diagonal position.
/// Rows are indexed by y_1..y_{m-1}, columns by y_0 ≡ 1, y_1, ..., y_{m-1}.
inline Eigen::MatrixXd build_b_matrix(const std::vector<double>& y) {
  auto pts = detail::augment(y);
  auto b = detail::barycentric_weights(pts);
  size_t n = pts.size();
  Eigen::MatrixXd B(n - 1, n);
  for (size_t k = 1; k < n; ++k) {
    double diag = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      B(k - 1, j) = b[j] / (pts[k] - pts[j]);
      diag += 1.0 / (pts[k] - pts[j]);
    }
    B(k - 1, k) = b[k] * diag;
  }
  return B;
}

/// Values (p(y_0), ..., p(y_{m-1})) of the polynomial with p' = Π (s - y_j)
/// and p(0) = 0, evaluated over the augmented point set.
inline std::vector<double> char_antiderivative_values(const std::vector<double>& y) {
  // Expand Π (s - y_j), integrate term-wise, evaluate by Horner.
  std::vector<double> coeff{1.0};  // ascending powers
  for (double root : y) {
    std::vector<double> next(coeff.size() + 1, 0.0);
    for (size_t i = 0; i < coeff.size(); ++i) {
      next[i + 1] += coeff[i];
      next[i] -= root * coeff[i];
    }
    coeff = std::move(next);
  }
  std::vector<double> integ(coeff.size() + 1, 0.0);
  for (size_t i = 0; i < coeff.size(); ++i) integ[i + 1] = coeff[i] / (i + 1.0);

  auto pts = detail::augment(y);
  std::vector<double> vals(pts.size());
  for (size_t k = 0; k < pts.size(); ++k) {
    double acc = 0.0;
    for (size_t i = integ.size(); i-- > 0;) acc = acc * pts[k] + integ[i];
    vals[k] = acc;
  }
  return vals;
}

/// Square extension of B: off-diagonal entries 1/(y_j - y_k), diagonal the
/// primed sums; rank m-1 with kernel direction b(y).
inline Eigen::MatrixXd build_btilde_matrix(const std::vector<double>& y) {
  auto pts = detail::augment(y);
  size_t n = pts.size();
  Eigen::MatrixXd Bt(n, n);
  for (size_t j = 0; j < n; ++j) {
    double diag = 0.0;
    for (size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      double gap = pts[j] - pts[k];
      if (gap == 0.0) throw std::domain_error("build_btilde_matrix: coincident coordinates");
      Bt(j, k) = 1.0 / gap;
      diag += 1.0 / gap;
    }
    Bt(j, j) = diag;
  }
  return Bt;
}

/// Similarity transform P(y) with B̃(y) P(y) = P(y) J for the nilpotent
/// Jordan block J: P_{j,n} = b_j(y) (y_j - y_{m-1})^n / n!.
inline Eigen::MatrixXd build_jordan_similarity(const std::vector<double>& y) {
  auto pts = detail::augment(y);
  auto b = detail::barycentric_weights(pts);
  size_t n = pts.size();
  Eigen::MatrixXd P(n, n);
  for (size_t j = 0; j < n; ++j) {
    double base = pts[j] - pts[n - 1];
    double term = b[j];  // base^0 / 0!
    for (size_t col = 0; col < n; ++col) {
      P(j, col) = term;
      term *= base / (col + 1.0);
    }
  }
  return P;
}

inline Eigen::VectorXd btilde_singular_values(const std::vector<double>& y) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(build_btilde_matrix(y));
  return svd.singularValues();
}

/// Max-norm residual of the Jordan decomposition, ‖B̃P - PJ‖ / ‖B̃P‖.
/// Also asserts rank m-1: exactly one singular value of B̃ below
/// 1e-8 times the largest.
inline double jordan_residual(const std::vector<double>& y) {
  Eigen::MatrixXd Bt = build_btilde_matrix(y);
  Eigen::MatrixXd P = build_jordan_similarity(y);
  Eigen::MatrixXd BP = Bt * P;
  Eigen::MatrixXd PJ = Eigen::MatrixXd::Zero(P.rows(), P.cols());
  PJ.rightCols(P.cols() - 1) = P.leftCols(P.cols() - 1);

  double scale = BP.cwiseAbs().maxCoeff();
  double resid = (BP - PJ).cwiseAbs().maxCoeff() / scale;

  Eigen::VectorXd sv = btilde_singular_values(y);
  int below = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] < 1e-8 * sv[0]) ++below;
  if (below != 1)
    throw std::runtime_error("jordan_residual: extended matrix does not have rank m-1");
  return resid;
}

}  // namespace sdm
