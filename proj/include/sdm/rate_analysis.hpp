#pragma once

// Error-bound evaluation and optimization over the filter order, the
// multi-level alphabet comparison table, and the coding-efficiency curves.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sdm/integer_filters.hpp"
#include "sdm/relaxed_solver.hpp"

namespace sdm {

/// log₂ of the worst-case reconstruction error bound
/// ‖g‖₁ · ‖v‖∞ · ‖φ₀‖₁ · πᵐ (1+ε)ᵐ λ⁻ᵐ with ‖v‖∞ = 1 (greedy stability).
inline double log2_error_bound(int m, double lambda, double log_g1, double log_phi_l1,
                               double epsilon) {
  if (m < 1) throw std::invalid_argument("log2_error_bound: m must be >= 1");
  if (lambda <= 0.0) throw std::invalid_argument("log2_error_bound: lambda must be > 0");
  const double pi = std::acos(-1.0);
  double ln = log_g1 + log_phi_l1 + m * (std::log(pi) + std::log1p(epsilon) - std::log(lambda));
  return ln / std::log(2.0);
}

/// ln ‖g‖₁ for the minimal subordinate designs m = 1..m_max at fixed γ,
/// built once and then read concurrently.
class DesignCache {
 public:
  DesignCache(double gamma, int m_max) : gamma_(gamma), log_g1_(m_max + 1, 0.0) {
    if (m_max < 1) throw std::invalid_argument("DesignCache: m_max must be >= 1");
    for (int m = 1; m <= m_max; ++m) {
      auto n = minimal_subordinate_sequence(m, gamma);
      double s = 0.0;
      for (auto v : n) s += std::log(static_cast<double>(v));
      log_g1_[m] = s - std::lgamma(m + 1.0);
    }
  }

  double gamma() const { return gamma_; }
  int m_max() const { return static_cast<int>(log_g1_.size()) - 1; }
  double log_g1(int m) const { return log_g1_.at(m); }

 private:
  double gamma_;
  std::vector<double> log_g1_;
};

struct OrderChoice {
  int m_opt = 1;
  double log2_bound = 0.0;
  bool at_boundary = false;  // minimum hit m_max; enlarge the cache
};

/// Order minimizing the error bound at oversampling ratio λ.
inline OrderChoice optimize_order(double lambda, const DesignCache& cache, double epsilon,
                                  double log_phi_l1 = 0.0) {
  OrderChoice best;
  best.log2_bound = log2_error_bound(1, lambda, cache.log_g1(1), log_phi_l1, epsilon);
  for (int m = 2; m <= cache.m_max(); ++m) {
    double b = log2_error_bound(m, lambda, cache.log_g1(m), log_phi_l1, epsilon);
    if (b < best.log2_bound) {
      best.log2_bound = b;
      best.m_opt = m;
    }
  }
  best.at_boundary = (best.m_opt == cache.m_max());
  return best;
}

inline OrderChoice optimize_order(double lambda, double gamma, double epsilon, int m_max,
                                  double log_phi_l1 = 0.0) {
  DesignCache cache(gamma, m_max);
  return optimize_order(lambda, cache, epsilon, log_phi_l1);
}

/// One row of the multi-level comparison: alphabet size, bits/sample, the
/// minimal integer σ with cosh(π/√σ) < L, the input headroom, the
/// achievable rate r₀ = π/(e²σ ln 2) and its efficiency per bit.
struct RateRow {
  int L = 2;
  double bits_per_sample = 1.0;
  int sigma = 6;
  double max_input = 0.0;
  double r0 = 0.0;
  double efficiency = 0.0;
};

inline RateRow make_rate_row(int L) {
  if (L < 2) throw std::invalid_argument("make_rate_row: need L >= 2");
  RateRow row;
  row.L = L;
  row.bits_per_sample = std::log2(static_cast<double>(L));
  int s = 1;
  while (!(gamma_from_sigma(static_cast<double>(s)) < L)) ++s;
  row.sigma = s;
  const double pi = std::acos(-1.0);
  row.max_input = L - gamma_from_sigma(static_cast<double>(s));
  row.r0 = pi / (std::exp(2.0) * s * std::log(2.0));
  row.efficiency = row.r0 / row.bits_per_sample;
  return row;
}

inline std::vector<RateRow> multilevel_table(const std::vector<int>& L_values) {
  std::vector<RateRow> rows;
  rows.reserve(L_values.size());
  for (int L : L_values) rows.push_back(make_rate_row(L));
  return rows;
}

/// Coding efficiency as a function of σ, with the limit m²/η(n)^{1/m}
/// estimated at a single large order and re-checked at half that order.
struct EfficiencyPoint {
  double sigma = 0.0;
  double limit_factor = 0.0;  // m²/η(n)^{1/m} at m_est
  double efficiency = 0.0;
  bool converged = false;     // value at m_est within 1% of m_est/2
};

namespace detail {

inline double limit_factor_at(double gamma, int m) {
  auto n = minimal_subordinate_sequence(m, gamma);
  double log_eta_n = 0.0;
  for (size_t j = 1; j < n.size(); ++j) log_eta_n += std::log(static_cast<double>(n[j]));
  return std::exp(2.0 * std::log(static_cast<double>(m)) - log_eta_n / m);
}

}  // namespace detail

inline std::vector<EfficiencyPoint> efficiency_curve(const std::vector<double>& sigma_grid,
                                                     int m_est) {
  if (m_est < 100) throw std::invalid_argument("efficiency_curve: m_est must be >= 100");
  const double pi = std::acos(-1.0);
  std::vector<EfficiencyPoint> out;
  out.reserve(sigma_grid.size());
  for (double sigma : sigma_grid) {
    double gamma = gamma_from_sigma(sigma);
    EfficiencyPoint p;
    p.sigma = sigma;
    p.limit_factor = detail::limit_factor_at(gamma, m_est);
    double coarse = detail::limit_factor_at(gamma, m_est / 2);
    p.converged = std::abs(p.limit_factor - coarse) < 0.01 * p.limit_factor;
    double levels = std::ceil(gamma);
    p.efficiency = p.limit_factor / (pi * std::exp(2.0) * std::log(levels));
    out.push_back(p);
  }
  return out;
}

/// Fig.-1-style comparison of the relaxed coordinates against the integer
/// positions: one row per (σ, j) with x_{j-1} and n_j at order m_est.
struct SigmaQuantizationRow {
  double sigma = 0.0;
  int j = 0;
  double x_limit = 0.0;      // x_{j-1} at m_est (x_0 ≡ 1)
  std::int64_t n_position = 0;
};

inline std::vector<SigmaQuantizationRow> sigma_quantization_curve(
    const std::vector<double>& sigma_grid, const std::vector<int>& j_values, int m_est) {
  if (m_est < 2) throw std::invalid_argument("sigma_quantization_curve: m_est too small");
  std::vector<SigmaQuantizationRow> out;
  for (double sigma : sigma_grid) {
    double gamma = gamma_from_sigma(sigma);
    RelaxedSolution sol = relaxed_minimizer(m_est, gamma);
    auto n = minimal_subordinate_sequence(m_est, gamma);
    for (int j : j_values) {
      if (j < 1 || j > m_est) throw std::invalid_argument("sigma_quantization_curve: bad j");
      SigmaQuantizationRow row;
      row.sigma = sigma;
      row.j = j;
      row.x_limit = (j == 1) ? 1.0 : sol.x[j - 2];
      row.n_position = n[j - 1];
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace sdm
