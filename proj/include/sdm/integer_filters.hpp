#pragma once

// Integer realizations of the optimal filters: the minimal subordinate
// integer support sequence, the sparse coefficient vector d, the accumulated
// filter g with Δ^m g = δ⁰ - h, and the norms that drive the error bounds.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdm/double_double.hpp"
#include "sdm/log_domain.hpp"
#include "sdm/relaxed_solver.hpp"

namespace sdm {

/// n_1 = 1, n_{j+1} = ceil(n_j · x_j/x_{j-1}) against the relaxed minimizer.
/// Values within 1e-9 of an integer are snapped before the ceiling: exact
/// coincidences (e.g. x_1 = 5 at m = 2, γ = 1.5) must not jump up on
/// floating noise.
inline std::vector<std::int64_t> minimal_subordinate_sequence(int m, double gamma) {
  if (m < 1) throw std::invalid_argument("minimal_subordinate_sequence: m must be >= 1");
  if (gamma <= 1.0) throw std::domain_error("minimal_subordinate_sequence: gamma must be > 1");
  std::vector<std::int64_t> n(m, 1);
  if (m == 1) return n;
  RelaxedSolution sol = relaxed_minimizer(m, gamma);
  for (int j = 1; j < m; ++j) {
    double ratio = sol.x[j - 1] / (j == 1 ? 1.0 : sol.x[j - 2]);
    double t = static_cast<double>(n[j - 1]) * ratio;
    double snapped = std::round(t);
    n[j] = (std::abs(t - snapped) <= 1e-9) ? static_cast<std::int64_t>(snapped)
                                           : static_cast<std::int64_t>(std::ceil(t));
  }
  return n;
}

/// d_j = Π'_i n_i/(n_i - n_j) in sign + log-magnitude form. The sign pattern
/// is (-1)^{j-1}; the coefficients sum to 1 by the moment conditions.
inline std::vector<SignedLog> filter_coefficients(const std::vector<std::int64_t>& n) {
  size_t m = n.size();
  if (m == 0) throw std::invalid_argument("filter_coefficients: empty support");
  for (size_t j = 1; j < m; ++j)
    if (n[j] <= n[j - 1]) throw std::invalid_argument("filter_coefficients: support must increase");
  if (n[0] < 1) throw std::invalid_argument("filter_coefficients: support must start at >= 1");

  std::vector<SignedLog> d(m);
  for (size_t j = 0; j < m; ++j) {
    LogProduct p;
    for (size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      p.mul(static_cast<double>(n[i]));
      p.div(static_cast<double>(n[i] - n[j]));
    }
    d[j] = p.result();
  }

  double sum = 0.0;
  for (const auto& v : d) sum += v.value();
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error("filter_coefficients: moment sum deviates from 1");
  return d;
}

struct FilterDesign {
  int m = 0;
  double gamma = 0.0;
  std::vector<std::int64_t> n;  // support positions, n_1 = 1
  std::vector<SignedLog> d;     // tap coefficients
  double h_one_norm = 0.0;      // Σ |d_j|
  double log_g1 = 0.0;          // ln ‖g‖₁ = ln(Π n_j / m!)
};

inline FilterDesign design_from_support(std::vector<std::int64_t> n, double gamma) {
  FilterDesign fd;
  fd.m = static_cast<int>(n.size());
  fd.gamma = gamma;
  fd.d = filter_coefficients(n);
  fd.n = std::move(n);
  for (const auto& v : fd.d) fd.h_one_norm += std::exp(v.log_mag);
  double s = 0.0;
  for (auto v : fd.n) s += std::log(static_cast<double>(v));
  fd.log_g1 = s - std::lgamma(fd.m + 1.0);
  return fd;
}

/// Full design at order m and constraint level γ (minimal subordinate
/// support plus coefficients and norms).
inline FilterDesign design_filter(int m, double gamma) {
  return design_from_support(minimal_subordinate_sequence(m, gamma), gamma);
}

/// Strictly causal sparse filter h = Σ d_j δ^{(n_j)}.
struct SparseFilter {
  struct Tap {
    std::int64_t position;
    double coefficient;
  };
  std::vector<Tap> taps;

  double one_norm() const {
    double s = 0.0;
    for (const auto& t : taps) s += std::abs(t.coefficient);
    return s;
  }
  std::int64_t span() const { return taps.empty() ? 0 : taps.back().position; }
};

inline SparseFilter h_from_design(const FilterDesign& design) {
  SparseFilter h;
  h.taps.reserve(design.n.size());
  for (size_t j = 0; j < design.n.size(); ++j)
    h.taps.push_back({design.n[j], design.d[j].value()});
  return h;
}

namespace detail {

// m-fold compensated cumulative summation of δ⁰ - h; throws when the tail
// that the moment conditions should annihilate survives.
inline std::vector<double> accumulate_g(int m, std::int64_t span,
                                        const std::vector<std::pair<std::int64_t, DD>>& taps) {
  std::vector<DD> g(span + 1);
  g[0] = dd::from(1.0);
  for (const auto& [pos, coeff] : taps) g[pos] = dd::sub(g[pos], coeff);
  for (int pass = 0; pass < m; ++pass)
    for (std::int64_t k = 1; k <= span; ++k) g[k] = dd::add(g[k], g[k - 1]);

  std::vector<double> out(g.size());
  double l1 = 0.0;
  for (size_t k = 0; k < g.size(); ++k) {
    out[k] = dd::to_double(g[k]);
    l1 += std::abs(out[k]);
  }
  std::int64_t tail_start = span - m + 1;
  for (std::int64_t k = std::max<std::int64_t>(tail_start, 0); k <= span; ++k)
    if (std::abs(out[k]) > 1e-9 * l1)
      throw std::runtime_error("g accumulation: nonvanishing tail, filter infeasible");
  out.resize(std::max<std::int64_t>(tail_start, 1));
  return out;
}

}  // namespace detail

/// Solves Δ^m g = δ⁰ - h by m cumulative sums. The result must be finitely
/// supported on [0, n_m - m]; a nonvanishing tail means the moment
/// conditions were violated. Dense materialization is limited to m <= 20.
/// The accumulation itself is compensated, but double-rounded tap values cap
/// the attainable tail cancellation around m ≈ 13 for sharp designs; filters
/// coming from a FilterDesign should go through g_from_design, which rebuilds
/// the coefficients from the exact integer support.
inline std::vector<double> g_from_h(int m, const SparseFilter& h) {
  if (m < 1) throw std::invalid_argument("g_from_h: m must be >= 1");
  if (m > 20) throw std::invalid_argument("g_from_h: dense accumulation limited to m <= 20");
  for (const auto& t : h.taps)
    if (t.position < 1) throw std::invalid_argument("g_from_h: filter must be strictly causal");
  std::vector<std::pair<std::int64_t, DD>> taps;
  taps.reserve(h.taps.size());
  for (const auto& t : h.taps) taps.emplace_back(t.position, dd::from(t.coefficient));
  return detail::accumulate_g(m, h.span(), taps);
}

/// Accumulated filter of a design, with the tap values recomputed in
/// extended precision from the integer support so the tail cancellation is
/// exact to far below the 1e-9 certificate.
inline std::vector<double> g_from_design(const FilterDesign& design) {
  if (design.m > 20)
    throw std::invalid_argument("g_from_design: dense accumulation limited to m <= 20");
  std::vector<std::pair<std::int64_t, DD>> taps;
  taps.reserve(design.n.size());
  for (size_t j = 0; j < design.n.size(); ++j) {
    DD num = dd::from(1.0), den = dd::from(1.0);
    for (size_t i = 0; i < design.n.size(); ++i) {
      if (i == j) continue;
      num = dd::mul(num, dd::from(static_cast<double>(design.n[i])));
      den = dd::mul(den, dd::from(static_cast<double>(design.n[i] - design.n[j])));
    }
    taps.emplace_back(design.n[j], dd::div(num, den));
  }
  return detail::accumulate_g(design.m, design.n.back(), taps);
}

/// w_j = 1 + σ j², the quadratic envelope of the relaxed minimizers.
inline std::vector<double> w_sequence(double sigma, int m) {
  if (sigma <= 0.0) throw std::invalid_argument("w_sequence: sigma must be > 0");
  if (m < 2) throw std::invalid_argument("w_sequence: need m >= 2");
  std::vector<double> w(m - 1);
  for (int j = 1; j < m; ++j) w[j - 1] = 1.0 + sigma * j * j;
  return w;
}

/// Large-m limit of the integer positions, valid for σ > 5/4:
/// n_j → 1 + ⌈σ⌉ (j-1)². Below 5/4 the limit deviates from this formula.
inline std::int64_t asymptotic_position(double sigma, int j) {
  if (j < 1) throw std::invalid_argument("asymptotic_position: j must be >= 1");
  if (!(sigma > 1.25)) throw std::domain_error("asymptotic_position: requires sigma > 5/4");
  std::int64_t c = static_cast<std::int64_t>(std::ceil(sigma));
  return 1 + c * static_cast<std::int64_t>(j - 1) * (j - 1);
}

/// (η(n)/η(x))^{1/m} for the minimal subordinate sequence against the
/// relaxed optimum; >= 1, equal to 1 exactly when the ceilings are inactive.
inline double optimality_ratio(int m, double gamma) {
  if (m < 2) throw std::invalid_argument("optimality_ratio: need m >= 2");
  RelaxedSolution sol = relaxed_minimizer(m, gamma);
  std::vector<std::int64_t> n = minimal_subordinate_sequence(m, gamma);
  double log_eta_n = 0.0;
  for (size_t j = 1; j < n.size(); ++j) log_eta_n += std::log(static_cast<double>(n[j]));
  double diff = log_eta_n - sol.log_eta_min;
  // exact coincidences (all ceilings inactive) must come out as exactly 1
  if (diff < 1e-12 * std::max(1.0, std::abs(log_eta_n))) diff = 0.0;
  return std::exp(diff / m);
}

/// FilterDesign JSON document: {m, gamma, n, d, h_one_norm, log_g1} with all
/// reals rendered at 17 significant digits.
inline std::string design_to_json(const FilterDesign& fd) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string out = "{\n  \"m\": " + std::to_string(fd.m);
  out += ",\n  \"gamma\": " + fmt(fd.gamma);
  out += ",\n  \"n\": [";
  for (size_t i = 0; i < fd.n.size(); ++i)
    out += (i ? ", " : "") + std::to_string(fd.n[i]);
  out += "],\n  \"d\": [";
  for (size_t i = 0; i < fd.d.size(); ++i)
    out += (i ? ", " : "") + fmt(fd.d[i].value());
  out += "],\n  \"h_one_norm\": " + fmt(fd.h_one_norm);
  out += ",\n  \"log_g1\": " + fmt(fd.log_g1);
  out += "\n}\n";
  return out;
}

}  // namespace sdm
