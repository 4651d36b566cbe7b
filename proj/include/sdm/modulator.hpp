#pragma once

// Greedy feedback quantization: v_n = (h*v)_n + y_n - q_n with q_n the
// alphabet level nearest to the pre-quantization value. Stability is
// guaranteed when ‖h‖₁ + ‖y‖∞ <= L.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sdm/integer_filters.hpp"

namespace sdm {

/// L equispaced levels with spacing 2, symmetric about 0.
/// L = 2 gives {-1, +1}; L = 5 gives {-4, -2, 0, 2, 4}.
struct Alphabet {
  int L = 2;

  explicit Alphabet(int levels) : L(levels) {
    if (L < 2) throw std::invalid_argument("Alphabet: need at least 2 levels");
  }

  double level(int i) const { return 2.0 * i - (L - 1); }
  double min_level() const { return level(0); }
  double max_level() const { return level(L - 1); }

  /// Nearest level to s; midpoint ties resolve toward the larger level,
  /// which for L = 2 reproduces sign with sign(0) = +1.
  double nearest(double s) const {
    double t = std::floor((s + (L - 1)) / 2.0 + 0.5);
    if (t < 0.0) t = 0.0;
    if (t > L - 1) t = L - 1;
    return 2.0 * t - (L - 1);
  }

  bool contains(double q) const {
    double idx = (q + (L - 1)) / 2.0;
    return idx >= 0.0 && idx <= L - 1 && idx == std::floor(idx);
  }
};

/// One simulation run: input y, output q, state v. v_init supplies values
/// for negative indices (all zero unless set).
struct ModulatorTrace {
  std::vector<double> y;
  std::vector<double> q;
  std::vector<double> v;
  std::map<std::int64_t, double> v_init;

  double max_abs_v() const {
    double m = 0.0;
    for (double s : v) m = std::max(m, std::abs(s));
    return m;
  }
};

namespace detail {

inline double state_at(const ModulatorTrace& tr, std::int64_t k) {
  if (k >= 0) return tr.v[static_cast<size_t>(k)];
  auto it = tr.v_init.find(k);
  return it == tr.v_init.end() ? 0.0 : it->second;
}

}  // namespace detail

/// Runs the greedy rule over a finite input. h must be strictly causal so
/// that (h*v)_n only touches v_k for k < n.
inline ModulatorTrace run_greedy(const SparseFilter& h, const std::vector<double>& y,
                                 const Alphabet& alphabet,
                                 std::map<std::int64_t, double> v_init = {}) {
  for (const auto& t : h.taps)
    if (t.position < 1) throw std::invalid_argument("run_greedy: filter must be strictly causal");

  ModulatorTrace tr;
  tr.y = y;
  tr.v_init = std::move(v_init);
  tr.q.resize(y.size());
  tr.v.resize(y.size());
  for (size_t n = 0; n < y.size(); ++n) {
    double conv = 0.0;
    for (const auto& t : h.taps)
      conv += t.coefficient * detail::state_at(tr, static_cast<std::int64_t>(n) - t.position);
    double s = conv + y[n];
    tr.q[n] = alphabet.nearest(s);
    tr.v[n] = s - tr.q[n];
  }
  return tr;
}

/// Re-evaluates the recursion against the stored outputs; the replay uses
/// the identical summation order, so agreement is bit-exact.
inline bool recheck_recursion(const SparseFilter& h, const ModulatorTrace& tr) {
  for (size_t n = 0; n < tr.v.size(); ++n) {
    double conv = 0.0;
    for (const auto& t : h.taps)
      conv += t.coefficient * detail::state_at(tr, static_cast<std::int64_t>(n) - t.position);
    if (tr.v[n] != conv + tr.y[n] - tr.q[n]) return false;
  }
  return true;
}

/// Canonical state u = g * v; satisfies Δ^m u = y - q and
/// ‖u‖∞ <= ‖g‖₁ ‖v‖∞.
inline std::vector<double> canonical_state(const std::vector<double>& g,
                                           const ModulatorTrace& tr) {
  if (g.empty()) throw std::invalid_argument("canonical_state: empty accumulated filter");
  std::vector<double> u(tr.v.size());
  for (size_t n = 0; n < tr.v.size(); ++n) {
    double acc = 0.0;
    for (size_t k = 0; k < g.size(); ++k)
      acc += g[k] * detail::state_at(tr, static_cast<std::int64_t>(n) - static_cast<std::int64_t>(k));
    u[n] = acc;
  }
  return u;
}

/// L - (‖h‖₁ + μ); nonnegative means the greedy scheme is guaranteed stable
/// for inputs bounded by μ.
inline double stability_margin(const FilterDesign& design, double mu, int L) {
  if (mu < 0.0) throw std::invalid_argument("stability_margin: mu must be >= 0");
  return L - (design.h_one_norm + mu);
}

}  // namespace sdm
