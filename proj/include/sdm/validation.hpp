#pragma once

// Invariant suites behind the `validate` command: each group re-derives a
// family of identities or guarantees numerically and reports pass/fail.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sdm/chebyshev.hpp"
#include "sdm/integer_filters.hpp"
#include "sdm/modulator.hpp"
#include "sdm/parallel.hpp"
#include "sdm/rate_analysis.hpp"
#include "sdm/reconstruction.hpp"
#include "sdm/relaxed_solver.hpp"
#include "sdm/rng.hpp"

namespace sdm {

struct CheckResult {
  std::string group;
  bool pass = false;
  std::string detail;
};

namespace validation {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

inline CheckResult chebyshev_identities() {
  double worst_zero = 0.0, worst_osc = 0.0, worst_deriv = 0.0, worst_prod = 0.0;
  Rng rng(101);
  for (int m = 2; m <= 30; ++m) {
    auto nodes = second_kind_zeros(m);
    for (double z : nodes.z) worst_zero = std::max(worst_zero, std::abs(cheb_u(m - 1, z)));
    if (m <= 25) {
      std::vector<double> pts{-1.0};
      pts.insert(pts.end(), nodes.z.begin(), nodes.z.end());
      pts.push_back(1.0);
      for (int j = 0; j <= m; ++j)
        worst_osc = std::max(worst_osc,
                             std::abs(cheb_t(m, pts[j]) - ((m - j) % 2 ? -1.0 : 1.0)));
      auto prod = critical_point_products(m);
      double lead = m / std::pow(2.0, m - 1);
      for (int k = 0; k < m; ++k) {
        double want = k == 0 ? (m % 2 ? lead : -lead)
                             : ((m - 1 - k) % 2 ? -1.0 : 1.0) * lead / (1.0 - nodes.z[k - 1]);
        worst_prod = std::max(worst_prod, std::abs(prod[k] - want) / std::abs(want));
      }
    }
    for (int r = 0; r < 50; ++r) {
      double x = rng.uniform(-0.99, 0.99);
      double fd = (cheb_t(m, x + 1e-6) - cheb_t(m, x - 1e-6)) / 2e-6;
      double exact = m * cheb_u(m - 1, x);
      worst_deriv =
          std::max(worst_deriv, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  bool pass = worst_zero < 1e-10 && worst_osc < 1e-12 && worst_deriv < 1e-5 &&
              worst_prod < 1e-10;
  return {"chebyshev", pass,
          "zero=" + fmt(worst_zero) + " osc=" + fmt(worst_osc) + " deriv=" + fmt(worst_deriv) +
              " lemma_a2=" + fmt(worst_prod)};
}

inline CheckResult relaxed_optimum() {
  double worst_active = 0.0;
  for (int m = 2; m <= 60; ++m)
    for (double gamma : {1.2, 1.5, gamma_from_sigma(6.0)}) {
      auto sol = relaxed_minimizer(m, gamma);
      double f = constraint_f(ConstraintPoint::from_coordinates(sol.x));
      worst_active = std::max(worst_active, std::abs(f - gamma) / gamma);
    }
  bool brackets = true;
  const double gamma = gamma_from_sigma(6.0);
  const double c = std::acosh(gamma);
  for (int m = 2; m <= 2000; ++m) {
    auto sol = relaxed_minimizer(m, gamma);
    brackets = brackets && sol.K >= 2.0 * (m - 1.0) * (m - 1.0) / (c * c) - 1.0 &&
               sol.K <= 2.0 * m * m / (c * c);
    for (int j = 1; j < m; j += std::max(1, m / 17))
      brackets = brackets && sol.x[j - 1] <= 1.0 + 6.0 * j * j;
  }
  const double pi = std::acos(-1.0);
  auto sol = relaxed_minimizer(2000, gamma);
  double limit = std::exp(sol.log_eta_min / 2000.0 - 2.0 * std::log(2000.0));
  bool limit_ok = std::abs(limit - 6.0 / (pi * pi)) < 0.02 * 6.0 / (pi * pi);
  bool pass = worst_active < 1e-8 && brackets && limit_ok;
  return {"relaxed_optimum", pass,
          "activity=" + fmt(worst_active) + " brackets=" + (brackets ? "ok" : "BAD") +
              " limit=" + fmt(limit)};
}

inline CheckResult linear_algebra() {
  Rng rng(202);
  double worst_kernel = 0.0, worst_residue = 0.0, worst_jordan = 0.0;
  bool rank_ok = true;
  for (int m = 2; m <= 12; ++m) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> y;
      while (static_cast<int>(y.size()) < m - 1) {
        double v = rng.uniform(1.5, 50.0);
        bool ok = std::abs(v - 1.0) >= 0.1;
        for (double u : y) ok = ok && std::abs(v - u) >= 0.1;
        if (ok) y.push_back(v);
      }
      std::sort(y.begin(), y.end());

      Eigen::MatrixXd B = build_b_matrix(y);
      double scale = B.cwiseAbs().maxCoeff();
      worst_kernel = std::max(worst_kernel,
                              (B * Eigen::VectorXd::Ones(m)).cwiseAbs().maxCoeff() / scale);

      auto pv = char_antiderivative_values(y);
      Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(pv.data(), pv.size());
      double target = ((m % 2) ? -1.0 : 1.0) / m;
      for (int k = 0; k < m - 1; ++k) {
        double row = std::abs(target), err = -target;
        for (int j = 0; j < m; ++j) {
          row = std::max(row, std::abs(B(k, j) * p[j]));
          err += B(k, j) * p[j];
        }
        worst_residue = std::max(worst_residue, std::abs(err) / (row * m));
      }

      worst_jordan = std::max(worst_jordan, jordan_residual(y));
      Eigen::VectorXd sv = btilde_singular_values(y);
      rank_ok = rank_ok && sv[sv.size() - 1] < 1e-8 * sv[0];
    }
  }
  bool pass = worst_kernel < 1e-9 && worst_residue < 1e-9 && worst_jordan < 1e-8 && rank_ok;
  return {"linear_algebra", pass,
          "kernel=" + fmt(worst_kernel) + " residue=" + fmt(worst_residue) +
              " jordan=" + fmt(worst_jordan) + " rank=" + (rank_ok ? "ok" : "BAD")};
}

inline CheckResult integer_construction() {
  bool ok = minimal_subordinate_sequence(2, 1.5) == std::vector<std::int64_t>{1, 5};

  auto n6 = minimal_subordinate_sequence(2000, gamma_from_sigma(6.0));
  for (int j = 2; j <= 10; ++j)
    ok = ok && n6[j - 1] == 1 + 6 * static_cast<std::int64_t>(j - 1) * (j - 1);
  auto n11 = minimal_subordinate_sequence(1000, gamma_from_sigma(1.1));
  ok = ok && n11[2] == 8 && n11[3] == 17;

  double worst_feas = 0.0;
  for (double gamma : {1.5, gamma_from_sigma(6.0)})
    for (int m = 2; m <= 200; m = (m < 24 ? m + 1 : m * 2)) {
      auto n = minimal_subordinate_sequence(m, gamma);
      std::vector<double> nx(n.begin() + 1, n.end());
      double f = constraint_f(ConstraintPoint::from_coordinates(nx));
      worst_feas = std::max(worst_feas, (f - gamma) / gamma);
    }
  ok = ok && worst_feas <= 1e-12;

  double worst_g = 0.0;
  for (double gamma : {1.5, gamma_from_sigma(6.0)})
    for (int m = 1; m <= 20; ++m) {
      auto design = design_filter(m, gamma);
      auto g = g_from_design(design);
      double l1 = 0.0;
      for (double v : g) l1 += std::abs(v);
      worst_g = std::max(worst_g, std::abs(l1 - std::exp(design.log_g1)) /
                                      std::exp(design.log_g1));
    }
  ok = ok && worst_g < 1e-8;
  return {"integer_filters", ok, "feasibility_excess=" + fmt(worst_feas) + " g_l1=" + fmt(worst_g)};
}

inline CheckResult modulator_stability(int steps, std::uint64_t seed) {
  Rng rng(seed);
  double worst_v = 0.0;
  bool alphabet_ok = true, replay_ok = true;
  for (int rep = 0; rep < 50; ++rep) {
    int L = 2 + static_cast<int>(rng.next() % 4);
    int m = 1 + static_cast<int>(rng.next() % 8);
    double gamma = 1.0 + (L - 1.0 - 1e-6) * rng.uniform(0.05, 1.0);
    auto design = design_filter(m, gamma);
    double margin = stability_margin(design, 0.0, L);
    double mu = margin * rng.uniform(0.1, 0.999);
    if (mu <= 0.0) continue;
    std::vector<double> y(steps);
    for (auto& v : y) v = rng.uniform(-mu, mu);
    auto h = h_from_design(design);
    auto tr = run_greedy(h, y, Alphabet(L));
    worst_v = std::max(worst_v, tr.max_abs_v());
    Alphabet a(L);
    for (double q : tr.q) alphabet_ok = alphabet_ok && a.contains(q);
    replay_ok = replay_ok && recheck_recursion(h, tr);
  }
  // canonical state of an m = 2 run solves the second-difference equation
  auto design = design_filter(2, 1.5);
  auto h = h_from_design(design);
  std::vector<double> y(10000, 0.3);
  auto tr = run_greedy(h, y, Alphabet(2));
  auto g = g_from_design(design);
  auto u = canonical_state(g, tr);
  double worst_d2 = 0.0;
  for (size_t n = g.size() + 2; n < u.size(); ++n)
    worst_d2 = std::max(worst_d2,
                        std::abs(u[n] - 2 * u[n - 1] + u[n - 2] - (y[n] - tr.q[n])));
  bool pass = worst_v <= 1.0 && alphabet_ok && replay_ok && worst_d2 < 1e-8;
  return {"modulator", pass, "max|v|=" + fmt(worst_v) + " d2_residual=" + fmt(worst_d2)};
}

inline CheckResult rate_table() {
  const double bits[5] = {1.0, 1.585, 2.0, 2.322, 3.585};
  const int sig[5] = {6, 4, 3, 2, 1};
  const double input[5] = {0.058, 0.490, 0.851, 0.335, 0.408};
  const double r0[5] = {0.102, 0.153, 0.204, 0.306, 0.613};
  const double eff[5] = {0.102, 0.097, 0.102, 0.132, 0.171};
  auto rows = multilevel_table({2, 3, 4, 5, 12});
  bool ok = true;
  for (int i = 0; i < 5; ++i)
    ok = ok && std::abs(rows[i].bits_per_sample - bits[i]) < 1e-3 && rows[i].sigma == sig[i] &&
         std::abs(rows[i].max_input - input[i]) < 1e-3 && std::abs(rows[i].r0 - r0[i]) < 1e-3 &&
         std::abs(rows[i].efficiency - eff[i]) < 1e-3 && rows[i].efficiency < 1.0;
  return {"rate_table", ok, ok ? "all 25 cells within 1e-3" : "mismatch"};
}

inline CheckResult kernel_admissibility() {
  Kernel k(1.0, 2.0, 1.0 / 4096.0, 150.0);
  const double h = 1.0 / 1024.0;
  auto n = static_cast<size_t>(std::floor(k.t_max() / h));
  if (n % 2 == 1) --n;
  std::vector<double> wphi(n + 1);
  for (size_t i = 0; i <= n; ++i) {
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    wphi[i] = w * (h / 3.0) * k.value_exact(i * h);
  }
  const double two_pi = 2.0 * std::acos(-1.0);
  auto transform = [&](double xi) {
    std::complex<double> rot(1.0, 0.0), step = std::polar(1.0, two_pi * xi * h);
    double acc = 0.0;
    for (double w : wphi) {
      acc += w * rot.real();
      rot *= step;
    }
    return 2.0 * acc;
  };
  std::vector<double> errs(10000);
  parallel_for(10000, [&](std::int64_t i) {
    if (i < 5000) {
      double xi = static_cast<double>(i) / 4999;
      errs[i] = std::abs(transform(xi) - 1.0);
    } else {
      double xi = 3.0 + 3.0 * static_cast<double>(i - 5000) / 4999;
      errs[i] = std::abs(transform(xi));
    }
  });
  double worst = *std::max_element(errs.begin(), errs.end());
  return {"kernel_admissibility", worst < 1e-8, "band_error=" + fmt(worst)};
}

inline std::vector<CheckResult> run_all(int stability_steps, std::uint64_t seed) {
  return {chebyshev_identities(), relaxed_optimum(),       linear_algebra(),
          integer_construction(), modulator_stability(stability_steps, seed),
          rate_table(),           kernel_admissibility()};
}

}  // namespace validation
}  // namespace sdm
