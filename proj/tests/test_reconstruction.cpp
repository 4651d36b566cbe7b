#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "sdm/modulator.hpp"
#include "sdm/parallel.hpp"
#include "sdm/rate_analysis.hpp"
#include "sdm/reconstruction.hpp"

using namespace sdm;

namespace {

// 8-point Gauss-Legendre reference for the blend moment integrals
const double kGlX[4] = {0.18343464249564980, 0.52553240991632899, 0.79666647741362674,
                        0.96028985649753623};
const double kGlW[4] = {0.36268378337836198, 0.31370664587788729, 0.22238103445337447,
                        0.10122853629037626};

std::complex<double> moment_quadrature(int k, double a) {
  int nseg = 1 + static_cast<int>(std::abs(a) / 3.0);
  std::complex<double> acc = 0.0;
  for (int s = 0; s < nseg; ++s) {
    double lo = static_cast<double>(s) / nseg, hi = static_cast<double>(s + 1) / nseg;
    double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    for (int i = 0; i < 4; ++i)
      for (double sgn : {-1.0, 1.0}) {
        double u = c + sgn * hw * kGlX[i];
        acc += hw * kGlW[i] * std::pow(u, k) * std::polar(1.0, a * u);
      }
  }
  return acc;
}

// phi sampled on a uniform grid with Simpson weights; cosine transforms are
// evaluated with a rotation recurrence along the grid.
struct TransformTable {
  double h;
  std::vector<double> wphi;  // simpson weight times phi value

  TransformTable(const Kernel& k, double h_in) : h(h_in) {
    auto n = static_cast<size_t>(std::floor(k.t_max() / h));
    if (n % 2 == 1) --n;
    wphi.resize(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      wphi[i] = w * (h / 3.0) * k.value_exact(i * h);
    }
  }

  double transform(double xi) const {
    const double two_pi = 2.0 * std::acos(-1.0);
    std::complex<double> rot(1.0, 0.0);
    std::complex<double> step = std::polar(1.0, two_pi * xi * h);
    double acc = 0.0;
    for (double w : wphi) {
      acc += w * rot.real();
      rot *= step;
    }
    return 2.0 * acc;
  }
};

}  // namespace

TEST_CASE("signal specification") {
  auto spec = SignalSpec::make(1.0, {{0.25, 0.5, 0.0}}, 0.5);
  CHECK(eval_signal(spec, 0.0) == 0.5);
  CHECK(eval_signal(SignalSpec::make(1.0, {}, 0.5), 3.7) == 0.0);

  double peak = 0.0;
  auto two = SignalSpec::make(1.0, {{0.21, 0.3, 0.4}, {0.55, 0.2, 2.0}}, 0.5);
  for (int i = 0; i < 5000; ++i)
    peak = std::max(peak, std::abs(eval_signal(two, i * 0.037)));
  CHECK(peak <= 0.5);

  CHECK_THROWS_AS(SignalSpec::make(1.0, {{1.0, 0.1, 0.0}}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SignalSpec::make(1.0, {{0.5, 0.6, 0.0}}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SignalSpec::make(1.0, {{0.5, 0.6, 0.0}}, 1.2), std::invalid_argument);
}

TEST_CASE("blend moments match quadrature") {
  for (double a : {0.0, 1e-6, 0.3, 0.499, 0.501, 2.0, 17.0, 300.0, 1885.0}) {
    std::complex<double> got[6];
    detail::blend_moments(a, got);
    for (int k = 0; k < 6; ++k) {
      auto want = moment_quadrature(k, a);
      // 5e-12 absolute: the composite-GL reference itself carries ~1e-12
      // once several hundred oscillation segments accumulate
      CHECK(std::abs(got[k] - want) < 5e-12);
    }
  }
}

TEST_CASE("kernel construction basics") {
  Kernel k(1.0, 2.0, 1.0 / 8192.0, 30.0);
  CHECK(k.value_exact(0.0) == Catch::Approx(1.0 * (2.0 + 2.0)).epsilon(1e-12));
  CHECK(k.phi_hat(0.0) == 1.0);
  CHECK(k.phi_hat(1.0) == 1.0);
  CHECK(k.phi_hat(3.0) == 0.0);
  CHECK(k.phi_hat(2.0) == Catch::Approx(0.5));  // blend midpoint
  CHECK(k(31.0) == 0.0);

  // interpolation against direct evaluation
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double t = 30.0 * i / 20000.0 + 1.3e-5;
    worst = std::max(worst, std::abs(k(t) - k.value_exact(t)));
  }
  CHECK(worst < 1e-9);

  CHECK_THROWS_AS(Kernel(1.0, -0.1, 1e-3, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(design_kernel(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("transform is flat on the band and vanishes past the stop edge") {
  Kernel k(1.0, 2.0, 1.0 / 4096.0, 150.0);
  TransformTable table(k, 1.0 / 1024.0);

  // integral of phi equals the transform at zero frequency
  CHECK(std::abs(table.transform(0.0) - 1.0) < 1e-8);

  std::vector<double> flat_err(5000), stop_err(5000);
  parallel_for(5000, [&](std::int64_t i) {
    double xi_flat = 1.0 * static_cast<double>(i) / 4999;
    flat_err[i] = std::abs(table.transform(xi_flat) - 1.0);
    double xi_stop = 3.0 + 3.0 * static_cast<double>(i) / 4999;
    stop_err[i] = std::abs(table.transform(xi_stop));
  });
  double worst_flat = 0.0, worst_stop = 0.0;
  for (int i = 0; i < 5000; ++i) {
    worst_flat = std::max(worst_flat, flat_err[i]);
    worst_stop = std::max(worst_stop, stop_err[i]);
  }
  CHECK(worst_flat < 1e-8);
  CHECK(worst_stop < 1e-8);
}

TEST_CASE("decay certificate holds where it is extrapolated from") {
  Kernel k = design_kernel(1.0, 2.0, 1.0 / 8192.0, 40.0);
  double c = k.decay_constant();
  bool ok = true;
  for (int i = 0; i <= 30000; ++i) {
    double t = 8.0 + (40.0 - 8.0) * i / 30000.0;
    ok = ok && std::abs(k.value_exact(t)) <= c / (1.0 + t * t * t * t);
  }
  CHECK(ok);
  CHECK(k.tail_l1(40.0) < 2e-7);
  CHECK(k.tail_l1(40.0) > 0.0);
}

TEST_CASE("L1 norm is invariant under the bandwidth scaling") {
  double ref = 0.0;
  for (double omega : {0.5, 1.0, 2.0}) {
    Kernel k(omega, 2.0, 1.0 / (8192.0 * omega), 42.0 / omega);
    if (ref == 0.0)
      ref = k.l1_norm();
    else
      CHECK(std::abs(k.l1_norm() - ref) < 1e-6);
  }
}

TEST_CASE("reconstruction linearity") {
  Kernel k = design_kernel(1.0, 2.0, 1.0 / 4096.0, 20.0);
  double tau = 1.0 / 64.0;
  std::vector<double> zeros(4000, 0.0);
  CHECK(reconstruct(zeros, tau, k, 31.0) == 0.0);

  std::vector<double> spike(4000, 0.0);
  spike[2000] = 1.0;
  for (double t : {30.0, 31.25, 33.7}) {
    double want = tau * k(t - 2000 * tau);
    CHECK(reconstruct(spike, tau, k, t) == Catch::Approx(want).margin(1e-15));
  }

  // admissibility requires (1+eps) * omega <= 1/(2 tau)
  CHECK_THROWS_AS(reconstruct(zeros, 0.5, k, 10.0), std::invalid_argument);
}

TEST_CASE("exact samples reconstruct the signal") {
  auto spec = SignalSpec::make(1.0, {{0.31, 0.28, 0.7}, {0.67, 0.22, 2.1}}, 0.5);
  Kernel k = design_kernel(1.0, 2.0, 1.0 / 16384.0, 42.0);
  double tau = 1.0 / 64.0;  // lambda = 32
  size_t N = static_cast<size_t>(std::ceil(96.0 / tau));
  std::vector<double> q(N);
  for (size_t n = 0; n < N; ++n) q[n] = eval_signal(spec, n * tau);
  auto res = sup_error(spec, q, tau, k, 44.0, 52.0, 400);
  CHECK(res.total() < 1e-6);
}

TEST_CASE("sup_error window validation") {
  auto spec = SignalSpec::make(1.0, {{0.31, 0.3, 0.0}}, 0.3);
  Kernel k = design_kernel(1.0, 2.0, 1.0 / 4096.0, 20.0);
  double tau = 1.0 / 64.0;
  std::vector<double> q(3000, 0.0);
  CHECK_THROWS_AS(sup_error(spec, q, tau, k, 5.0, 15.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(sup_error(spec, q, tau, k, 25.0, 45.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(sup_error(spec, q, tau, k, 30.0, 30.0, 100), std::invalid_argument);
  auto res = sup_error(spec, q, tau, k, 21.0, 25.0, 100);
  CHECK(res.max_deviation <= 0.3);
  CHECK(res.truncation_budget == 0.0);  // nothing dropped from an all-zero stream

  std::vector<double> ones(3000, 1.0);
  auto res1 = sup_error(spec, ones, tau, k, 21.0, 25.0, 100);
  CHECK(res1.truncation_budget > 0.0);
  CHECK(res1.total() == res1.max_deviation + res1.truncation_budget);
}

TEST_CASE("first-order error halves when the rate doubles") {
  // near-DC tones keep the first-order sawtooth from averaging out
  auto spec = SignalSpec::make(1.0, {{0.003, 0.17, 0.0}, {0.0071, 0.13, 0.5}}, 0.3);
  Kernel k = design_kernel(1.0, 2.0, 1.0 / 32768.0, 42.0);
  auto design = design_filter(1, 1.5);
  auto h = h_from_design(design);

  double errs[2];
  int idx = 0;
  for (double lambda : {64.0, 128.0}) {
    double tau = 1.0 / (2.0 * lambda);
    size_t N = static_cast<size_t>(std::ceil(94.0 / tau));
    std::vector<double> y(N);
    for (size_t n = 0; n < N; ++n) y[n] = eval_signal(spec, n * tau);
    auto tr = run_greedy(h, y, Alphabet(2));
    errs[idx++] = sup_error(spec, tr.q, tau, k, 43.0, 51.0, 100).total();
  }
  double ratio = errs[0] / errs[1];
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.5);

  // the worst-case bound dominates the measurement
  double bound = std::exp2(
      log2_error_bound(1, 128.0, design.log_g1, std::log(k.l1_norm()), k.epsilon()));
  CHECK(errs[1] <= bound);
}
