#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "sdm/integer_filters.hpp"

using namespace sdm;

TEST_CASE("minimal subordinate sequence") {
  CHECK(minimal_subordinate_sequence(2, 1.5) == std::vector<std::int64_t>{1, 5});
  CHECK(minimal_subordinate_sequence(1, 1.5) == std::vector<std::int64_t>{1});
  CHECK_THROWS_AS(minimal_subordinate_sequence(0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(minimal_subordinate_sequence(3, 1.0), std::domain_error);

  // large-order limits: n_j -> 1 + sigma (j-1)^2 at integer sigma
  auto n = minimal_subordinate_sequence(2000, gamma_from_sigma(6.0));
  for (int j = 1; j <= 12; ++j)
    CHECK(n[j - 1] == 1 + 6 * static_cast<std::int64_t>(j - 1) * (j - 1));

  // below sigma = 5/4 the ceiling formula deviates: n_3 -> 8 rather than 9
  auto n_low = minimal_subordinate_sequence(1000, gamma_from_sigma(1.1));
  CHECK(n_low[2] == 8);
  CHECK(n_low[3] == 17);
}

TEST_CASE("sequence is subordinate and feasible") {
  for (double gamma : {1.5, gamma_from_sigma(6.0)}) {
    for (int m = 2; m <= 500; m = (m < 40 ? m + 1 : m * 2)) {
      auto sol = relaxed_minimizer(m, gamma);
      auto n = minimal_subordinate_sequence(m, gamma);
      std::vector<double> nx(n.begin() + 1, n.end());
      auto npt = ConstraintPoint::from_coordinates(nx);
      CHECK(is_subordinate(ConstraintPoint::from_coordinates(sol.x), npt));
      CHECK(constraint_f(npt) <= gamma * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("coefficients") {
  auto d1 = filter_coefficients({1});
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].value() == 1.0);

  auto d = filter_coefficients({1, 5});
  CHECK(d[0].value() == Catch::Approx(1.25).epsilon(1e-14));
  CHECK(d[1].value() == Catch::Approx(-0.25).epsilon(1e-14));

  CHECK_THROWS_AS(filter_coefficients({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(filter_coefficients({0, 2}), std::invalid_argument);

  for (int m : {3, 7, 12, 20}) {
    auto design = design_filter(m, 1.5);
    double sum = 0.0;
    for (size_t j = 0; j < design.d.size(); ++j) {
      CHECK(design.d[j].sign == ((j % 2) ? -1 : 1));
      sum += design.d[j].value();
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("norm identity between coefficients and constraint functional") {
  for (double gamma : {1.5, gamma_from_sigma(6.0)})
    for (int m = 2; m <= 60; m += 7) {
      auto design = design_filter(m, gamma);
      std::vector<double> nx(design.n.begin() + 1, design.n.end());
      double f = constraint_f(ConstraintPoint::from_coordinates(nx));
      CHECK(design.h_one_norm == Catch::Approx(f).epsilon(1e-9));
    }
}

TEST_CASE("sparse filter from design") {
  auto design = design_filter(2, 1.5);
  auto h = h_from_design(design);
  REQUIRE(h.taps.size() == 2);
  CHECK(h.taps[0].position == 1);
  CHECK(h.taps[0].coefficient == Catch::Approx(1.25));
  CHECK(h.taps[1].position == 5);
  CHECK(h.taps[1].coefficient == Catch::Approx(-0.25));
  CHECK(h.one_norm() == Catch::Approx(1.5).epsilon(1e-12));
  CHECK(h.one_norm() == Catch::Approx(design.h_one_norm).epsilon(1e-12));

  auto d1 = design_filter(1, 1.5);
  auto h1 = h_from_design(d1);
  REQUIRE(h1.taps.size() == 1);
  CHECK(h1.taps[0].position == 1);
  CHECK(h1.taps[0].coefficient == 1.0);
}

TEST_CASE("accumulated filter g") {
  // m = 1, h = delta^(1): g = delta^(0)
  auto g1 = g_from_h(1, h_from_design(design_filter(1, 1.5)));
  REQUIRE(g1.size() == 1);
  CHECK(g1[0] == 1.0);

  auto g2 = g_from_h(2, h_from_design(design_filter(2, 1.5)));
  double l1 = 0.0;
  for (double v : g2) l1 += std::abs(v);
  CHECK(l1 == Catch::Approx(2.5).epsilon(1e-12));

  for (double gamma : {1.5, gamma_from_sigma(6.0)})
    for (int m = 1; m <= 20; ++m) {
      auto design = design_filter(m, gamma);
      auto g = g_from_design(design);
      CHECK(static_cast<std::int64_t>(g.size()) == design.n.back() - m + 1);
      double sum = 0.0;
      for (double v : g) sum += std::abs(v);
      CHECK(sum == Catch::Approx(std::exp(design.log_g1)).epsilon(1e-8));
    }

  // corrupting a tap violates the moment conditions -> nonvanishing tail
  auto bad = h_from_design(design_filter(3, 1.5));
  bad.taps[1].coefficient *= 1.01;
  CHECK_THROWS_AS(g_from_h(3, bad), std::runtime_error);
  CHECK_THROWS_AS(g_from_h(21, h_from_design(design_filter(2, 1.5))),
                  std::invalid_argument);
  CHECK_THROWS_AS(g_from_design(design_filter(21, 1.5)), std::invalid_argument);

  // the double-tap path agrees with the exact-support path while it is
  // conditioned well enough to certify its own tail (tap rounding caps it
  // near m = 10 at this gamma)
  for (int m = 1; m <= 10; ++m) {
    auto design = design_filter(m, 1.5);
    auto ga = g_from_h(m, h_from_design(design));
    auto gb = g_from_design(design);
    REQUIRE(ga.size() == gb.size());
    double worst = 0.0;
    for (size_t k = 0; k < ga.size(); ++k) worst = std::max(worst, std::abs(ga[k] - gb[k]));
    CHECK(worst < 1e-9 * std::exp(design.log_g1));
  }
}

TEST_CASE("w sequence and asymptotic positions") {
  CHECK(w_sequence(6.0, 4) == std::vector<double>{7.0, 25.0, 55.0});
  CHECK(w_sequence(1.0, 3) == std::vector<double>{2.0, 5.0});
  CHECK_THROWS_AS(w_sequence(0.0, 4), std::invalid_argument);

  CHECK(asymptotic_position(6.0, 5) == 97);
  CHECK(asymptotic_position(6.0, 1) == 1);
  CHECK(asymptotic_position(1.3, 3) == 9);
  CHECK_THROWS_AS(asymptotic_position(1.1, 3), std::domain_error);
  CHECK_THROWS_AS(asymptotic_position(1.25, 2), std::domain_error);
}

TEST_CASE("optimality ratio") {
  CHECK(optimality_ratio(2, 1.5) == 1.0);

  // integer sigma: asymptotically optimal
  CHECK(optimality_ratio(500, gamma_from_sigma(6.0)) <= 1.05);

  // noninteger sigma: bounded away from 1 (the n_2 mismatch alone forces
  // a persistent (1+ceil(sigma) j^2)/(1+sigma j^2)-type excess)
  double r = optimality_ratio(500, gamma_from_sigma(6.5));
  CHECK(r > 1.02);
  CHECK(r < 1.09);
}

namespace {

// Depth-first enumeration of every integer sequence subordinate to x with
// k_j <= n_j + 2; reports the componentwise-minimality status against n.
bool no_smaller_subordinate(const std::vector<double>& x, const std::vector<std::int64_t>& n) {
  size_t len = x.size();  // positions k_2..k_m, compared against x_1..x_{m-1}
  std::vector<std::int64_t> k(len);
  bool ok = true;
  std::function<void(size_t)> dfs = [&](size_t depth) {
    if (!ok) return;
    if (depth == len) return;
    // subordinacy: k_{depth}/x_{depth} >= prev ratio (>= 1 at depth 0)
    double prev_num = depth == 0 ? 1.0 : static_cast<double>(k[depth - 1]);
    double prev_den = depth == 0 ? 1.0 : x[depth - 1];
    std::int64_t lo = static_cast<std::int64_t>(std::ceil(x[depth] * prev_num / prev_den - 1e-9));
    for (std::int64_t v = lo; v <= n[depth + 1] + 2; ++v) {
      if (v < n[depth + 1]) {
        ok = false;  // found a subordinate sequence smaller in one slot
        return;
      }
      k[depth] = v;
      dfs(depth + 1);
    }
  };
  dfs(0);
  return ok;
}

}  // namespace

TEST_CASE("no componentwise smaller subordinate integer sequence exists") {
  const double gamma = 1.5;
  for (int m = 2; m <= 12; ++m) {
    auto sol = relaxed_minimizer(m, gamma);
    auto n = minimal_subordinate_sequence(m, gamma);
    CHECK(no_smaller_subordinate(sol.x, n));
  }
}

TEST_CASE("eta limit of the integer construction at m = 2000") {
  auto n = minimal_subordinate_sequence(2000, gamma_from_sigma(6.0));
  double log_eta_n = 0.0;
  for (size_t j = 1; j < n.size(); ++j) log_eta_n += std::log(static_cast<double>(n[j]));
  const double pi = std::acos(-1.0);
  double factor = std::exp(2.0 * std::log(2000.0) - log_eta_n / 2000.0);
  CHECK(std::abs(factor - pi * pi / 6.0) < 0.03 * pi * pi / 6.0);
}

TEST_CASE("design document serialization") {
  auto design = design_filter(2, 1.5);
  std::string json = design_to_json(design);
  CHECK(json.find("\"m\": 2") != std::string::npos);
  CHECK(json.find("\"n\": [1, 5]") != std::string::npos);
  CHECK(json.find("\"d\": [1.25, -0.25]") != std::string::npos);
  CHECK(json.find("\"h_one_norm\": 1.5") != std::string::npos);
}
