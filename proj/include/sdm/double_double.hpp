#pragma once

#include <cmath>

// Compensated double-double arithmetic (~31 significant digits). The m-fold
// cumulative sums behind the accumulated filter g condition like binomial
// sums of magnitude far above the result; plain doubles lose the vanishing
// tail around m ≈ 13.

namespace sdm {

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

namespace dd {

inline DD from(double x) { return {x, 0.0}; }

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  DD r = quick_two_sum(s.hi, s.lo + t.hi);
  return quick_two_sum(r.hi, r.lo + t.lo);
}

inline DD neg(DD a) { return {-a.hi, -a.lo}; }

inline DD sub(DD a, DD b) { return add(a, neg(b)); }

inline DD mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline DD div(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = sub(a, mul(b, from(q1)));
  double q2 = r.hi / b.hi;
  r = sub(r, mul(b, from(q2)));
  double q3 = r.hi / b.hi;
  return add(quick_two_sum(q1, q2), from(q3));
}

inline double to_double(DD a) { return a.hi + a.lo; }

}  // namespace dd
}  // namespace sdm
