#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace sdm {

/// A real number stored as sign and natural log of magnitude, so that
/// products with thousands of factors never overflow or underflow.
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double log_mag = -std::numeric_limits<double>::infinity();

  static SignedLog from_value(double v) {
    if (v == 0.0) return {};
    return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

  SignedLog& operator*=(const SignedLog& o) {
    if (sign == 0 || o.sign == 0) {
      sign = 0;
      log_mag = -std::numeric_limits<double>::infinity();
    } else {
      sign *= o.sign;
      log_mag += o.log_mag;
    }
    return *this;
  }

  friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
};

/// Product accumulator in sign + log-magnitude form.
class LogProduct {
 public:
  void mul(double v) {
    if (v == 0.0) {
      zero_ = true;
    } else {
      if (v < 0.0) negatives_++;
      log_mag_ += std::log(std::abs(v));
    }
  }
  void div(double v) {
    if (v < 0.0) negatives_++;
    log_mag_ -= std::log(std::abs(v));
  }
  SignedLog result() const {
    if (zero_) return {};
    return {(negatives_ % 2 == 0) ? 1 : -1, log_mag_};
  }

 private:
  double log_mag_ = 0.0;
  long negatives_ = 0;
  bool zero_ = false;
};

/// log(sum_i exp(v_i)) for nonnegative-weight sums that may overflow.
inline double log_sum_exp(const std::vector<double>& logs) {
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  double m = logs[0];
  for (double v : logs)
    if (v > m) m = v;
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace sdm
