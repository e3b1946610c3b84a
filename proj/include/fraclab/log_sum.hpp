#pragma once

#include <cmath>
#include <limits>

namespace fraclab {

/// Streaming log-sum-exp: accumulates log(sum_k exp(x_k)) with a running
/// max-shift, so p-th powers with p in the hundreds never overflow.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term <= max_) {
      scaled_ += std::exp(log_term - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  void merge(const LogSum& other) {
    if (other.empty()) return;
    if (empty()) {
      *this = other;
      return;
    }
    if (other.max_ <= max_) {
      scaled_ += other.scaled_ * std::exp(other.max_ - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - other.max_) + other.scaled_;
      max_ = other.max_;
    }
  }

  bool empty() const { return max_ == -std::numeric_limits<double>::infinity(); }

  /// log of the accumulated sum; -inf for an empty sum.
  double value() const { return empty() ? max_ : max_ + std::log(scaled_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

/// Signed sum kept as two log-domain halves: value = exp(pos) - exp(neg).
struct SignedLogSum {
  LogSum positive;
  LogSum negative;

  void add(double log_magnitude, bool negative_sign) {
    (negative_sign ? negative : positive).add(log_magnitude);
  }
  void merge(const SignedLogSum& other) {
    positive.merge(other.positive);
    negative.merge(other.negative);
  }
  double log_positive() const { return positive.value(); }
  double log_negative() const { return negative.value(); }
  double value() const { return std::exp(positive.value()) - std::exp(negative.value()); }
};

}  // namespace fraclab
