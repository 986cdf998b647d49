#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace zrp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(exp(a) - exp(b)) for a >= b.
inline double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

// log(1 + exp(x))
inline double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) return kNegInf;
  const double top = *std::max_element(terms.begin(), terms.end());
  if (top == kNegInf || top == kInf) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

// Sliding-window log-sum-exp over a FIFO of log-values (two-stack queue).
// Every element is combined O(1) times and nothing is ever subtracted, so the
// window sum keeps full relative precision even when the departing element
// dominated the window.
class LogWindowSum {
 public:
  void push(double x) {
    back_.push_back(x);
    back_total_ = log_add(back_total_, x);
  }

  void pop() {
    if (front_.empty()) {
      // Move back stack into front stack, storing suffix aggregates.
      front_.resize(back_.size());
      double acc = kNegInf;
      for (std::size_t i = back_.size(); i-- > 0;) {
        acc = log_add(acc, back_[i]);
        front_[back_.size() - 1 - i] = acc;
      }
      back_.clear();
      back_total_ = kNegInf;
    }
    front_.pop_back();
  }

  [[nodiscard]] double total() const {
    return front_.empty() ? back_total_ : log_add(front_.back(), back_total_);
  }

  [[nodiscard]] std::size_t size() const { return front_.size() + back_.size(); }

  void clear() {
    front_.clear();
    back_.clear();
    back_total_ = kNegInf;
  }

 private:
  std::vector<double> front_;  // suffix sums, oldest element on top (back())
  std::vector<double> back_;
  double back_total_ = kNegInf;
};

}  // namespace zrp
