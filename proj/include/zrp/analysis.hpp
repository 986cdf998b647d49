#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zrp/kmc.hpp"
#include "zrp/rate_model.hpp"

namespace zrp {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept (needs at least 2 points).
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Kolmogorov-Smirnov distance between the sample and Exp(1).
double ks_exponential(std::vector<double> sample);

/// Normalized lifetimes tau / mean(tau).
std::vector<double> normalize_by_mean(const std::vector<double>& tau);

struct ExponentFit {
  LinearFit fit;
  std::vector<std::size_t> used_L;
  bool dropped_smallest = false;
};

enum class Branch { kFluid, kCond };

/// Fit log(mean tau) against L. The smallest L is dropped when more than 20%
/// of its replicas were censored; L values with no uncensored replica are
/// skipped. Throws InsufficientData with fewer than 3 points left.
ExponentFit fit_lifetime_exponent(const std::vector<LifetimeRecord>& records, Branch branch);

struct BatchReport {
  std::vector<double> means;        // one sample mean per batch
  std::size_t batches_exceeding_R = 0;
  std::uint64_t max_occupation = 0;
  double phi = 0.0;
  double target = 0.0;              // min(rho, rho_c)
  double max_deviation = 0.0;       // max |mean - target|
  double tail_bound = 0.0;          // L (c1/c0)^{R/2}
};

/// Batch means of L iid marginals of nu_{phi_R(rho), R}.
BatchReport lln_batches(std::size_t L, std::size_t R, double rho, const RateModel& model,
                        std::size_t batches, std::uint64_t seed);

}  // namespace zrp
