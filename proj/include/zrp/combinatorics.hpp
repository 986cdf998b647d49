#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zrp/logspace.hpp"

namespace zrp {

/// Entropy of unconstrained compositions, (1+rho) log(1+rho) - rho log rho; chi(0) = 0.
double chi(double rho);

double log_binomial(double n, double k);

/// log binom(N + L - 1, L - 1): number of ways to put N particles on L sites.
double log_count_compositions(std::size_t L, std::uint64_t N);

/// Table of log |X^0_{l,n}|, compositions of n into l parts each at most R,
/// for 0 <= l <= L and 0 <= n <= N_max. Built row by row in O(L * N_max).
class BoundedCounts {
 public:
  BoundedCounts() = default;
  BoundedCounts(std::size_t L, std::size_t N_max, std::size_t R);

  [[nodiscard]] double log_count(std::size_t l, std::size_t n) const {
    return n > N_max_ ? kNegInf : table_[l * (N_max_ + 1) + n];
  }
  [[nodiscard]] std::size_t L() const { return L_; }
  [[nodiscard]] std::size_t N_max() const { return N_max_; }
  [[nodiscard]] std::size_t R() const { return R_; }

 private:
  std::size_t L_ = 0;
  std::size_t N_max_ = 0;
  std::size_t R_ = 0;
  std::vector<double> table_;
};

/// log |X^0_{L,N}|; -infinity when N > L * R.
double log_count_bounded(std::size_t L, std::size_t N, std::size_t R);

}  // namespace zrp
