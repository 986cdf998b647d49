#include "zrp/combinatorics.hpp"

#include <cmath>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

double chi(double rho) {
  if (!(rho >= 0.0)) throw DomainError("chi requires rho >= 0");
  if (rho == 0.0) return 0.0;
  return (1.0 + rho) * std::log1p(rho) - rho * std::log(rho);
}

double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) return kNegInf;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_count_compositions(std::size_t L, std::uint64_t N) {
  if (L == 0) throw DomainError("log_count_compositions requires L >= 1");
  return log_binomial(static_cast<double>(N) + static_cast<double>(L) - 1.0,
                      static_cast<double>(L) - 1.0);
}

BoundedCounts::BoundedCounts(std::size_t L, std::size_t N_max, std::size_t R)
    : L_(L), N_max_(N_max), R_(R), table_((L + 1) * (N_max + 1), kNegInf) {
  const std::size_t width = N_max + 1;
  table_[0] = 0.0;  // the empty lattice holds exactly one (empty) configuration
  LogWindowSum window;
  for (std::size_t l = 1; l <= L; ++l) {
    const double* prev = &table_[(l - 1) * width];
    double* row = &table_[l * width];
    window.clear();
    for (std::size_t n = 0; n <= N_max; ++n) {
      window.push(prev[n]);
      if (window.size() > R + 1) window.pop();
      row[n] = window.total();
    }
  }
}

double log_count_bounded(std::size_t L, std::size_t N, std::size_t R) {
  if (L == 0) throw DomainError("log_count_bounded requires L >= 1");
  if (static_cast<double>(N) > static_cast<double>(L) * static_cast<double>(R)) return kNegInf;
  return BoundedCounts(L, N, R).log_count(L, N);
}

}  // namespace zrp
