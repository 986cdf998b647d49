#include "zrp/exact.hpp"

#include <cmath>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp::exact {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite value to a rational");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an exact integer.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational r = Rational(Integer(scaled));
  const int shift = exponent - 53;
  Integer p = 1;
  p <<= static_cast<unsigned>(std::abs(shift));
  return shift >= 0 ? r * Rational(p) : r / Rational(p);
}

Rational weight(std::size_t k, std::size_t R, const RateModel& model) {
  const Rational inv_c0 = Rational(1) / to_rational(model.c0());
  const Rational inv_c1 = Rational(1) / to_rational(model.c1());
  Rational w = 1;
  for (std::size_t i = 1; i <= k; ++i) w *= (i <= R ? inv_c0 : inv_c1);
  return w;
}

Integer count_bounded(std::size_t L, std::size_t N, std::size_t R) {
  std::vector<Integer> row(N + 1, 0);
  row[0] = 1;
  for (std::size_t l = 1; l <= L; ++l) {
    std::vector<Integer> next(N + 1, 0);
    for (std::size_t n = 0; n <= N; ++n) {
      for (std::size_t k = 0; k <= std::min(n, R); ++k) next[n] += row[n - k];
    }
    row = std::move(next);
  }
  return row[N];
}

std::vector<Rational> phase_partition(std::size_t L, std::size_t N, std::size_t R,
                                      const RateModel& model) {
  std::vector<Rational> w(N + 1);
  for (std::size_t k = 0; k <= N; ++k) w[k] = weight(k, R, model);
  // table[m][n]: sum over l-site configurations with n particles and m sites above R.
  std::vector<std::vector<Rational>> table(L + 1, std::vector<Rational>(N + 1, Rational(0)));
  table[0][0] = 1;
  for (std::size_t l = 1; l <= L; ++l) {
    std::vector<std::vector<Rational>> next(L + 1, std::vector<Rational>(N + 1, Rational(0)));
    for (std::size_t m = 0; m < l; ++m) {
      for (std::size_t n = 0; n <= N; ++n) {
        if (table[m][n] == 0) continue;
        for (std::size_t k = 0; n + k <= N; ++k) {
          next[m + (k > R ? 1 : 0)][n + k] += table[m][n] * w[k];
        }
      }
    }
    table = std::move(next);
  }
  std::vector<Rational> out(L + 1);
  for (std::size_t m = 0; m <= L; ++m) out[m] = table[m][N];
  return out;
}

Rational partition(std::size_t L, std::size_t N, std::size_t R, const RateModel& model) {
  Rational total = 0;
  for (const auto& z : phase_partition(L, N, R, model)) total += z;
  return total;
}

double log_of(const Rational& x) {
  if (x == 0) return kNegInf;
  if (x < 0) throw DomainError("log of a negative rational");
  const Integer& num = boost::multiprecision::numerator(x);
  const Integer& den = boost::multiprecision::denominator(x);
  // log(num) - log(den) via the top 60 bits of each.
  auto log_int = [](const Integer& v) {
    const std::size_t bits = boost::multiprecision::msb(v) + 1;
    const std::size_t drop = bits > 60 ? bits - 60 : 0;
    const Integer top = v >> drop;
    return std::log(top.convert_to<double>()) + static_cast<double>(drop) * std::log(2.0);
  };
  return log_int(num) - log_int(den);
}

}  // namespace zrp::exact
