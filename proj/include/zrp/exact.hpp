#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zrp/rate_model.hpp"

namespace zrp::exact {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a double (every finite double is a dyadic rational).
Rational to_rational(double x);

/// Weight w_R(k) as an exact rational.
Rational weight(std::size_t k, std::size_t R, const RateModel& model);

/// |X^0_{L,N}|: compositions of N into L parts each at most R.
Integer count_bounded(std::size_t L, std::size_t N, std::size_t R);

/// Z^m_{L,N} for m = 0..L, by a direct recursion that tracks the number of
/// sites above R. Independent of the floating-point table.
std::vector<Rational> phase_partition(std::size_t L, std::size_t N, std::size_t R,
                                      const RateModel& model);

Rational partition(std::size_t L, std::size_t N, std::size_t R, const RateModel& model);

double log_of(const Rational& x);

}  // namespace zrp::exact
