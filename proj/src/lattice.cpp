#include "zrp/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "zrp/errors.hpp"

namespace zrp {

int JumpKernel::range() const {
  int c = 0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (probabilities[i] > 0.0) c = std::max(c, std::abs(offsets[i]));
  }
  return c;
}

bool JumpKernel::is_symmetric() const {
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    double mirror = 0.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      if (offsets[j] == -offsets[i]) mirror += probabilities[j];
    }
    double same = 0.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      if (offsets[j] == offsets[i]) same += probabilities[j];
    }
    if (std::abs(mirror - same) > 1e-15) return false;
  }
  return true;
}

JumpKernel symmetric_nearest_neighbour() { return {{1, -1}, {0.5, 0.5}}; }

JumpKernel totally_asymmetric() { return {{1}, {1.0}}; }

JumpKernel asymmetric_nearest_neighbour(double p_right) {
  if (!(p_right >= 0.0 && p_right <= 1.0)) {
    throw DomainError("asymmetric kernel requires 0 <= p_right <= 1");
  }
  return {{1, -1}, {p_right, 1.0 - p_right}};
}

JumpKernel uniform_range(int C) {
  if (C < 1) throw DomainError("range kernel requires C >= 1");
  JumpKernel k;
  const double p = 1.0 / (2.0 * C);
  for (int d = 1; d <= C; ++d) {
    k.offsets.push_back(d);
    k.probabilities.push_back(p);
    k.offsets.push_back(-d);
    k.probabilities.push_back(p);
  }
  return k;
}

JumpKernel kernel_from_name(const std::string& name, double p_right, int C) {
  if (name == "symmetric") return symmetric_nearest_neighbour();
  if (name == "totally_asymmetric") return totally_asymmetric();
  if (name == "asymmetric") return asymmetric_nearest_neighbour(p_right);
  if (name == "range") return uniform_range(C);
  throw DomainError("unknown jump kernel '" + name + "'");
}

Lattice::Lattice(std::size_t L, JumpKernel kernel) : L_(L), kernel_(std::move(kernel)) {
  if (L < 2) throw DomainError("lattice needs at least 2 sites");
  if (kernel_.offsets.empty() || kernel_.offsets.size() != kernel_.probabilities.size()) {
    throw DomainError("jump kernel offsets and probabilities must be nonempty and of equal length");
  }
  double total = 0.0;
  long long g = static_cast<long long>(L);
  for (std::size_t i = 0; i < kernel_.offsets.size(); ++i) {
    const double p = kernel_.probabilities[i];
    const int d = kernel_.offsets[i];
    if (!(p >= 0.0)) throw DomainError("jump probabilities must be nonnegative");
    if (d == 0) throw DomainError("jump offset 0 is not a jump");
    if (static_cast<std::size_t>(std::abs(d)) >= L) {
      throw DomainError("jump range must be smaller than the lattice size");
    }
    total += p;
    if (p > 0.0) g = std::gcd(g, static_cast<long long>(std::abs(d)));
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("jump probabilities must sum to 1");
  // On a finite ring the offsets generate Z_L exactly when their gcd with L is 1.
  if (g != 1) throw DomainError("jump kernel is not irreducible on the ring");
  double acc = 0.0;
  for (std::size_t i = 0; i < kernel_.offsets.size(); ++i) {
    acc += kernel_.probabilities[i] / total;
    cdf_.push_back(acc);
    const long long d = kernel_.offsets[i];
    shifts_.push_back(static_cast<std::size_t>((d % static_cast<long long>(L) + L) % L));
  }
  cdf_.back() = 1.0;
}

std::uint32_t Lattice::shift(std::uint32_t x, int offset) const {
  const long long Ls = static_cast<long long>(L_);
  return static_cast<std::uint32_t>(((static_cast<long long>(x) + offset) % Ls + Ls) % Ls);
}

}  // namespace zrp
