#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "zrp/rng.hpp"

namespace zrp {

/// Translation-invariant jump kernel p(offset) of finite range.
struct JumpKernel {
  std::vector<int> offsets;
  std::vector<double> probabilities;

  [[nodiscard]] int range() const;
  [[nodiscard]] bool is_symmetric() const;
};

JumpKernel symmetric_nearest_neighbour();
JumpKernel totally_asymmetric();
// p(+1) = p_right, p(-1) = 1 - p_right.
JumpKernel asymmetric_nearest_neighbour(double p_right);
// Uniform over the offsets +-1, ..., +-C.
JumpKernel uniform_range(int C);
// "symmetric", "asymmetric", "totally_asymmetric" or "range"; p_right and C
// are used by the last two kinds.
JumpKernel kernel_from_name(const std::string& name, double p_right = 1.0, int C = 1);

/// One-dimensional ring of L sites with a jump kernel.
class Lattice {
 public:
  Lattice(std::size_t L, JumpKernel kernel = symmetric_nearest_neighbour());

  [[nodiscard]] std::size_t size() const { return L_; }
  [[nodiscard]] const JumpKernel& kernel() const { return kernel_; }

  /// Site reached from x by one jump drawn from p.
  [[nodiscard]] std::uint32_t sample_destination(std::uint32_t x, Rng& rng) const {
    std::size_t i = 0;
    if (cdf_.size() > 1) {
      const double u = uniform01(rng);
      while (i + 1 < cdf_.size() && u >= cdf_[i]) ++i;
    }
    const std::size_t y = x + shifts_[i];
    return static_cast<std::uint32_t>(y >= L_ ? y - L_ : y);
  }
  /// Site x + offset on the ring.
  [[nodiscard]] std::uint32_t shift(std::uint32_t x, int offset) const;

 private:
  std::size_t L_;
  JumpKernel kernel_;
  std::vector<double> cdf_;
  std::vector<std::size_t> shifts_;  // offsets reduced to [0, L)
};

}  // namespace zrp
