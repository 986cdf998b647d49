#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace zrp {

// How the cutoff R of the piecewise-constant jump rates scales with system size.
enum class CutoffMode {
  kLatticeDep,   // R = floor(a * L)
  kParticleDep,  // R = floor(a * N)
};

std::string_view to_string(CutoffMode mode);
CutoffMode cutoff_mode_from_string(std::string_view name);

/// Jump rates g(k) = c0 for 1 <= k <= R, c1 for k > R, g(0) = 0.
///
/// The single source of truth for rates, stationary weights and the cutoff
/// rule. Construction validates c0 > c1 > 0, a >= 0 and, in particle-dependent
/// mode, a < 1.
class RateModel {
 public:
  RateModel(double c0, double c1, double a, CutoffMode mode = CutoffMode::kLatticeDep,
            std::optional<std::size_t> explicit_R = std::nullopt);

  [[nodiscard]] double c0() const { return c0_; }
  [[nodiscard]] double c1() const { return c1_; }
  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] CutoffMode mode() const { return mode_; }
  [[nodiscard]] std::optional<std::size_t> explicit_R() const { return explicit_R_; }

  [[nodiscard]] double log_c0() const { return log_c0_; }
  [[nodiscard]] double log_c1() const { return log_c1_; }
  // log(c0 / c1) > 0
  [[nodiscard]] double log_ratio() const { return log_c0_ - log_c1_; }

  /// Cutoff for a lattice of L sites holding N particles.
  [[nodiscard]] std::size_t cutoff(std::size_t L, std::size_t N) const;

  /// Exit rate g_R(k) of a site holding k particles.
  [[nodiscard]] double rate(std::uint64_t k, std::size_t R) const {
    if (k == 0) return 0.0;
    return k <= R ? c0_ : c1_;
  }

  [[nodiscard]] RateModel with_cutoff(std::size_t R) const {
    return RateModel(c0_, c1_, a_, mode_, R);
  }
  [[nodiscard]] RateModel with_a(double a) const { return RateModel(c0_, c1_, a, mode_, explicit_R_); }

 private:
  double c0_;
  double c1_;
  double a_;
  CutoffMode mode_;
  std::optional<std::size_t> explicit_R_;
  double log_c0_;
  double log_c1_;
};

}  // namespace zrp
