#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "zrp/canonical.hpp"
#include "zrp/combinatorics.hpp"
#include "zrp/rate_model.hpp"
#include "zrp/rng.hpp"

namespace zrp {

enum class CanonicalPhase { kFluid, kCondensed, kUnconditioned };

CanonicalPhase canonical_phase_from_string(std::string_view name);

/// Exact sampler for pi_{L,N} and its restrictions to X^0 (fluid) and X^1 (condensed).
///
/// On X^0 all weights equal c0^{-N}, so fluid configurations are uniform and
/// are drawn site by site from the bounded-composition counts. Condensed and
/// unconditioned draws first pick the condensate sites and their total mass
/// from the exact phase weights, then fill the background uniformly.
/// Immutable after construction; `sample` may be called concurrently with
/// distinct RNGs.
class CanonicalSampler {
 public:
  CanonicalSampler(std::size_t L, std::size_t N, const RateModel& model);

  [[nodiscard]] std::vector<std::uint32_t> sample(CanonicalPhase phase, Rng& rng) const;

  [[nodiscard]] const PhaseDecomposition& decomposition() const { return decomposition_; }
  [[nodiscard]] std::size_t L() const { return L_; }
  [[nodiscard]] std::size_t N() const { return N_; }
  [[nodiscard]] std::size_t R() const { return R_; }

 private:
  // Cumulative distribution over the total condensate mass of phase m.
  struct MassTable {
    std::size_t k_min = 0;
    std::vector<double> cdf;
  };

  void fill_fluid(std::uint32_t* sites, std::size_t l, std::size_t n, Rng& rng) const;
  std::vector<std::uint32_t> sample_phase(std::size_t m, Rng& rng) const;

  std::size_t L_;
  std::size_t N_;
  std::size_t R_;
  RateModel model_;
  BoundedCounts counts_;
  PhaseDecomposition decomposition_;
  std::vector<MassTable> mass_;    // index m; empty cdf for empty phases
  std::vector<double> phase_cdf_;  // over m
};

/// One-shot convenience; throws EmptyPhase when the phase has no configuration.
std::vector<std::uint32_t> sample_canonical(std::size_t L, std::size_t N, const RateModel& model,
                                            CanonicalPhase phase, Rng& rng);

}  // namespace zrp
