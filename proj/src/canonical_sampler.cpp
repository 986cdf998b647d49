#include "zrp/canonical_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

namespace {

std::vector<double> cdf_from_log_weights(const std::vector<double>& log_w) {
  std::vector<double> cdf(log_w.size());
  const double total = log_sum_exp(log_w);
  double acc = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    acc += std::exp(log_w[i] - total);
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

std::size_t draw_from_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

CanonicalPhase canonical_phase_from_string(std::string_view name) {
  if (name == "fluid") return CanonicalPhase::kFluid;
  if (name == "condensed") return CanonicalPhase::kCondensed;
  if (name == "unconditioned" || name == "stationary") return CanonicalPhase::kUnconditioned;
  throw DomainError("unknown canonical phase '" + std::string(name) + "'");
}

CanonicalSampler::CanonicalSampler(std::size_t L, std::size_t N, const RateModel& model)
    : L_(L), N_(N), R_(model.cutoff(L, N)), model_(model), counts_(L, N, R_) {
  if (L == 0) throw DomainError("canonical sampler requires L >= 1");
  decomposition_ = phase_decomposition(L, N, R_, counts_, model);
  mass_.resize(decomposition_.M + 1);
  for (std::size_t m = 1; m <= decomposition_.M; ++m) {
    const auto log_w = condensate_mass_log_weights(L, N, R_, m, counts_, model);
    if (log_w.empty()) continue;
    mass_[m].k_min = m * (R_ + 1);
    mass_[m].cdf = cdf_from_log_weights(log_w);
  }
  phase_cdf_ = cdf_from_log_weights(decomposition_.log_Z_m);
}

void CanonicalSampler::fill_fluid(std::uint32_t* sites, std::size_t l, std::size_t n,
                                  Rng& rng) const {
  if (l == 0) return;
  // P(eta_1 = k) = |X^0_{l-1,n-k}| / |X^0_{l,n}|, k <= min(R, n).
  for (std::size_t i = 0; i + 1 < l; ++i) {
    const std::size_t remaining = l - i;
    const double log_total = counts_.log_count(remaining, n);
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t k = 0;
    const std::size_t k_max = std::min(R_, n);
    for (;; ++k) {
      acc += std::exp(counts_.log_count(remaining - 1, n - k) - log_total);
      if (u < acc || k == k_max) break;
    }
    // Rounding in acc can only push past the last feasible value; step back to one.
    while (k > 0 && counts_.log_count(remaining - 1, n - k) == kNegInf) --k;
    sites[i] = static_cast<std::uint32_t>(k);
    n -= k;
  }
  sites[l - 1] = static_cast<std::uint32_t>(n);
}

std::vector<std::uint32_t> CanonicalSampler::sample_phase(std::size_t m, Rng& rng) const {
  std::vector<std::uint32_t> eta(L_, 0);
  if (m == 0) {
    fill_fluid(eta.data(), L_, N_, rng);
    return eta;
  }
  const MassTable& table = mass_[m];
  const std::size_t k = table.k_min + draw_from_cdf(table.cdf, rng);

  // Split the excess k - mR into m positive parts uniformly (stars and bars).
  const std::size_t excess = k - m * R_;
  std::vector<std::size_t> cuts;
  cuts.reserve(m + 1);
  // Choose m-1 distinct cut points in {1, ..., excess-1} by Floyd's algorithm.
  std::vector<std::size_t> chosen;
  for (std::size_t j = excess - m + 1; j <= excess - 1 && m > 1; ++j) {
    const std::size_t t = 1 + uniform_index(rng, j);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  cuts.push_back(0);
  cuts.insert(cuts.end(), chosen.begin(), chosen.end());
  cuts.push_back(excess);

  // Condensate positions: uniform m-subset of the lattice via partial shuffle.
  std::vector<std::uint32_t> order(L_);
  std::iota(order.begin(), order.end(), 0U);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + uniform_index(rng, L_ - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint32_t> background(L_ - m);
  fill_fluid(background.data(), L_ - m, N_ - k, rng);

  std::vector<bool> is_condensate(L_, false);
  for (std::size_t i = 0; i < m; ++i) {
    is_condensate[order[i]] = true;
    eta[order[i]] = static_cast<std::uint32_t>(R_ + (cuts[i + 1] - cuts[i]));
  }
  std::size_t b = 0;
  for (std::size_t x = 0; x < L_; ++x) {
    if (!is_condensate[x]) eta[x] = background[b++];
  }
  return eta;
}

std::vector<std::uint32_t> CanonicalSampler::sample(CanonicalPhase phase, Rng& rng) const {
  switch (phase) {
    case CanonicalPhase::kFluid:
      if (decomposition_.log_Z_m[0] == kNegInf) {
        throw EmptyPhase("fluid phase X^0 is empty: N > L * R");
      }
      return sample_phase(0, rng);
    case CanonicalPhase::kCondensed:
      if (decomposition_.M < 1 || mass_[1].cdf.empty()) {
        throw EmptyPhase("condensed phase X^1 is empty (requires N > R)");
      }
      return sample_phase(1, rng);
    case CanonicalPhase::kUnconditioned:
      return sample_phase(draw_from_cdf(phase_cdf_, rng), rng);
  }
  return {};
}

std::vector<std::uint32_t> sample_canonical(std::size_t L, std::size_t N, const RateModel& model,
                                            CanonicalPhase phase, Rng& rng) {
  return CanonicalSampler(L, N, model).sample(phase, rng);
}

}  // namespace zrp
