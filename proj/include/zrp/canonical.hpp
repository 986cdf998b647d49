#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "zrp/combinatorics.hpp"
#include "zrp/rate_model.hpp"

namespace zrp {

struct TableOptions {
  // Upper bound on (L + 1) * (N_max + 1) cells per table (two tables of doubles are kept).
  std::size_t max_cells = 50'000'000;
};

/// log Z_{l,n} for l <= L, n <= N_max at a fixed cutoff R, together with the
/// bounded-composition counts log |X^0_{l,n}|.
///
/// Z_{l,n} = sum_k w_R(k) Z_{l-1,n-k}. The bulk part k <= R is a sliding
/// window over the previous row and the tail k > R a running prefix, so each
/// row costs O(N_max) instead of O(N_max^2).
class CanonicalTable {
 public:
  CanonicalTable(std::size_t L, std::size_t N_max, std::size_t R, const RateModel& model,
                 const TableOptions& options = {});

  // Rebuild from stored log Z values (cache file); counts are recomputed.
  CanonicalTable(std::size_t L, std::size_t N_max, std::size_t R, const RateModel& model,
                 std::vector<double> log_Z);

  [[nodiscard]] double log_Z(std::size_t l, std::size_t n) const {
    return log_Z_[l * (N_max_ + 1) + n];
  }
  [[nodiscard]] double log_count_bounded(std::size_t l, std::size_t n) const {
    return counts_.log_count(l, n);
  }
  [[nodiscard]] const BoundedCounts& counts() const { return counts_; }
  [[nodiscard]] const std::vector<double>& raw_log_Z() const { return log_Z_; }

  [[nodiscard]] std::size_t L() const { return L_; }
  [[nodiscard]] std::size_t N_max() const { return N_max_; }
  [[nodiscard]] std::size_t R() const { return R_; }
  [[nodiscard]] const RateModel& model() const { return model_; }

 private:
  std::size_t L_;
  std::size_t N_max_;
  std::size_t R_;
  RateModel model_;
  std::vector<double> log_Z_;
  BoundedCounts counts_;
};

/// Table with the model's cutoff R = cutoff(L, N_max). In particle-dependent
/// mode that is the cutoff for target particle number N_max.
CanonicalTable build_canonical_table(std::size_t L, std::size_t N_max, const RateModel& model,
                                     const TableOptions& options = {});

/// log Z_{L,N} at the model's cutoff for (L, N).
double log_partition(std::size_t L, std::size_t N, const RateModel& model);

/// Split of Z_{L,N} by the number m of sites holding more than R particles.
struct PhaseDecomposition {
  std::size_t L = 0;
  std::size_t N = 0;
  std::size_t R = 0;
  std::size_t M = 0;                 // ceil(N / R)
  std::vector<double> log_Z_m;       // m = 0..M, -infinity for empty phases
  std::vector<double> probabilities;  // pi_{L,N}(X^m)
  double log_Z = 0.0;                // log sum_m Z^m
};

PhaseDecomposition phase_decomposition(std::size_t L, std::size_t N, const RateModel& model);
PhaseDecomposition phase_decomposition(std::size_t L, std::size_t N, std::size_t R,
                                       const BoundedCounts& counts, const RateModel& model);

/// Log-weights over the total condensate mass k = m(R+1)..N of phase m >= 1
/// (index i holds k = m(R+1) + i), without the binom(L,m) c0^{-mR} prefactor.
std::vector<double> condensate_mass_log_weights(std::size_t L, std::size_t N, std::size_t R,
                                                std::size_t m, const BoundedCounts& counts,
                                                const RateModel& model);

// Binary cache: "ZRPC", u32 version, u64 L, u64 N_max, u64 R, f64 c0, f64 c1,
// then (L+1) x (N_max+1) row-major f64 log Z values, all little-endian.
inline constexpr std::uint32_t kTableFormatVersion = 1;
void save_table(const CanonicalTable& table, const std::filesystem::path& path);
CanonicalTable load_table(const std::filesystem::path& path, const RateModel& model);

/// Thread-safe cache of immutable tables keyed by (L, N_max, R, c0, c1).
class TableCache {
 public:
  explicit TableCache(TableOptions options = {}) : options_(options) {}

  std::shared_ptr<const CanonicalTable> get(std::size_t L, std::size_t N_max,
                                            const RateModel& model);
  [[nodiscard]] std::size_t size() const;

 private:
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, double, double>;
  TableOptions options_;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const CanonicalTable>> tables_;
};

}  // namespace zrp
