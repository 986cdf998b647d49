#include "zrp/canonical.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "zrp/ensemble_gc.hpp"
#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

namespace {

void check_budget(std::size_t L, std::size_t N_max, const TableOptions& options) {
  const double cells = static_cast<double>(L + 1) * static_cast<double>(N_max + 1);
  if (cells > static_cast<double>(options.max_cells)) {
    throw ResourceError("canonical table with L=" + std::to_string(L) + ", N_max=" +
                        std::to_string(N_max) + " exceeds the cell budget of " +
                        std::to_string(options.max_cells));
  }
}

std::vector<double> partition_recursion(std::size_t L, std::size_t N_max, std::size_t R,
                                        const RateModel& model) {
  const std::size_t width = N_max + 1;
  std::vector<double> table(width * (L + 1), kNegInf);
  table[0] = 0.0;
  const double lc0 = model.log_c0();
  const double lc1 = model.log_c1();
  const double Rd = static_cast<double>(R);
  LogWindowSum bulk;
  for (std::size_t l = 1; l <= L; ++l) {
    const double* prev = &table[(l - 1) * width];
    double* row = &table[l * width];
    bulk.clear();
    double tail_prefix = kNegInf;  // log sum_{j <= n-R-1} Z_{l-1,j} c1^j
    for (std::size_t n = 0; n <= N_max; ++n) {
      const double nd = static_cast<double>(n);
      // Bulk: sum_{j=n-R}^{n} Z_{l-1,j} c0^{-(n-j)}, stored as Z c0^j and rescaled.
      bulk.push(prev[n] + nd * lc0);
      if (bulk.size() > R + 1) bulk.pop();
      const double bulk_part = bulk.total() - nd * lc0;
      double tail_part = kNegInf;
      if (n >= R + 1) {
        const std::size_t j = n - R - 1;
        tail_prefix = log_add(tail_prefix, prev[j] + static_cast<double>(j) * lc1);
        // w_R(n-j) = c0^{-R} c1^{R-(n-j)}
        tail_part = tail_prefix - Rd * lc0 + Rd * lc1 - nd * lc1;
      }
      row[n] = log_add(bulk_part, tail_part);
    }
  }
  return table;
}

template <class T>
void write_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <class T>
T read_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  in.read(bytes.data(), bytes.size());
  if (!in) throw std::runtime_error("canonical table cache: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

CanonicalTable::CanonicalTable(std::size_t L, std::size_t N_max, std::size_t R,
                               const RateModel& model, const TableOptions& options)
    : L_(L), N_max_(N_max), R_(R), model_(model) {
  if (L == 0) throw DomainError("canonical table requires L >= 1");
  check_budget(L, N_max, options);
  log_Z_ = partition_recursion(L, N_max, R, model);
  counts_ = BoundedCounts(L, N_max, R);
}

CanonicalTable::CanonicalTable(std::size_t L, std::size_t N_max, std::size_t R,
                               const RateModel& model, std::vector<double> log_Z)
    : L_(L), N_max_(N_max), R_(R), model_(model), log_Z_(std::move(log_Z)),
      counts_(L, N_max, R) {
  if (log_Z_.size() != (L + 1) * (N_max + 1)) {
    throw std::runtime_error("canonical table: stored value count does not match dimensions");
  }
}

CanonicalTable build_canonical_table(std::size_t L, std::size_t N_max, const RateModel& model,
                                     const TableOptions& options) {
  return CanonicalTable(L, N_max, model.cutoff(L, N_max), model, options);
}

double log_partition(std::size_t L, std::size_t N, const RateModel& model) {
  if (L == 0) throw DomainError("log_partition requires L >= 1");
  const std::size_t R = model.cutoff(L, N);
  return partition_recursion(L, N, R, model)[L * (N + 1) + N];
}

std::vector<double> condensate_mass_log_weights(std::size_t L, std::size_t N, std::size_t R,
                                                std::size_t m, const BoundedCounts& counts,
                                                const RateModel& model) {
  std::vector<double> weights;
  if (m == 0 || m > L || m * (R + 1) > N) return weights;
  const double lc0 = model.log_c0();
  const double lc1 = model.log_c1();
  const double md = static_cast<double>(m);
  const double mR = md * static_cast<double>(R);
  weights.reserve(N - m * (R + 1) + 1);
  for (std::size_t k = m * (R + 1); k <= N; ++k) {
    const double kd = static_cast<double>(k);
    weights.push_back(-static_cast<double>(N - k) * lc0 - (kd - mR) * lc1 +
                      counts.log_count(L - m, N - k) + log_binomial(kd - mR - 1.0, md - 1.0));
  }
  return weights;
}

PhaseDecomposition phase_decomposition(std::size_t L, std::size_t N, std::size_t R,
                                       const BoundedCounts& counts, const RateModel& model) {
  if (counts.L() < L || counts.N_max() < N || counts.R() != R) {
    throw DomainError("phase_decomposition: count table does not cover (L, N, R)");
  }
  PhaseDecomposition d;
  d.L = L;
  d.N = N;
  d.R = R;
  if (N == 0) {
    d.M = 0;
  } else if (R == 0) {
    d.M = N;
  } else {
    d.M = (N + R - 1) / R;
  }
  d.log_Z_m.assign(d.M + 1, kNegInf);
  d.log_Z_m[0] = -static_cast<double>(N) * model.log_c0() + counts.log_count(L, N);
  for (std::size_t m = 1; m <= d.M; ++m) {
    const auto weights = condensate_mass_log_weights(L, N, R, m, counts, model);
    if (weights.empty()) continue;
    d.log_Z_m[m] = log_binomial(static_cast<double>(L), static_cast<double>(m)) -
                   static_cast<double>(m) * static_cast<double>(R) * model.log_c0() +
                   log_sum_exp(weights);
  }
  d.log_Z = log_sum_exp(d.log_Z_m);
  d.probabilities.resize(d.M + 1);
  for (std::size_t m = 0; m <= d.M; ++m) d.probabilities[m] = std::exp(d.log_Z_m[m] - d.log_Z);
  return d;
}

PhaseDecomposition phase_decomposition(std::size_t L, std::size_t N, const RateModel& model) {
  if (L == 0) throw DomainError("phase_decomposition requires L >= 1");
  const std::size_t R = model.cutoff(L, N);
  return phase_decomposition(L, N, R, BoundedCounts(L, N, R), model);
}

void save_table(const CanonicalTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write("ZRPC", 4);
  write_le<std::uint32_t>(out, kTableFormatVersion);
  write_le<std::uint64_t>(out, table.L());
  write_le<std::uint64_t>(out, table.N_max());
  write_le<std::uint64_t>(out, table.R());
  write_le<double>(out, table.model().c0());
  write_le<double>(out, table.model().c1());
  for (double v : table.raw_log_Z()) write_le<double>(out, v);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CanonicalTable load_table(const std::filesystem::path& path, const RateModel& model) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::string(magic.data(), 4) != "ZRPC") {
    throw std::runtime_error(path.string() + ": not a canonical table cache (bad magic)");
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kTableFormatVersion) {
    throw std::runtime_error(path.string() + ": unsupported cache version " +
                             std::to_string(version));
  }
  const auto L = static_cast<std::size_t>(read_le<std::uint64_t>(in));
  const auto N_max = static_cast<std::size_t>(read_le<std::uint64_t>(in));
  const auto R = static_cast<std::size_t>(read_le<std::uint64_t>(in));
  const double c0 = read_le<double>(in);
  const double c1 = read_le<double>(in);
  if (c0 != model.c0() || c1 != model.c1()) {
    throw std::runtime_error(path.string() + ": cached rates do not match the model");
  }
  std::vector<double> values((L + 1) * (N_max + 1));
  for (double& v : values) v = read_le<double>(in);
  return CanonicalTable(L, N_max, R, model.with_cutoff(R), std::move(values));
}

std::shared_ptr<const CanonicalTable> TableCache::get(std::size_t L, std::size_t N_max,
                                                      const RateModel& model) {
  const std::size_t R = model.cutoff(L, N_max);
  const Key key{L, N_max, R, model.c0(), model.c1()};
  {
    std::lock_guard lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  }
  auto table = std::make_shared<const CanonicalTable>(L, N_max, R, model, options_);
  std::lock_guard lock(mutex_);
  return tables_.try_emplace(key, std::move(table)).first->second;
}

std::size_t TableCache::size() const {
  std::lock_guard lock(mutex_);
  return tables_.size();
}

}  // namespace zrp
