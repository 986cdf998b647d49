#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "zrp/lattice.hpp"
#include "zrp/rate_model.hpp"

namespace zrp {

/// Full enumeration of X_{L,N} for small systems, with the generator matrix.
class StateSpace {
 public:
  /// Throws ResourceError when the number of states exceeds max_states.
  StateSpace(std::size_t L, std::size_t N, std::size_t max_states = 200'000);

  [[nodiscard]] std::size_t size() const { return states_.size(); }
  [[nodiscard]] const std::vector<std::uint32_t>& state(std::size_t i) const { return states_[i]; }
  /// Index of a configuration; throws DomainError if it is not in X_{L,N}.
  [[nodiscard]] std::size_t index_of(const std::vector<std::uint32_t>& eta) const;

  /// Normalized product measure pi(eta) proportional to prod_x w_R(eta_x).
  [[nodiscard]] std::vector<double> stationary(const RateModel& model, std::size_t R) const;

  /// Dense generator Q (row-major, size x size) for the lattice's jump kernel.
  [[nodiscard]] std::vector<double> generator(const RateModel& model, std::size_t R,
                                              const Lattice& lattice) const;

 private:
  std::size_t L_;
  std::size_t N_;
  std::vector<std::vector<std::uint32_t>> states_;
  std::map<std::vector<std::uint32_t>, std::size_t> index_;
};

struct StationarityReport {
  std::size_t states = 0;
  double max_residual = 0.0;        // max_j |(pi Q)_j|
  double max_balance_defect = 0.0;  // max |pi_i Q_ij - pi_j Q_ji|
  bool detailed_balance = false;    // defect <= tolerance
};

StationarityReport check_stationarity(std::size_t L, std::size_t N, std::size_t R,
                                      const RateModel& model, const Lattice& lattice,
                                      double tolerance = 1e-12);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace zrp
