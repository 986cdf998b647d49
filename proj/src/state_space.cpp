#include "zrp/state_space.hpp"

#include <cmath>
#include <functional>

#include "zrp/errors.hpp"
#include "zrp/exact.hpp"

namespace zrp {

StateSpace::StateSpace(std::size_t L, std::size_t N, std::size_t max_states) : L_(L), N_(N) {
  if (L == 0) throw DomainError("state space needs L >= 1");
  const auto count = exact::count_bounded(L, N, N);
  if (count > max_states) {
    throw ResourceError("state space too large: " + count.str() + " states");
  }
  std::vector<std::uint32_t> eta(L, 0);
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t x, std::size_t left) {
    if (x + 1 == L) {
      eta[x] = static_cast<std::uint32_t>(left);
      index_.emplace(eta, states_.size());
      states_.push_back(eta);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      eta[x] = static_cast<std::uint32_t>(k);
      fill(x + 1, left - k);
    }
  };
  fill(0, N);
}

std::size_t StateSpace::index_of(const std::vector<std::uint32_t>& eta) const {
  const auto it = index_.find(eta);
  if (it == index_.end()) throw DomainError("configuration is not in the state space");
  return it->second;
}

std::vector<double> StateSpace::stationary(const RateModel& model, std::size_t R) const {
  std::vector<double> log_w(states_.size(), 0.0);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    for (const auto k : states_[i]) {
      const double bulk = static_cast<double>(std::min<std::size_t>(k, R));
      const double tail = k > R ? static_cast<double>(k - R) : 0.0;
      log_w[i] -= bulk * model.log_c0() + tail * model.log_c1();
    }
  }
  double top = log_w.empty() ? 0.0 : log_w[0];
  for (const double v : log_w) top = std::max(top, v);
  std::vector<double> pi(states_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) total += pi[i] = std::exp(log_w[i] - top);
  for (auto& p : pi) p /= total;
  return pi;
}

std::vector<double> StateSpace::generator(const RateModel& model, std::size_t R,
                                          const Lattice& lattice) const {
  if (lattice.size() != L_) throw DomainError("lattice size does not match the state space");
  const std::size_t n = states_.size();
  std::vector<double> Q(n * n, 0.0);
  const auto& kernel = lattice.kernel();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& eta = states_[i];
    for (std::uint32_t x = 0; x < L_; ++x) {
      if (eta[x] == 0) continue;
      const double g = model.rate(eta[x], R);
      for (std::size_t d = 0; d < kernel.offsets.size(); ++d) {
        const double p = kernel.probabilities[d];
        if (p == 0.0) continue;
        auto next = eta;
        --next[x];
        ++next[lattice.shift(x, kernel.offsets[d])];
        const std::size_t j = index_of(next);
        Q[i * n + j] += g * p;
        Q[i * n + i] -= g * p;
      }
    }
  }
  return Q;
}

StationarityReport check_stationarity(std::size_t L, std::size_t N, std::size_t R,
                                      const RateModel& model, const Lattice& lattice,
                                      double tolerance) {
  const StateSpace space(L, N);
  const auto pi = space.stationary(model, R);
  const auto Q = space.generator(model, R, lattice);
  const std::size_t n = space.size();
  StationarityReport report;
  report.states = n;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += pi[i] * Q[i * n + j];
    report.max_residual = std::max(report.max_residual, std::abs(acc));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double defect = std::abs(pi[i] * Q[i * n + j] - pi[j] * Q[j * n + i]);
      report.max_balance_defect = std::max(report.max_balance_defect, defect);
    }
  }
  report.detailed_balance = report.max_balance_defect <= tolerance;
  return report;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("distributions differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

}  // namespace zrp
