#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string_view>
#include <vector>

#include "zrp/canonical_sampler.hpp"
#include "zrp/lattice.hpp"
#include "zrp/rate_model.hpp"
#include "zrp/rng.hpp"

namespace zrp {

/// Configuration of the process plus incremental bookkeeping.
///
/// Sites with 1 <= eta <= R (class A, rate c0) and eta > R (class B, rate c1)
/// are kept in index lists with back-pointers, so a uniform site of either
/// class is drawn in O(1). The occupancy histogram is dense over 0..N.
class SimState {
 public:
  SimState(std::vector<std::uint32_t> eta, std::size_t R);

  [[nodiscard]] std::size_t L() const { return eta_.size(); }
  [[nodiscard]] std::uint64_t N() const { return N_; }
  [[nodiscard]] std::size_t R() const { return R_; }
  [[nodiscard]] std::uint32_t eta(std::size_t x) const { return eta_[x]; }
  [[nodiscard]] const std::vector<std::uint32_t>& occupations() const { return eta_; }
  [[nodiscard]] std::size_t A() const { return list_a_.size(); }
  [[nodiscard]] std::size_t B() const { return list_b_.size(); }
  [[nodiscard]] std::size_t empty_sites() const { return hist_[0]; }
  [[nodiscard]] std::uint32_t max_occupation() const { return max_; }
  [[nodiscard]] std::uint64_t sigma_bg() const { return N_ - max_; }
  [[nodiscard]] std::uint64_t sites_with(std::uint32_t k) const {
    return k < hist_.size() ? hist_[k] : 0;
  }
  [[nodiscard]] std::uint32_t site_in_a(std::size_t i) const { return list_a_[i]; }
  [[nodiscard]] std::uint32_t site_in_b(std::size_t i) const { return list_b_[i]; }

  double time = 0.0;
  std::uint64_t events = 0;

  /// Move one particle from source to dest (source must be occupied).
  void move_particle(std::uint32_t source, std::uint32_t dest);

  /// Recompute all derived quantities from eta and compare; throws std::logic_error.
  void check_consistency() const;

 private:
  enum : std::uint8_t { kEmpty = 0, kClassA = 1, kClassB = 2 };
  [[nodiscard]] std::uint8_t class_of(std::uint32_t k) const {
    return k == 0 ? kEmpty : (k <= R_ ? kClassA : kClassB);
  }
  void reclassify(std::uint32_t x, std::uint8_t from, std::uint8_t to);
  void list_remove(std::vector<std::uint32_t>& list, std::uint32_t x);

  std::vector<std::uint32_t> eta_;
  std::size_t R_;
  std::uint64_t N_ = 0;
  std::vector<std::uint32_t> list_a_;
  std::vector<std::uint32_t> list_b_;
  std::vector<std::uint32_t> pos_;  // index of a site within its class list
  std::vector<std::uint64_t> hist_;
  std::uint32_t max_ = 0;
};

struct Event {
  double time = 0.0;
  std::uint32_t source = 0;
  std::uint32_t dest = 0;
};

/// Total exit rate c0 * A + c1 * B.
inline double total_rate(const SimState& s, const RateModel& model) {
  return model.c0() * static_cast<double>(s.A()) + model.c1() * static_cast<double>(s.B());
}

/// One Gillespie step: advance time by Exp(total rate), move one particle.
Event step(SimState& state, const RateModel& model, const Lattice& lattice, Rng& rng);

enum class InitialPhase { kFluid, kCondensed, kUniform };
InitialPhase initial_phase_from_string(std::string_view name);

/// Initial configuration. Fluid and condensed draw exactly from pi_{L,N}
/// restricted to X^0 and X^1; uniform drops each particle on a uniform site.
SimState init_state(std::size_t L, std::size_t N, const RateModel& model, InitialPhase phase,
                    Rng& rng);
SimState init_state(const CanonicalSampler& sampler, InitialPhase phase, Rng& rng);

enum class HitTarget { kFluidExit, kCondExit };

struct HittingTime {
  double tau = 0.0;  // elapsed time, or t_max when censored
  bool censored = false;
  std::uint64_t events = 0;
};

/// Run until the phase is left: fluid exit when max > R, condensed exit when
/// max <= R. Time is measured from the state's current time.
HittingTime run_to_hit(SimState& state, const RateModel& model, const Lattice& lattice,
                       HitTarget target, double t_max, Rng& rng);

/// Default censoring time: 1e9 expected events at the largest possible rate c0 * L.
double default_t_max(std::size_t L, const RateModel& model);

struct TrajectorySample {
  double t = 0.0;
  double sigma_bg_per_L = 0.0;
  double max_per_L = 0.0;
  std::size_t A = 0;
  std::size_t B = 0;
};

/// Binary event log: little-endian records (f64 time, u32 source, u32 dest).
class EventWriter {
 public:
  explicit EventWriter(const std::filesystem::path& path);
  void write(const Event& event);

 private:
  std::ofstream out_;
};

/// Simulate up to t_max and sample observables at t = 0, dt, 2 dt, ... <= t_max.
/// Values are those of the configuration in force at each grid time.
std::vector<TrajectorySample> record_trajectory(SimState& state, const RateModel& model,
                                                const Lattice& lattice, double t_max,
                                                double sample_dt, Rng& rng,
                                                EventWriter* events = nullptr);

struct LifetimeStats {
  std::size_t replicas = 0;
  std::size_t uncensored = 0;
  double mean = 0.0;    // over uncensored replicas
  double std_error = 0.0;  // standard error of the mean
  double censored_fraction = 0.0;
  std::vector<double> tau;  // uncensored lifetimes in replica order
};

struct LifetimeRecord {
  std::size_t L = 0;
  std::size_t N = 0;
  std::size_t R = 0;
  std::optional<LifetimeStats> fluid;
  std::optional<LifetimeStats> cond;
};

struct SweepOptions {
  std::vector<std::size_t> L_list;
  double rho = 0.0;
  std::size_t replicas = 100;
  std::optional<double> t_max;  // default_t_max(L) when unset
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool fluid = true;
  bool cond = true;
  JumpKernel kernel = symmetric_nearest_neighbour();
};

/// Lifetimes of both phases for each L with N = round(rho * L). Replica r of
/// target t uses stream make_stream(seed, L, 2 r + t), so results do not
/// depend on the worker count.
std::vector<LifetimeRecord> lifetime_sweep(const SweepOptions& options, const RateModel& model);

LifetimeStats summarize_lifetimes(const std::vector<HittingTime>& runs);

}  // namespace zrp
