#include "zrp/kmc.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

SimState::SimState(std::vector<std::uint32_t> eta, std::size_t R)
    : eta_(std::move(eta)), R_(R), pos_(eta_.size(), 0) {
  if (eta_.empty()) throw DomainError("state needs at least one site");
  for (const auto k : eta_) N_ += k;
  hist_.assign(N_ + 1, 0);
  for (std::uint32_t x = 0; x < eta_.size(); ++x) {
    const std::uint32_t k = eta_[x];
    ++hist_[k];
    max_ = std::max(max_, k);
    const auto c = class_of(k);
    if (c == kClassA) {
      pos_[x] = static_cast<std::uint32_t>(list_a_.size());
      list_a_.push_back(x);
    } else if (c == kClassB) {
      pos_[x] = static_cast<std::uint32_t>(list_b_.size());
      list_b_.push_back(x);
    }
  }
}

void SimState::list_remove(std::vector<std::uint32_t>& list, std::uint32_t x) {
  const std::uint32_t i = pos_[x];
  const std::uint32_t last = list.back();
  list[i] = last;
  pos_[last] = i;
  list.pop_back();
}

void SimState::reclassify(std::uint32_t x, std::uint8_t from, std::uint8_t to) {
  if (from == kClassA) list_remove(list_a_, x);
  if (from == kClassB) list_remove(list_b_, x);
  if (to == kClassA) {
    pos_[x] = static_cast<std::uint32_t>(list_a_.size());
    list_a_.push_back(x);
  } else if (to == kClassB) {
    pos_[x] = static_cast<std::uint32_t>(list_b_.size());
    list_b_.push_back(x);
  }
}

void SimState::move_particle(std::uint32_t source, std::uint32_t dest) {
  const std::uint32_t ks = eta_[source];
  if (ks == 0) throw std::logic_error("move from an empty site");
  eta_[source] = ks - 1;
  --hist_[ks];
  ++hist_[ks - 1];
  if (const auto from = class_of(ks), to = class_of(ks - 1); from != to) {
    reclassify(source, from, to);
  }
  const std::uint32_t kd = eta_[dest];
  eta_[dest] = kd + 1;
  --hist_[kd];
  ++hist_[kd + 1];
  if (const auto from = class_of(kd), to = class_of(kd + 1); from != to) {
    reclassify(dest, from, to);
  }
  if (kd + 1 > max_) max_ = kd + 1;
  while (hist_[max_] == 0) --max_;
}

void SimState::check_consistency() const {
  std::uint64_t n = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  std::uint32_t mx = 0;
  std::vector<std::uint64_t> hist(hist_.size(), 0);
  for (std::uint32_t x = 0; x < eta_.size(); ++x) {
    const std::uint32_t k = eta_[x];
    n += k;
    if (k >= hist.size()) throw std::logic_error("occupation exceeds particle number");
    ++hist[k];
    mx = std::max(mx, k);
    const auto c = class_of(k);
    if (c == kClassA) {
      ++a;
      if (pos_[x] >= list_a_.size() || list_a_[pos_[x]] != x) {
        throw std::logic_error("class A list out of sync");
      }
    } else if (c == kClassB) {
      ++b;
      if (pos_[x] >= list_b_.size() || list_b_[pos_[x]] != x) {
        throw std::logic_error("class B list out of sync");
      }
    }
  }
  if (n != N_) throw std::logic_error("particle number not conserved");
  if (a != list_a_.size() || b != list_b_.size()) throw std::logic_error("class counts wrong");
  if (a + b + hist[0] != eta_.size()) throw std::logic_error("A + B + empty != L");
  if (hist != hist_) throw std::logic_error("occupancy histogram wrong");
  if (mx != max_) throw std::logic_error("max cursor wrong");
}

namespace {

// Source site with probability proportional to its rate. One uniform picks
// both the class and the site within it: u * total < c0 A selects class A and
// floor(u * total / c0) is then uniform on 0..A-1.
inline std::uint32_t pick_source(const SimState& state, double c0, double c1, double rate_a,
                                 double total, Rng& rng) {
  const double u = uniform01(rng) * total;
  if (u < rate_a) {
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u / c0), state.A() - 1);
    return state.site_in_a(i);
  }
  const auto i =
      std::min<std::size_t>(static_cast<std::size_t>((u - rate_a) / c1), state.B() - 1);
  return state.site_in_b(i);
}

}  // namespace

Event step(SimState& state, const RateModel& model, const Lattice& lattice, Rng& rng) {
  const double c0 = model.c0();
  const double c1 = model.c1();
  const double rate_a = c0 * static_cast<double>(state.A());
  const double total = rate_a + c1 * static_cast<double>(state.B());
  if (!(total > 0.0)) throw DomainError("no particles to move");
  state.time += exponential(rng, total);
  const std::uint32_t source = pick_source(state, c0, c1, rate_a, total, rng);
  const std::uint32_t dest = lattice.sample_destination(source, rng);
  state.move_particle(source, dest);
  ++state.events;
  return {state.time, source, dest};
}

InitialPhase initial_phase_from_string(std::string_view name) {
  if (name == "fluid") return InitialPhase::kFluid;
  if (name == "condensed") return InitialPhase::kCondensed;
  if (name == "uniform") return InitialPhase::kUniform;
  throw DomainError("unknown initial phase '" + std::string(name) + "'");
}

SimState init_state(const CanonicalSampler& sampler, InitialPhase phase, Rng& rng) {
  const std::size_t L = sampler.L();
  switch (phase) {
    case InitialPhase::kFluid:
      return SimState(sampler.sample(CanonicalPhase::kFluid, rng), sampler.R());
    case InitialPhase::kCondensed:
      return SimState(sampler.sample(CanonicalPhase::kCondensed, rng), sampler.R());
    case InitialPhase::kUniform: {
      std::vector<std::uint32_t> eta(L, 0);
      for (std::size_t i = 0; i < sampler.N(); ++i) ++eta[uniform_index(rng, L)];
      return SimState(std::move(eta), sampler.R());
    }
  }
  throw DomainError("unknown initial phase");
}

SimState init_state(std::size_t L, std::size_t N, const RateModel& model, InitialPhase phase,
                    Rng& rng) {
  if (phase == InitialPhase::kUniform) {
    std::vector<std::uint32_t> eta(L, 0);
    for (std::size_t i = 0; i < N; ++i) ++eta[uniform_index(rng, L)];
    return SimState(std::move(eta), model.cutoff(L, N));
  }
  return init_state(CanonicalSampler(L, N, model), phase, rng);
}

HittingTime run_to_hit(SimState& state, const RateModel& model, const Lattice& lattice,
                       HitTarget target, double t_max, Rng& rng) {
  const std::size_t R = state.R();
  const bool fluid = target == HitTarget::kFluidExit;
  if (fluid && state.max_occupation() > R) {
    throw BadInitial("fluid exit needs an initial state with max <= R");
  }
  if (!fluid && state.max_occupation() <= R) {
    throw BadInitial("condensed exit needs an initial state with max > R");
  }
  if (state.N() == 0) throw BadInitial("no particles");
  const double t0 = state.time;
  const std::uint64_t e0 = state.events;
  const double c0 = model.c0();
  const double c1 = model.c1();
  for (;;) {
    const double rate_a = c0 * static_cast<double>(state.A());
    const double total = rate_a + c1 * static_cast<double>(state.B());
    const double t_next = state.time + exponential(rng, total);
    if (t_next - t0 > t_max) {
      state.time = t0 + t_max;
      return {t_max, true, state.events - e0};
    }
    state.time = t_next;
    const std::uint32_t source = pick_source(state, c0, c1, rate_a, total, rng);
    state.move_particle(source, lattice.sample_destination(source, rng));
    ++state.events;
    if ((state.max_occupation() > R) == fluid) {
      return {state.time - t0, false, state.events - e0};
    }
  }
}

double default_t_max(std::size_t L, const RateModel& model) {
  return 1e9 / (model.c0() * static_cast<double>(L));
}

EventWriter::EventWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw ResourceError("cannot open event file " + path.string());
}

void EventWriter::write(const Event& event) {
  static_assert(std::endian::native == std::endian::little, "event log assumes little-endian");
  out_.write(reinterpret_cast<const char*>(&event.time), sizeof(double));
  out_.write(reinterpret_cast<const char*>(&event.source), sizeof(std::uint32_t));
  out_.write(reinterpret_cast<const char*>(&event.dest), sizeof(std::uint32_t));
}

std::vector<TrajectorySample> record_trajectory(SimState& state, const RateModel& model,
                                                const Lattice& lattice, double t_max,
                                                double sample_dt, Rng& rng,
                                                EventWriter* events) {
  if (!(sample_dt > 0.0)) throw DomainError("sample_dt must be positive");
  if (!(t_max >= 0.0)) throw DomainError("t_max must be nonnegative");
  const auto n_samples = static_cast<std::size_t>(std::floor(t_max / sample_dt)) + 1;
  const double L = static_cast<double>(state.L());
  const double t0 = state.time;
  std::vector<TrajectorySample> out;
  out.reserve(n_samples);
  auto snapshot = [&](double t) {
    out.push_back({t, static_cast<double>(state.sigma_bg()) / L,
                   static_cast<double>(state.max_occupation()) / L, state.A(), state.B()});
  };
  const double c0 = model.c0();
  const double c1 = model.c1();
  std::size_t next = 0;
  while (next < n_samples) {
    const double rate_a = c0 * static_cast<double>(state.A());
    const double total = rate_a + c1 * static_cast<double>(state.B());
    const double t_next = total > 0.0 ? state.time + exponential(rng, total) : kInf;
    // Grid points before the next jump see the current configuration.
    while (next < n_samples && t0 + static_cast<double>(next) * sample_dt < t_next) {
      snapshot(static_cast<double>(next) * sample_dt);
      ++next;
    }
    if (next >= n_samples) break;
    state.time = t_next;
    const std::uint32_t source = pick_source(state, c0, c1, rate_a, total, rng);
    const std::uint32_t dest = lattice.sample_destination(source, rng);
    state.move_particle(source, dest);
    ++state.events;
    if (events != nullptr) events->write({state.time, source, dest});
  }
  return out;
}

LifetimeStats summarize_lifetimes(const std::vector<HittingTime>& runs) {
  LifetimeStats s;
  s.replicas = runs.size();
  for (const auto& r : runs) {
    if (!r.censored) s.tau.push_back(r.tau);
  }
  s.uncensored = s.tau.size();
  s.censored_fraction =
      runs.empty() ? 0.0 : static_cast<double>(runs.size() - s.uncensored) / runs.size();
  if (s.uncensored > 0) {
    double sum = 0.0;
    for (const double t : s.tau) sum += t;
    s.mean = sum / static_cast<double>(s.uncensored);
  }
  if (s.uncensored > 1) {
    double ss = 0.0;
    for (const double t : s.tau) ss += (t - s.mean) * (t - s.mean);
    const double var = ss / static_cast<double>(s.uncensored - 1);
    s.std_error = std::sqrt(var / static_cast<double>(s.uncensored));
  }
  return s;
}

std::vector<LifetimeRecord> lifetime_sweep(const SweepOptions& options, const RateModel& model) {
  if (options.L_list.empty()) throw DomainError("lifetime sweep needs at least one L");
  if (!(options.rho > 0.0)) throw DomainError("lifetime sweep needs rho > 0");
  struct Task {
    std::size_t l_index;
    std::size_t replica;
    HitTarget target;
  };
  const std::size_t n_l = options.L_list.size();
  std::vector<CanonicalSampler> samplers;
  std::vector<Lattice> lattices;
  samplers.reserve(n_l);
  lattices.reserve(n_l);
  for (const std::size_t L : options.L_list) {
    const auto N = static_cast<std::size_t>(std::llround(options.rho * static_cast<double>(L)));
    samplers.emplace_back(L, N, model);
    lattices.emplace_back(L, options.kernel);
  }
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < n_l; ++i) {
    for (std::size_t r = 0; r < options.replicas; ++r) {
      if (options.fluid) tasks.push_back({i, r, HitTarget::kFluidExit});
      if (options.cond) tasks.push_back({i, r, HitTarget::kCondExit});
    }
  }
  std::vector<HittingTime> results(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    try {
      for (std::size_t k = cursor++; k < tasks.size() && !failed; k = cursor++) {
        const Task& task = tasks[k];
        const std::size_t L = options.L_list[task.l_index];
        const std::uint64_t stream =
            2 * task.replica + (task.target == HitTarget::kCondExit ? 1 : 0);
        Rng rng = make_stream(options.seed, L, stream);
        SimState state = init_state(samplers[task.l_index],
                                    task.target == HitTarget::kFluidExit
                                        ? InitialPhase::kFluid
                                        : InitialPhase::kCondensed,
                                    rng);
        const double t_max = options.t_max.value_or(default_t_max(L, model));
        results[k] = run_to_hit(state, model, lattices[task.l_index], task.target, t_max, rng);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, options.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<LifetimeRecord> out(n_l);
  std::vector<std::vector<HittingTime>> fluid(n_l);
  std::vector<std::vector<HittingTime>> cond(n_l);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    auto& bucket = tasks[k].target == HitTarget::kFluidExit ? fluid : cond;
    bucket[tasks[k].l_index].push_back(results[k]);
  }
  for (std::size_t i = 0; i < n_l; ++i) {
    out[i].L = samplers[i].L();
    out[i].N = samplers[i].N();
    out[i].R = samplers[i].R();
    if (options.fluid) out[i].fluid = summarize_lifetimes(fluid[i]);
    if (options.cond) out[i].cond = summarize_lifetimes(cond[i]);
  }
  return out;
}

}  // namespace zrp
