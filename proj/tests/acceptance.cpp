// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. Pass criterion numbers as arguments
// to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "zrp/analysis.hpp"
#include "zrp/canonical.hpp"
#include "zrp/ensemble_gc.hpp"
#include "zrp/kmc.hpp"
#include "zrp/lattice.hpp"
#include "zrp/logspace.hpp"
#include "zrp/state_space.hpp"
#include "zrp/thermo.hpp"

using namespace zrp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const RateModel kLattice(2.0, 1.0, 0.5);
const RateModel kParticle(2.0, 1.0, 0.5, CutoffMode::kParticleDep);

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. Exact stationarity of the product measure and KMC occupancy on (L=3, N=4, R=2).
Outcome stationarity_oracle() {
  const int L = 3, N = 4, R = 2;
  const double c0 = 2.0, c1 = 1.0;
  std::vector<std::vector<int>> states;
  oracle::for_each_config(L, N, [&](const std::vector<int>& eta) { states.push_back(eta); });
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;
  std::vector<double> pi(states.size());
  double z = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    double w = 1.0;
    for (int k : states[i]) w *= oracle::weight(k, R, c0, c1);
    pi[i] = w;
    z += w;
  }
  for (auto& p : pi) p /= z;

  // Residual of pi Q for the symmetric nearest-neighbour ring, assembled directly.
  auto rate = [&](int k) { return k == 0 ? 0.0 : (k <= R ? c0 : c1); };
  std::vector<double> flow(states.size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (int x = 0; x < L; ++x) {
      const double g = rate(states[i][x]);
      if (g == 0.0) continue;
      for (int d : {-1, 1}) {
        auto next = states[i];
        --next[x];
        ++next[(x + d + L) % L];
        const double q = 0.5 * g;
        flow[index[next]] += pi[i] * q;
        flow[i] -= pi[i] * q;
      }
    }
  }
  double residual = 0.0;
  for (double f : flow) residual = std::max(residual, std::abs(f));
  const RateModel model = RateModel(c0, c1, 0.0).with_cutoff(R);
  const auto report = check_stationarity(L, N, R, model, Lattice(L, symmetric_nearest_neighbour()));
  residual = std::max(residual, report.max_residual);

  const Lattice lattice(L, symmetric_nearest_neighbour());
  Rng rng = make_stream(1, L, 0);
  SimState state(std::vector<std::uint32_t>{4, 0, 0}, R);
  std::vector<double> occupancy(states.size(), 0.0);
  std::vector<int> key(L);
  for (long i = 0; i < 10'000'000; ++i) {
    const double t0 = state.time;
    for (int x = 0; x < L; ++x) key[x] = static_cast<int>(state.occupations()[x]);
    const std::size_t idx = index[key];
    step(state, model, lattice, rng);
    occupancy[idx] += state.time - t0;
  }
  for (auto& o : occupancy) o /= state.time;
  const double tv = total_variation(occupancy, pi);
  return {states.size() == 15 && residual <= 1e-12 && tv <= 0.01,
          fmt::format("states={} residual={:.3g} TV={:.5f}", states.size(), residual, tv)};
}

// 2. Recursion against brute-force enumeration.
Outcome recursion_vs_enumeration() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const double c0 = 0.2 + 5.0 * u(gen);
    const double c1 = c0 * (0.02 + 0.96 * u(gen));
    const RateModel m(c0, c1, 0.0);
    for (int R = 0; R <= 4; ++R) {
      const CanonicalTable t(5, 8, R, m);
      for (int L = 1; L <= 5; ++L) {
        for (int N = 0; N <= 8; ++N) {
          const double exact = std::log(oracle::partition(L, N, R, c0, c1));
          worst = std::max(worst, std::abs(t.log_Z(L, N) - exact));
        }
      }
    }
  }
  return {worst <= 1e-9, fmt::format("max |log Z - log Z_enum| = {:.3g}", worst)};
}

// Finite-size entropy convergence shared by criteria 3 and 9.
Outcome entropy_convergence(const RateModel& model) {
  const double rt = rho_trans(model);
  const std::vector<std::size_t> sizes = {100, 200, 400};
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) {
    const double rho = 0.1 * i;
    if (std::abs(rho - rt) > 0.2) grid.push_back(rho);
  }
  std::vector<std::vector<double>> diff(sizes.size());
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    const std::size_t L = sizes[j];
    const auto N_max = static_cast<std::size_t>(std::llround(5.0 * L));
    std::optional<CanonicalTable> table;
    if (model.mode() == CutoffMode::kLatticeDep) table.emplace(build_canonical_table(L, N_max, model));
    for (const double rho : grid) {
      const auto N = static_cast<std::size_t>(std::llround(rho * L));
      const double lz = table ? table->log_Z(L, N) : log_partition(L, N, model);
      diff[j].push_back(std::abs(lz / L - s_can(rho, model)));
    }
  }
  std::string broken;
  double worst = 0.0;
  double worst_rho = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(diff[0][i] > diff[1][i] && diff[1][i] > diff[2][i])) {
      broken += fmt::format(" rho={:.1f}:{:.4f}/{:.4f}/{:.4f}", grid[i], diff[0][i], diff[1][i],
                            diff[2][i]);
    }
    if (diff[2][i] > worst) worst = diff[2][i], worst_rho = grid[i];
  }
  return {broken.empty() && worst <= 0.05,
          fmt::format("{} densities, rho_trans={:.4f}, max |diff| at L=400 = {:.4f} (rho={:.1f}), "
                      "non-monotone:{}",
                      grid.size(), rt, worst, worst_rho, broken.empty() ? " none" : broken)};
}

// 3. Entropy convergence in lattice mode.
Outcome entropy_lattice() { return entropy_convergence(kLattice); }

// 4. Condensed-to-fluid partition ratio at the transition.
Outcome condensate_constant() {
  const double rt = rho_trans(kLattice);
  const double target = std::sqrt(4.0 * std::numbers::pi);
  std::vector<double> ratio, prob;
  for (std::size_t L : {100, 200, 400}) {
    const auto N = static_cast<std::size_t>(std::llround(rt * L));
    const auto d = phase_decomposition(L, N, kLattice);
    ratio.push_back(std::exp(d.log_Z_m[1] - d.log_Z_m[0]) / std::pow(L, 1.5));
    prob.push_back(d.probabilities[1]);
  }
  const double rel = std::abs(ratio[2] - target) / target;
  const bool approaching = std::abs(ratio[0] - target) > std::abs(ratio[1] - target) &&
                           std::abs(ratio[1] - target) > std::abs(ratio[2] - target);
  const bool increasing = prob[0] < prob[1] && prob[1] < prob[2];
  return {rel <= 0.2 && approaching && increasing,
          fmt::format("ratio = {:.5f}, {:.5f}, {:.5f} (target {:.5f}, rel err {:.3f}); "
                      "pi(X1) = {:.6f}, {:.6f}, {:.6f}",
                      ratio[0], ratio[1], ratio[2], target, rel, prob[0], prob[1], prob[2])};
}

// 5. Specific relative entropy at L = 400.
Outcome relative_entropy_limits() {
  const std::size_t L = 400;
  const double h_low = relative_entropy_matched(L, 200, kLattice);
  const double h_high = relative_entropy_matched(L, 1200, kLattice);
  const double target = 0.5 * std::log(2.0);
  return {h_low <= 0.02 && std::abs(h_high - target) <= 0.05,
          fmt::format("h(0.5) = {:.5f}, h(3) = {:.5f} (target {:.5f})", h_low, h_high, target)};
}

// 6. Batch means of the grand-canonical marginal above criticality.
Outcome law_of_large_numbers() {
  const auto rep = lln_batches(10'000, 100, 2.0, RateModel(2.0, 1.0, 0.0), 100, 6);
  double worst = 0.0;
  for (double m : rep.means) worst = std::max(worst, std::abs(m - 1.0));
  return {rep.means.size() == 100 && worst <= 0.05 && rep.batches_exceeding_R == 0,
          fmt::format("max |mean - 1| = {:.4f}, batches exceeding R = {}, max occupation = {}",
                      worst, rep.batches_exceeding_R, rep.max_occupation)};
}

// 7. Lifetime exponents from the replica sweep.
Outcome lifetime_exponents_fit() {
  SweepOptions o;
  o.L_list = {20, 28, 36, 44, 52};
  o.rho = 2.5;
  o.replicas = 200;
  // Far above the largest mean (about 3e6 at L = 52) so every replica is uncensored.
  o.t_max = 1e11;
  o.seed = 7;
  o.workers = worker_count();
  const auto recs = lifetime_sweep(o, kLattice);
  std::size_t min_uncensored = o.replicas;
  for (const auto& r : recs) {
    min_uncensored = std::min({min_uncensored, r.fluid->uncensored, r.cond->uncensored});
  }
  const auto xi = lifetime_exponents(2.5, kLattice);
  const auto fluid = fit_lifetime_exponent(recs, Branch::kFluid);
  const auto cond = fit_lifetime_exponent(recs, Branch::kCond);
  const double ef = std::abs(fluid.fit.slope - xi.xi_fluid) / xi.xi_fluid;
  const double ec = std::abs(cond.fit.slope - xi.xi_cond) / xi.xi_cond;
  std::string means;
  for (const auto& r : recs) {
    means += fmt::format(" L={}:{:.4g}/{:.4g}", r.L, r.fluid->mean, r.cond->mean);
  }
  return {min_uncensored >= 200 && ef <= 0.15 && ec <= 0.15,
          fmt::format("fluid {:.4f} vs {:.4f} (rel {:.3f}), cond {:.4f} vs {:.4f} (rel {:.3f}), "
                      "min uncensored {}; means{}",
                      fluid.fit.slope, xi.xi_fluid, ef, cond.fit.slope, xi.xi_cond, ec,
                      min_uncensored, means)};
}

// 8. Exponential law of the condensed lifetime at the transition.
Outcome exponential_law() {
  SweepOptions o;
  o.L_list = {36};
  o.rho = rho_trans(kLattice);
  o.replicas = 500;
  o.seed = 8;
  o.workers = worker_count();
  o.fluid = false;
  const auto recs = lifetime_sweep(o, kLattice);
  const auto& s = *recs.front().cond;
  const double ks = ks_exponential(normalize_by_mean(s.tau));
  return {s.uncensored == 500 && ks <= 0.08,
          fmt::format("N={} samples={} mean={:.4g} KS={:.4f}", recs.front().N, s.uncensored,
                      s.mean, ks)};
}

// 9. Particle-number dependent cutoff.
Outcome particle_variant() {
  const double rc = critical_density(kParticle).rho_c;
  const double rm = rho_meta(kParticle);
  const double rc_exact = 1.0 / (std::sqrt(2.0) - 1.0);
  const bool values = std::abs(rc - rc_exact) <= 1e-9 && std::abs(rm - 2.0) <= 1e-9;

  std::vector<double> x, y;
  for (int i = 0; i <= 2000; ++i) x.push_back(0.005 * i);
  for (int i = 1; i <= 60; ++i) x.push_back(10.0 * std::pow(10.0, i / 10.0));
  for (const double r : x) y.push_back(s_can(r, kParticle));
  const auto hull = oracle::upper_hull_values(x, y);
  double hull_err = 0.0;
  for (std::size_t i = 0; x[i] <= 8.0; ++i) {
    hull_err = std::max(hull_err, std::abs(hull[i] - s_gcan(x[i], kParticle)));
  }
  const auto conv = entropy_convergence(kParticle.with_a(0.2));
  return {values && hull_err <= 1e-4 && conv.pass,
          fmt::format("rho_c = {:.10f}, rho_meta = {:.10f}, hull err = {:.2g}; a=0.2: {}", rc, rm,
                      hull_err, conv.detail)};
}

// 10. Wells of the rate function and the exponent crossing.
Outcome rate_function_structure() {
  std::vector<double> grid;
  for (int i = 0; i <= 4000; ++i) grid.push_back(0.001 * i);
  const double rc = critical_density(kLattice).rho_c;
  const double step = 0.001;
  auto argmin = [](const RateFunctionCurve& c) {
    return c.rho_bg[std::min_element(c.I.begin(), c.I.end()) - c.I.begin()];
  };
  const auto c12 = rate_function_curve(1.2, grid, kLattice);
  const auto c18 = rate_function_curve(1.8, grid, kLattice);
  const auto c30 = rate_function_curve(3.0, grid, kLattice);
  const bool ok12 = c12.local_minima.size() == 1;
  const bool ok18 = c18.local_minima.size() == 2 && std::abs(argmin(c18) - 1.8) <= step;
  const bool ok30 = c30.local_minima.size() == 2 && std::abs(argmin(c30) - rc) <= step;
  const auto xi = lifetime_exponents(rho_trans(kLattice), kLattice);
  const double gap = std::abs(xi.xi_fluid - xi.xi_cond);
  return {ok12 && ok18 && ok30 && gap <= 1e-10,
          fmt::format("minima {}/{}/{}, global at {:.3f} and {:.3f}, |xi_f - xi_c| = {:.2g}",
                      c12.local_minima.size(), c18.local_minima.size(), c30.local_minima.size(),
                      argmin(c18), argmin(c30), gap)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"stationarity oracle", stationarity_oracle},
      {"recursion vs enumeration", recursion_vs_enumeration},
      {"entropy convergence", entropy_lattice},
      {"condensate partition constant", condensate_constant},
      {"relative entropy limits", relative_entropy_limits},
      {"law of large numbers with cutoff", law_of_large_numbers},
      {"lifetime exponents", lifetime_exponents_fit},
      {"exponential lifetime law", exponential_law},
      {"particle-dependent cutoff", particle_variant},
      {"rate function structure", rate_function_structure},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} criterion {}: {} [{}] ({:.1f} s)\n", out.pass ? "PASS" : "FAIL",
                             id, criteria[i].first, out.detail, secs)
              << std::flush;
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
