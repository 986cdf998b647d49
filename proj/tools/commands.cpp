#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>

#include <fmt/format.h>

#include "output.hpp"
#include "zrp/analysis.hpp"
#include "zrp/canonical.hpp"
#include "zrp/ensemble_gc.hpp"
#include "zrp/errors.hpp"
#include "zrp/kmc.hpp"
#include "zrp/lattice.hpp"
#include "zrp/state_space.hpp"
#include "zrp/thermo.hpp"

namespace zrp::cli {

namespace {

using Row = std::vector<std::string>;

std::string num(double x) { return format_number(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }

struct Context {
  const Config& config;
  RateModel model;
  std::uint64_t seed;
  std::uint64_t hash;
  std::filesystem::path out;
  std::size_t workers;
  bool svg;

  Context(const Config& c, const RunOptions& o)
      : config(c), model(c.model()), seed(c.seed(o.seed)), hash(c.hash()), svg(o.svg) {
    out = !o.out_dir.empty() ? o.out_dir : std::filesystem::path(c.get_string("run", "out", "."));
    workers = o.workers ? *o.workers : c.get_uint("run", "workers", 1);
    if (workers == 0) c.fail("run", "workers", "must be at least 1");
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw ResourceError("cannot create output directory " + out.string());
  }

  CsvWriter csv(const std::string& file, const std::string& kind,
                const std::vector<std::string>& columns) const {
    return CsvWriter(out / file, kind, hash, seed, columns);
  }

  std::string params() const {
    return fmt::format("c0={};c1={};a={};mode={}", model.c0(), model.c1(), model.a(),
                       to_string(model.mode()));
  }
};

JumpKernel kernel_from(const Config& c, const std::string& section) {
  const std::string name = c.get_string(section, "kernel", "symmetric");
  try {
    return kernel_from_name(name, c.get_double(section, "p_right", 1.0),
                            static_cast<int>(c.get_uint(section, "range", 1)));
  } catch (const DomainError& e) {
    c.fail(section, "kernel", e.what());
  }
}

std::vector<std::size_t> sizes(const Config& c, const std::string& section,
                               const std::string& key, std::size_t min_value) {
  std::vector<std::size_t> out;
  for (const auto v : c.get_uint_list(section, key)) {
    if (v < min_value) c.fail(section, key, fmt::format("values must be at least {}", min_value));
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> nonnegative_grid(const Config& c, const std::string& section,
                                     const std::string& key) {
  auto g = c.get_grid(section, key);
  for (const double v : g) {
    if (v < 0.0) c.fail(section, key, "values must be nonnegative");
  }
  return g;
}

// rho_meta with its a = 0 limit, where it coincides with rho_c.
double rho_meta_or_limit(const RateModel& m) {
  return m.a() == 0.0 ? critical_density(m).rho_c : rho_meta(m);
}

}  // namespace

int cmd_phase_diagram(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto a_grid = nonnegative_grid(config, "phase_diagram", "a");
  const bool particle = ctx.model.mode() == CutoffMode::kParticleDep;
  for (const double a : a_grid) {
    if (particle && a >= 1.0) config.fail("phase_diagram", "a", "particle mode needs a < 1");
  }
  std::vector<ExperimentRecord> records;
  auto csv = ctx.csv("phase_diagram.csv", "phase-diagram",
                     {"a", "rho_c", "rho_meta", "rho_trans", "overlap"});
  Series sc{"rho_c", {}, {}}, sm{"rho_meta", {}, {}}, st{"rho_trans", {}, {}};
  for (const double a : a_grid) {
    const RateModel m = ctx.model.with_a(a);
    const auto b = phase_boundaries(m);
    const double meta = rho_meta_or_limit(m);
    const bool overlap = particle && a > 0.0;
    csv.row({num(a), num(b.rho_c), num(meta), num(b.rho_trans), overlap ? "1" : "0"});
    sc.x.push_back(b.rho_c), sc.y.push_back(a);
    sm.x.push_back(meta), sm.y.push_back(a);
    st.x.push_back(b.rho_trans), st.y.push_back(a);
    const std::string p = fmt::format("a={}", a);
    records.push_back({p, "rho_c", b.rho_c, {}, {}, "analytic"});
    records.push_back({p, "rho_meta", meta, {}, {}, "analytic"});
    records.push_back({p, "rho_trans", b.rho_trans, {}, {}, "analytic"});
  }
  if (config.has("phase_diagram", "rho")) {
    const auto rho_grid = nonnegative_grid(config, "phase_diagram", "rho");
    auto labels = ctx.csv("phase_labels.csv", "phase-labels", {"a", "rho", "label"});
    for (const double a : a_grid) {
      const RateModel m = ctx.model.with_a(a);
      for (const double rho : rho_grid) labels.row({num(a), num(rho), phase_label(rho, m)});
    }
  }
  write_records(ctx.out / "phase_diagram_records.csv", "phase-diagram", ctx.hash, ctx.seed,
                records);
  if (ctx.svg) {
    write_svg(ctx.out / "phase_diagram.svg", "Phase diagram", "rho", "a", {sc, sm, st});
  }
  std::cout << fmt::format("phase-diagram: {} a values -> {}\n", a_grid.size(), ctx.out.string());
  return kExitOk;
}

int cmd_entropy(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto rho_grid = nonnegative_grid(config, "entropy", "rho");
  std::vector<std::size_t> L_list;
  if (config.has("entropy", "L")) L_list = sizes(config, "entropy", "L", 1);
  const double rmax = *std::max_element(rho_grid.begin(), rho_grid.end());
  const bool particle = ctx.model.mode() == CutoffMode::kParticleDep;
  const double rt = rho_trans(ctx.model);

  std::vector<std::string> cols = {"rho", "s_fluid", "s_gcan", "s_can"};
  for (const auto L : L_list) cols.push_back(fmt::format("s_can_L{}", L));
  auto csv = ctx.csv("entropy.csv", "entropy", cols);
  csv.comment(fmt::format("rho_trans={}", num(rt)));
  std::vector<ExperimentRecord> records;

  // Finite-size estimates (1/L) log Z_{L,N} at N = round(rho L).
  std::vector<std::vector<double>> finite(L_list.size());
  for (std::size_t j = 0; j < L_list.size(); ++j) {
    const std::size_t L = L_list[j];
    const auto N_max = static_cast<std::size_t>(std::llround(rmax * static_cast<double>(L)));
    std::optional<CanonicalTable> table;
    if (!particle) table.emplace(build_canonical_table(L, N_max, ctx.model));
    for (const double rho : rho_grid) {
      const auto N = static_cast<std::size_t>(std::llround(rho * static_cast<double>(L)));
      const double lz = table ? table->log_Z(L, N) : log_partition(L, N, ctx.model);
      finite[j].push_back(lz / static_cast<double>(L));
    }
  }
  Series s_f{"s_fluid", {}, {}}, s_g{"s_gcan", {}, {}}, s_c{"s_can", {}, {}};
  std::vector<Series> s_L;
  for (const auto L : L_list) s_L.push_back({fmt::format("L={}", L), {}, {}, true});
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    const double f = s_fluid(rho, ctx.model);
    const double g = s_gcan(rho, ctx.model);
    const double c = s_can(rho, ctx.model, rt);
    Row row = {num(rho), num(f), num(g), num(c)};
    const std::string p = fmt::format("rho={}", rho);
    records.push_back({p, "s_fluid", f, {}, {}, "analytic"});
    records.push_back({p, "s_gcan", g, {}, {}, "analytic"});
    records.push_back({p, "s_can", c, {}, {}, "analytic"});
    for (std::size_t j = 0; j < L_list.size(); ++j) {
      row.push_back(num(finite[j][i]));
      records.push_back({fmt::format("rho={};L={}", rho, L_list[j]), "s_can_L", finite[j][i], {},
                         {}, "recursion"});
      s_L[j].x.push_back(rho);
      s_L[j].y.push_back(finite[j][i]);
    }
    csv.row(row);
    s_f.x.push_back(rho), s_f.y.push_back(f);
    s_g.x.push_back(rho), s_g.y.push_back(g);
    s_c.x.push_back(rho), s_c.y.push_back(c);
  }

  if (config.has("entropy", "phi")) {
    const auto phi_grid = nonnegative_grid(config, "entropy", "phi");
    const auto R_list = config.has("entropy", "pressure_R")
                            ? sizes(config, "entropy", "pressure_R", 0)
                            : std::vector<std::size_t>{2, 4, 8};
    const double phi_c = critical_density(ctx.model).phi_c;
    std::vector<std::string> pcols = {"phi", "p_fluid", "p_gcan"};
    for (const auto R : R_list) pcols.push_back(fmt::format("log_z_R{}", R));
    auto pcsv = ctx.csv("pressure.csv", "pressure", pcols);
    std::vector<Series> ps = {{"p_fluid", {}, {}}, {"p_gcan", {}, {}}};
    for (const auto R : R_list) ps.push_back({fmt::format("log z_R, R={}", R), {}, {}});
    for (const double phi : phi_grid) {
      const double pf = phi < ctx.model.c0() ? p_fluid(phi, ctx.model) : kInf;
      const double pg = phi <= phi_c ? pf : kInf;
      Row row = {num(phi), num(pf), num(pg)};
      ps[0].x.push_back(phi), ps[0].y.push_back(pf);
      ps[1].x.push_back(phi), ps[1].y.push_back(pg);
      for (std::size_t k = 0; k < R_list.size(); ++k) {
        const double lz = phi < ctx.model.c1() ? log_z_R(phi, R_list[k], ctx.model) : kInf;
        row.push_back(num(lz));
        ps[k + 2].x.push_back(phi), ps[k + 2].y.push_back(lz);
      }
      pcsv.row(row);
    }
    if (ctx.svg) write_svg(ctx.out / "pressure.svg", "Pressure", "phi", "p", ps);
  }
  write_records(ctx.out / "entropy_records.csv", "entropy", ctx.hash, ctx.seed, records);
  if (ctx.svg) {
    std::vector<Series> all = {s_f, s_g, s_c};
    all.insert(all.end(), s_L.begin(), s_L.end());
    write_svg(ctx.out / "entropy.svg", "Entropy densities", "rho", "s", all);
  }
  std::cout << fmt::format("entropy: {} densities, {} sizes -> {}\n", rho_grid.size(),
                           L_list.size(), ctx.out.string());
  return kExitOk;
}

int cmd_rate_function(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto rho_list = config.get_grid("rate_function", "rho");
  for (const double rho : rho_list) {
    if (!(rho > 0.0)) config.fail("rate_function", "rho", "densities must be positive");
  }
  const auto bg = nonnegative_grid(config, "rate_function", "rho_bg");
  auto csv = ctx.csv("rate_function.csv", "rate-function", {"rho", "rho_bg", "I"});
  auto ext = ctx.csv("rate_function_extrema.csv", "rate-function-extrema",
                     {"rho", "kind", "rho_bg", "I"});
  auto marks = ctx.csv("rate_function_marks.csv", "rate-function-marks",
                       {"rho", "rho_c", "rho_minus_a", "I_at_rho_c", "I_at_rho_minus_a",
                        "I_at_rho", "branch_gap"});
  const double rc = critical_density(ctx.model).rho_c;
  std::vector<Series> series;
  double worst_gap = 0.0;
  for (const double rho : rho_list) {
    const auto curve = rate_function_curve(rho, bg, ctx.model);
    Series s{fmt::format("rho={}", rho), {}, {}};
    for (std::size_t i = 0; i < bg.size(); ++i) {
      csv.row({num(rho), num(bg[i]), num(curve.I[i])});
      s.x.push_back(bg[i]);
      s.y.push_back(curve.I[i]);
    }
    for (const auto i : curve.local_minima) ext.row({num(rho), "min", num(bg[i]), num(curve.I[i])});
    for (const auto i : curve.local_maxima) ext.row({num(rho), "max", num(bg[i]), num(curve.I[i])});
    const double cut = rho - condensate_cutoff_density(rho, ctx.model);
    const double gap = rate_function_branch_gap(rho, ctx.model);
    worst_gap = std::max(worst_gap, gap);
    marks.row({num(rho), num(rc), num(cut), num(rate_function(rho, rc, ctx.model)),
               cut >= 0.0 ? num(rate_function(rho, cut, ctx.model)) : "nan",
               num(rate_function(rho, rho, ctx.model)), num(gap)});
    series.push_back(std::move(s));
  }
  if (ctx.svg) write_svg(ctx.out / "rate_function.svg", "Rate function", "rho_bg", "I", series);
  std::cout << fmt::format("rate-function: max branch gap {} ({})\n", num(worst_gap),
                           worst_gap <= 1e-12 ? "ok" : "exceeds 1e-12");
  return kExitOk;
}

int cmd_lifetimes(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto rho_list = config.get_grid("lifetimes", "rho");
  const auto L_list = sizes(config, "lifetimes", "L", 2);
  const auto replicas = config.get_uint("lifetimes", "replicas");
  if (replicas == 0) config.fail("lifetimes", "replicas", "must be at least 1");
  std::optional<double> t_max;
  if (config.has("lifetimes", "t_max")) {
    t_max = config.get_double("lifetimes", "t_max");
    if (!(*t_max > 0.0)) config.fail("lifetimes", "t_max", "must be positive");
  }
  const JumpKernel kernel = kernel_from(config, "lifetimes");
  const double meta = rho_meta_or_limit(ctx.model);
  for (const double rho : rho_list) {
    if (!(rho > meta)) {
      config.fail("lifetimes", "rho",
                  fmt::format("densities must exceed rho_meta = {} for two-phase statistics",
                              num(meta)));
    }
  }

  auto table = ctx.csv("lifetimes.csv", "lifetimes",
                       {"rho", "L", "N", "R", "branch", "replicas", "uncensored",
                        "censored_fraction", "mean", "std_error"});
  auto fits = ctx.csv("lifetime_fit.csv", "lifetime-fit",
                      {"rho", "branch", "xi_fit", "xi_fit_stderr", "xi_theory", "relative_error",
                       "points", "dropped_smallest"});
  auto ks = ctx.csv("lifetime_ks.csv", "lifetime-ks", {"rho", "L", "branch", "samples", "ks"});
  auto tail = ctx.csv("lifetime_tail.csv", "lifetime-tail",
                      {"rho", "L", "branch", "x", "empirical_tail", "exp_tail"});
  auto raw = ctx.csv("lifetimes_raw.csv", "lifetimes-raw", {"rho", "L", "branch", "index", "tau"});
  std::vector<ExperimentRecord> records;
  std::vector<Series> plots;
  bool insufficient = false;
  for (const double rho : rho_list) {
    SweepOptions o;
    o.L_list = L_list;
    o.rho = rho;
    o.replicas = replicas;
    o.t_max = t_max;
    o.seed = ctx.seed;
    o.workers = ctx.workers;
    o.kernel = kernel;
    const auto recs = lifetime_sweep(o, ctx.model);
    const auto xi = lifetime_exponents(rho, ctx.model);
    for (const auto branch : {Branch::kFluid, Branch::kCond}) {
      const std::string name = branch == Branch::kFluid ? "fluid" : "cond";
      Series pts{fmt::format("{} rho={}", name, rho), {}, {}, true};
      for (const auto& r : recs) {
        const auto& s = branch == Branch::kFluid ? *r.fluid : *r.cond;
        table.row({num(rho), num(std::uint64_t(r.L)), num(std::uint64_t(r.N)),
                   num(std::uint64_t(r.R)), name, num(std::uint64_t(s.replicas)),
                   num(std::uint64_t(s.uncensored)), num(s.censored_fraction), num(s.mean),
                   num(s.std_error)});
        records.push_back({fmt::format("rho={};L={}", rho, r.L), "mean_tau_" + name, s.mean,
                           s.std_error, s.censored_fraction, "simulation"});
        for (std::size_t i = 0; i < s.tau.size(); ++i) {
          raw.row({num(rho), num(std::uint64_t(r.L)), name, num(std::uint64_t(i)), num(s.tau[i])});
        }
        if (!s.tau.empty()) {
          auto x = normalize_by_mean(s.tau);
          ks.row({num(rho), num(std::uint64_t(r.L)), name, num(std::uint64_t(x.size())),
                  num(ks_exponential(x))});
          std::sort(x.begin(), x.end());
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double emp = 1.0 - static_cast<double>(i) / static_cast<double>(x.size());
            tail.row({num(rho), num(std::uint64_t(r.L)), name, num(x[i]), num(emp),
                      num(std::exp(-x[i]))});
          }
          pts.x.push_back(static_cast<double>(r.L));
          pts.y.push_back(std::log(s.mean));
        }
      }
      const double theory = branch == Branch::kFluid ? xi.xi_fluid : xi.xi_cond;
      try {
        const auto f = fit_lifetime_exponent(recs, branch);
        const double rel = theory != 0.0 ? std::abs(f.fit.slope - theory) / theory : kInf;
        fits.row({num(rho), name, num(f.fit.slope), num(f.fit.slope_stderr), num(theory),
                  num(rel), num(std::uint64_t(f.fit.points)), f.dropped_smallest ? "1" : "0"});
        records.push_back({fmt::format("rho={}", rho), "xi_fit_" + name, f.fit.slope,
                           f.fit.slope_stderr, {}, "simulation"});
        std::cout << fmt::format("lifetimes: rho={} {}: xi_fit={:.5f} xi={:.5f} rel_err={:.3f}\n",
                                 rho, name, f.fit.slope, theory, rel);
      } catch (const InsufficientData& e) {
        insufficient = true;
        fits.row({num(rho), name, "nan", "nan", num(theory), "nan", "0", "0"});
        std::cerr << fmt::format("lifetimes: rho={} {}: {}\n", rho, name, e.what());
      }
      records.push_back({fmt::format("rho={}", rho), "xi_" + name, theory, {}, {}, "analytic"});
      plots.push_back(std::move(pts));
    }
  }
  if (config.has("lifetimes", "xi_rho")) {
    auto curve = ctx.csv("xi_curve.csv", "xi-curve", {"rho", "xi_fluid", "xi_cond"});
    Series xf{"xi_fluid", {}, {}}, xc{"xi_cond", {}, {}};
    for (const double rho : config.get_grid("lifetimes", "xi_rho")) {
      if (rho < meta) continue;
      const auto xi = lifetime_exponents(rho, ctx.model);
      curve.row({num(rho), num(xi.xi_fluid), num(xi.xi_cond)});
      xf.x.push_back(rho), xf.y.push_back(xi.xi_fluid);
      xc.x.push_back(rho), xc.y.push_back(xi.xi_cond);
    }
    if (ctx.svg) write_svg(ctx.out / "xi_curve.svg", "Lifetime exponents", "rho", "xi", {xf, xc});
  }
  write_records(ctx.out / "lifetimes_records.csv", "lifetimes", ctx.hash, ctx.seed, records);
  if (ctx.svg) write_svg(ctx.out / "lifetimes.svg", "log mean lifetime", "L", "log tau", plots);
  if (insufficient) throw InsufficientData("fewer than 3 uncensored L points for a fit");
  return kExitOk;
}

int cmd_lln_check(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto L_list = sizes(config, "lln", "L", 1);
  const auto R_list = sizes(config, "lln", "R", 0);
  const auto rho_list = nonnegative_grid(config, "lln", "rho");
  const auto batches = config.get_uint("lln", "batches", 100);
  if (batches == 0) config.fail("lln", "batches", "must be at least 1");
  auto csv = ctx.csv("lln.csv", "lln-check",
                     {"L", "R", "rho", "phi", "batches", "mean_of_means", "target",
                      "max_deviation", "batches_exceeding_R", "max_occupation", "tail_bound",
                      "in_regime"});
  auto detail = ctx.csv("lln_batches.csv", "lln-batches", {"L", "R", "rho", "batch", "mean"});
  std::vector<ExperimentRecord> records;
  std::uint64_t stream = 0;
  for (const auto L : L_list) {
    for (const auto R : R_list) {
      const double logL = std::log(static_cast<double>(L));
      if (static_cast<double>(R) < 5.0 * logL) {
        std::cerr << fmt::format("lln-check: warning: R={} is not large against log L={:.2f}\n",
                                 R, logL);
      }
      for (const double rho : rho_list) {
        // Distinct seed per (L, R, rho) cell so the cells are independent.
        const auto rep = lln_batches(L, R, rho, ctx.model, batches, splitmix64(ctx.seed + stream++));
        double mean = 0.0;
        for (const double m : rep.means) mean += m / static_cast<double>(rep.means.size());
        const bool regime = rep.tail_bound * static_cast<double>(batches) < 0.01;
        csv.row({num(std::uint64_t(L)), num(std::uint64_t(R)), num(rho), num(rep.phi),
                 num(batches), num(mean), num(rep.target), num(rep.max_deviation),
                 num(std::uint64_t(rep.batches_exceeding_R)), num(rep.max_occupation),
                 num(rep.tail_bound), regime ? "1" : "0"});
        for (std::size_t b = 0; b < rep.means.size(); ++b) {
          detail.row({num(std::uint64_t(L)), num(std::uint64_t(R)), num(rho),
                      num(std::uint64_t(b)), num(rep.means[b])});
        }
        const double se = [&] {
          double ss = 0.0;
          for (const double m : rep.means) ss += (m - mean) * (m - mean);
          return rep.means.size() > 1
                     ? std::sqrt(ss / static_cast<double>(rep.means.size() - 1) /
                                 static_cast<double>(rep.means.size()))
                     : 0.0;
        }();
        records.push_back({fmt::format("L={};R={};rho={}", L, R, rho), "batch_mean", mean, se,
                           {}, "simulation"});
        std::cout << fmt::format(
            "lln-check: L={} R={} rho={}: mean {:.4f} target {:.4f} max dev {:.4f} "
            "exceed {}/{}{}\n",
            L, R, rho, mean, rep.target, rep.max_deviation, rep.batches_exceeding_R, batches,
            regime ? "" : " (outside the almost-sure regime)");
      }
    }
  }
  write_records(ctx.out / "lln_records.csv", "lln-check", ctx.hash, ctx.seed, records);
  return kExitOk;
}

int cmd_oracle(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto L = config.get_uint("oracle", "L", 3);
  const auto N = config.get_uint("oracle", "N", 4);
  const auto R = config.has("oracle", "R") ? config.get_uint("oracle", "R")
                                           : ctx.model.cutoff(L, N);
  const auto events = config.get_uint("oracle", "events", 10'000'000);
  const double tv_tol = config.get_double("oracle", "tv_tolerance", 0.01);
  const double residual_tol = config.get_double("oracle", "residual_tolerance", 1e-12);
  if (L < 2 || L > 6) config.fail("oracle", "L", "full enumeration needs 2 <= L <= 6");
  if (N > 8) config.fail("oracle", "N", "full enumeration needs N <= 8");
  if (N == 0) config.fail("oracle", "N", "needs at least one particle");
  const JumpKernel kernel = kernel_from(config, "oracle");
  Lattice lattice(L, kernel);

  const RateModel model = ctx.model.with_cutoff(R);
  const auto report = check_stationarity(L, N, R, model, lattice, residual_tol);
  const StateSpace space(L, N);
  const auto pi = space.stationary(model, R);

  // Time-weighted empirical state distribution of one long run.
  Rng rng = make_stream(ctx.seed, L, 0);
  std::vector<std::uint32_t> eta(L, 0);
  eta[0] = static_cast<std::uint32_t>(N);
  SimState state(eta, R);
  std::vector<double> occupancy(space.size(), 0.0);
  double total = 0.0;
  for (std::uint64_t i = 0; i < events; ++i) {
    const double before = state.time;
    const std::size_t idx = space.index_of(state.occupations());
    step(state, model, lattice, rng);
    occupancy[idx] += state.time - before;
    total += state.time - before;
  }
  for (auto& o : occupancy) o /= total;
  const double tv = total_variation(occupancy, pi);

  struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
  };
  std::vector<Check> checks = {
      {"generator_residual", report.max_residual, residual_tol,
       report.max_residual <= residual_tol},
      {"kmc_total_variation", tv, tv_tol, tv <= tv_tol},
  };
  if (kernel.is_symmetric()) {
    checks.push_back({"detailed_balance_defect", report.max_balance_defect, residual_tol,
                      report.detailed_balance});
  }
  auto csv = ctx.csv("oracle.csv", "oracle", {"check", "value", "threshold", "pass"});
  csv.comment(fmt::format("L={} N={} R={} states={} events={}", L, N, R, report.states, events));
  auto dist = ctx.csv("oracle_distribution.csv", "oracle-distribution",
                      {"state", "pi", "empirical"});
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::string label;
    for (const auto k : space.state(i)) label += (label.empty() ? "" : " ") + std::to_string(k);
    dist.row({label, num(pi[i]), num(occupancy[i])});
  }
  bool ok = true;
  for (const auto& c : checks) {
    csv.row({c.name, num(c.value), num(c.threshold), c.pass ? "1" : "0"});
    std::cout << fmt::format("{} {} = {} (threshold {})\n", c.pass ? "PASS" : "FAIL", c.name,
                             num(c.value), num(c.threshold));
    ok = ok && c.pass;
  }
  if (!kernel.is_symmetric()) {
    std::cout << fmt::format("info detailed balance {} for this asymmetric kernel (defect {})\n",
                             report.detailed_balance ? "holds" : "fails",
                             num(report.max_balance_defect));
  }
  return ok ? kExitOk : kExitOracleFailure;
}

int cmd_simulate(const Config& config, const RunOptions& options) {
  const Context ctx(config, options);
  const auto L = config.get_uint("simulate", "L");
  if (L < 2) config.fail("simulate", "L", "needs at least 2 sites");
  std::uint64_t N = 0;
  if (config.has("simulate", "N")) {
    N = config.get_uint("simulate", "N");
  } else {
    const double rho = config.get_double("simulate", "rho");
    if (rho < 0.0) config.fail("simulate", "rho", "must be nonnegative");
    N = static_cast<std::uint64_t>(std::llround(rho * static_cast<double>(L)));
  }
  if (N == 0) config.fail("simulate", "N", "needs at least one particle");
  InitialPhase init = InitialPhase::kUniform;
  try {
    init = initial_phase_from_string(config.get_string("simulate", "init", "uniform"));
  } catch (const DomainError& e) {
    config.fail("simulate", "init", e.what());
  }
  const double t_max = config.get_double("simulate", "t_max");
  const double dt = config.get_double("simulate", "sample_dt");
  if (!(t_max > 0.0)) config.fail("simulate", "t_max", "must be positive");
  if (!(dt > 0.0)) config.fail("simulate", "sample_dt", "must be positive");
  const Lattice lattice(L, kernel_from(config, "simulate"));
  Rng rng = make_stream(ctx.seed, L, 0);
  SimState state = init_state(L, N, ctx.model, init, rng);
  std::optional<EventWriter> events;
  if (config.has("simulate", "events_file")) {
    events.emplace(ctx.out / config.get_string("simulate", "events_file"));
  }
  const auto traj = record_trajectory(state, ctx.model, lattice, t_max, dt, rng,
                                      events ? &*events : nullptr);
  auto csv = ctx.csv("trajectory.csv", "trajectory",
                     {"t", "sigma_bg_per_L", "max_per_L", "A", "B"});
  csv.comment(fmt::format("L={} N={} R={} events={}", L, N, state.R(), state.events));
  Series bg{"sigma_bg/L", {}, {}}, mx{"max/L", {}, {}};
  for (const auto& p : traj) {
    csv.row({num(p.t), num(p.sigma_bg_per_L), num(p.max_per_L), num(std::uint64_t(p.A)),
             num(std::uint64_t(p.B))});
    bg.x.push_back(p.t), bg.y.push_back(p.sigma_bg_per_L);
    mx.x.push_back(p.t), mx.y.push_back(p.max_per_L);
  }
  if (ctx.svg) write_svg(ctx.out / "trajectory.svg", "Trajectory", "t", "per site", {bg, mx});
  std::cout << fmt::format("simulate: {} events, {} samples -> {}\n", state.events, traj.size(),
                           ctx.out.string());
  return kExitOk;
}

int run_command(const std::string& name, const std::filesystem::path& config_path,
                const RunOptions& options) {
  static const std::map<std::string, std::function<int(const Config&, const RunOptions&)>>
      commands = {
          {"phase-diagram", cmd_phase_diagram}, {"entropy", cmd_entropy},
          {"rate-function", cmd_rate_function}, {"lifetimes", cmd_lifetimes},
          {"lln-check", cmd_lln_check},         {"oracle", cmd_oracle},
          {"simulate", cmd_simulate},
      };
  const auto it = commands.find(name);
  if (it == commands.end()) {
    std::cerr << "unknown command " << name << "\n";
    return kExitOther;
  }
  try {
    const Config config = Config::from_file(config_path);
    return it->second(config, options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace zrp::cli
