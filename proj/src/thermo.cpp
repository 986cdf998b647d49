#include "zrp/thermo.hpp"

#include <cmath>
#include <limits>

#include "zrp/canonical.hpp"
#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

namespace {

double background_critical_density(const RateModel& model) {
  return model.c1() / (model.c0() - model.c1());
}

// Condensed-minus-fluid entropy balance whose root is rho_trans.
double transition_balance(double rho, const RateModel& model) {
  const double rc = background_critical_density(model);
  const double gain = s_fluid(rc, model) - (rho - rc) * model.log_c1() - s_fluid(rho, model);
  if (model.mode() == CutoffMode::kLatticeDep) return gain / model.log_ratio() - model.a();
  return gain / (rho * model.log_ratio()) - model.a();
}

}  // namespace

double rho_trans(const RateModel& model) {
  const double rc = background_critical_density(model);
  if (model.a() == 0.0) return rc;
  double lo = rc;
  double width = std::max(1.0, model.a());
  double hi = rc + width;
  while (transition_balance(hi, model) <= 0.0) {
    width *= 2.0;
    hi = rc + width;
    if (width > 1e12) throw DomainError("rho_trans: no bracket found");
  }
  for (int iter = 0; iter < 300 && hi - lo > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (transition_balance(mid, model) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double rho_meta(const RateModel& model) {
  if (model.a() == 0.0) throw DomainError("rho_meta: no metastable region for a = 0");
  const double rc = background_critical_density(model);
  if (model.mode() == CutoffMode::kLatticeDep) return rc + model.a();
  return rc / (1.0 - model.a());
}

PhaseBoundaries phase_boundaries(const RateModel& model) {
  PhaseBoundaries b;
  const CriticalPoint crit = critical_density(model);
  b.rho_c = crit.rho_c;
  b.phi_c = crit.phi_c;
  b.rho_c_background = background_critical_density(model);
  if (model.a() > 0.0) b.rho_meta = rho_meta(model);
  b.rho_trans = rho_trans(model);
  return b;
}

double condensate_cutoff_density(double rho, const RateModel& model) {
  return model.mode() == CutoffMode::kLatticeDep ? model.a() : model.a() * rho;
}

double s_can(double rho, const RateModel& model, double rho_transition) {
  if (!(rho >= 0.0)) throw DomainError("s_can requires rho >= 0");
  if (rho < rho_transition || (model.a() == 0.0 && rho == rho_transition)) {
    return s_fluid(rho, model);
  }
  const double rc = background_critical_density(model);
  if (model.mode() == CutoffMode::kLatticeDep) {
    return s_fluid(rc, model) - (rho - rc) * model.log_c1() - model.a() * model.log_ratio();
  }
  return s_fluid(rc, model) - rho * (model.a() * model.log_ratio() + model.log_c1()) +
         rc * model.log_c1();
}

double s_can(double rho, const RateModel& model) { return s_can(rho, model, rho_trans(model)); }

double rate_function(double rho, double rho_bg, const RateModel& model) {
  if (!(rho > 0.0)) throw DomainError("rate_function requires rho > 0");
  if (!(rho_bg >= 0.0)) throw DomainError("rate_function requires rho_bg >= 0");
  if (rho_bg > rho) return kInf;
  const double cut = condensate_cutoff_density(rho, model);
  const double base = s_can(rho, model) - s_fluid(rho_bg, model);
  if (rho_bg >= rho - cut) return base + (rho - rho_bg) * model.log_c0();
  return base + (rho - rho_bg) * model.log_c1() + cut * model.log_ratio();
}

double rate_function_branch_gap(double rho, const RateModel& model) {
  const double cut = condensate_cutoff_density(rho, model);
  const double x = rho - cut;
  if (x < 0.0) return 0.0;
  const double fluid_branch = (rho - x) * model.log_c0();
  const double cond_branch = (rho - x) * model.log_c1() + cut * model.log_ratio();
  return std::abs(fluid_branch - cond_branch);
}

RateFunctionCurve rate_function_curve(double rho, const std::vector<double>& rho_bg_grid,
                                      const RateModel& model) {
  RateFunctionCurve c;
  c.rho = rho;
  c.rho_bg = rho_bg_grid;
  c.I.reserve(rho_bg_grid.size());
  const double transition = rho_trans(model);
  const double s = s_can(rho, model, transition);
  const double cut = condensate_cutoff_density(rho, model);
  for (double x : rho_bg_grid) {
    if (x > rho) {
      c.I.push_back(kInf);
      continue;
    }
    const double base = s - s_fluid(x, model);
    c.I.push_back(x >= rho - cut ? base + (rho - x) * model.log_c0()
                                 : base + (rho - x) * model.log_c1() + cut * model.log_ratio());
  }
  const std::size_t n = c.I.size();
  auto finite = [&](std::size_t i) { return std::isfinite(c.I[i]); };
  for (std::size_t i = 0; i < n; ++i) {
    if (!finite(i)) continue;
    const bool has_left = i > 0 && finite(i - 1);
    const bool has_right = i + 1 < n && finite(i + 1);
    if (!has_left && !has_right) continue;
    const bool below_left = !has_left || c.I[i] < c.I[i - 1];
    const bool below_right = !has_right || c.I[i] < c.I[i + 1];
    const bool above_left = has_left && c.I[i] > c.I[i - 1];
    const bool above_right = has_right && c.I[i] > c.I[i + 1];
    if (below_left && below_right) c.local_minima.push_back(i);
    if (above_left && above_right) c.local_maxima.push_back(i);
  }
  return c;
}

LifetimeExponents lifetime_exponents(double rho, const RateModel& model) {
  if (model.a() == 0.0) throw DomainError("lifetime exponents require a > 0");
  const double onset = rho_meta(model);
  if (rho < onset) {
    throw DomainError("lifetime exponents undefined below rho_meta: the fluid phase never "
                      "exits and the condensed phase is unstable");
  }
  const double rc = background_critical_density(model);
  const double cut = condensate_cutoff_density(rho, model);
  LifetimeExponents xi;
  xi.xi_fluid = s_fluid(rho, model) - s_fluid(rho - cut, model) + cut * model.log_c0();
  xi.xi_cond = s_fluid(rc, model) - s_fluid(rho - cut, model) + (rc + cut - rho) * model.log_c1();
  return xi;
}

double relative_entropy_specific(std::size_t L, std::size_t N, const GrandCanonicalPoint& point,
                                 double log_Z_LN, const RateModel& model) {
  if (L == 0) throw DomainError("relative entropy requires L >= 1");
  if (!(point.phi > 0.0)) throw DomainError("relative entropy requires phi > 0");
  // log phi from the gap keeps full precision when phi is within rounding of c1.
  const double x = point.log_gap - model.log_c1();
  const double log_phi = model.log_c1() + std::log1p(-std::exp(x));
  const double Ld = static_cast<double>(L);
  return point.log_z - (static_cast<double>(N) / Ld) * log_phi - log_Z_LN / Ld;
}

double relative_entropy_specific(std::size_t L, std::size_t N, double phi, const RateModel& model) {
  if (!(phi > 0.0) || !(phi < model.c1())) {
    throw DomainError("relative entropy requires 0 < phi < c1");
  }
  const std::size_t R = model.cutoff(L, N);
  const GrandCanonicalPoint point = make_point(phi, R, model);
  return relative_entropy_specific(L, N, point, log_partition(L, N, model), model);
}

double relative_entropy_matched(std::size_t L, std::size_t N, const RateModel& model) {
  if (L == 0 || N == 0) throw DomainError("relative entropy requires L >= 1 and N >= 1");
  const std::size_t R = model.cutoff(L, N);
  const GrandCanonicalPoint point =
      invert_phi(static_cast<double>(N) / static_cast<double>(L), R, model);
  return relative_entropy_specific(L, N, point, log_partition(L, N, model), model);
}

std::string phase_label(double rho, const RateModel& model) {
  if (!(rho >= 0.0)) throw DomainError("phase label requires rho >= 0");
  const double rc = critical_density(model).rho_c;
  if (model.a() == 0.0) return rho <= rc ? "F(E)" : "C/F";
  const double rt = rho_trans(model);
  if (rho >= rt) return "C/F";
  const double rm = rho_meta(model);
  const bool equivalent = rho <= rc;
  const bool metastable = rho > rm;
  if (equivalent && metastable) return "F(E)+F/C";
  if (equivalent) return "F(E)";
  if (metastable) return "F/C";
  return "F";
}

}  // namespace zrp
