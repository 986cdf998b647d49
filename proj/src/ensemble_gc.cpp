#include "zrp/ensemble_gc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

namespace {

// log(phi) for phi = c1 - exp(log_gap), accurate in both limits phi -> 0 and phi -> c1.
double log_phi_from_gap(double log_gap, const RateModel& model) {
  const double x = log_gap - model.log_c1();  // log(delta / c1) <= 0
  if (x >= 0.0) return kNegInf;
  if (x < -0.6931471805599453) return model.log_c1() + std::log1p(-std::exp(x));
  return model.log_c1() + std::log(-std::expm1(x));
}

double phi_from_gap(double log_gap, const RateModel& model) {
  const double x = log_gap - model.log_c1();
  if (x >= 0.0) return 0.0;
  return -model.c1() * std::expm1(x);
}

double log_gap_from_phi(double phi, const RateModel& model) {
  if (!(phi >= 0.0) || !(phi < model.c1())) {
    throw DomainError("fugacity must lie in [0, c1): z_R diverges for phi >= c1 (phi = " +
                      std::to_string(phi) + ")");
  }
  return std::log(model.c1() - phi);
}

struct GapTerms {
  double log_phi;
  double log_c0_minus_phi;
  double log_q;       // log(phi / c0)
  double tail_power;  // (R + 1) log q
};

GapTerms gap_terms(double log_gap, std::size_t R, const RateModel& model) {
  GapTerms t{};
  t.log_phi = log_phi_from_gap(log_gap, model);
  t.log_c0_minus_phi = log_add(std::log(model.c0() - model.c1()), log_gap);
  t.log_q = t.log_phi - model.log_c0();
  t.tail_power = t.log_phi == kNegInf ? kNegInf : static_cast<double>(R + 1) * t.log_q;
  return t;
}

}  // namespace

double log_weight(std::uint64_t k, std::size_t R, const RateModel& model) {
  if (k <= R) return -static_cast<double>(k) * model.log_c0();
  return -static_cast<double>(R) * model.log_c0() -
         static_cast<double>(k - R) * model.log_c1();
}

double log_z_R_gap(double log_gap, std::size_t R, const RateModel& model) {
  const GapTerms t = gap_terms(log_gap, R, model);
  const double log_c0_minus_c1 = std::log(model.c0() - model.c1());
  return model.log_c0() - t.log_c0_minus_phi + log1p_exp(t.tail_power + log_c0_minus_c1 - log_gap);
}

double log_z_R(double phi, std::size_t R, const RateModel& model) {
  return log_z_R_gap(log_gap_from_phi(phi, model), R, model);
}

double rho_R_gap(double log_gap, std::size_t R, const RateModel& model) {
  const GapTerms t = gap_terms(log_gap, R, model);
  if (t.log_phi == kNegInf) return 0.0;
  const double fluid = std::exp(t.log_phi - t.log_c0_minus_phi);
  const double log_c0_minus_c1 = std::log(model.c0() - model.c1());
  const double log_num =
      t.tail_power + log_add(std::log(static_cast<double>(R) + 1.0), t.log_phi - log_gap);
  const double log_den = log_add(log_gap - log_c0_minus_c1, t.tail_power);
  return fluid + std::exp(log_num - log_den);
}

double rho_R(double phi, std::size_t R, const RateModel& model) {
  return rho_R_gap(log_gap_from_phi(phi, model), R, model);
}

GrandCanonicalPoint make_point_gap(double log_gap, std::size_t R, const RateModel& model) {
  GrandCanonicalPoint p;
  p.log_gap = log_gap;
  p.phi = phi_from_gap(log_gap, model);
  p.R = R;
  p.log_z = log_z_R_gap(log_gap, R, model);
  p.rho = rho_R_gap(log_gap, R, model);
  return p;
}

GrandCanonicalPoint make_point(double phi, std::size_t R, const RateModel& model) {
  return make_point_gap(log_gap_from_phi(phi, model), R, model);
}

GrandCanonicalPoint invert_phi(double rho, std::size_t R, const RateModel& model) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("invert_phi requires rho >= 0");
  const double top = model.log_c1();  // phi = 0
  if (rho == 0.0) return make_point_gap(top, R, model);

  // rho_R is strictly decreasing in log(c1 - phi) and unbounded as the gap closes.
  double hi = top;
  double step = 1.0;
  double lo = top - step;
  while (rho_R_gap(lo, R, model) < rho) {
    step *= 2.0;
    lo = top - step;
    if (step > 1e7) throw DomainError("invert_phi: density out of numerical range");
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (rho_R_gap(mid, R, model) > rho) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  const double err_lo = std::abs(rho_R_gap(lo, R, model) - rho);
  const double err_hi = std::abs(rho_R_gap(hi, R, model) - rho);
  return make_point_gap(err_lo < err_hi ? lo : hi, R, model);
}

double phi_inf(double rho, const RateModel& model) {
  if (!(rho >= 0.0)) throw DomainError("phi_inf requires rho >= 0");
  return model.c0() * rho / (1.0 + rho);
}

double rho_inf(double phi, const RateModel& model) {
  if (!(phi >= 0.0) || !(phi < model.c0())) {
    throw DomainError("fluid-limit fugacity must lie in [0, c0)");
  }
  return phi / (model.c0() - phi);
}

double p_fluid(double phi, const RateModel& model) {
  if (!(phi >= 0.0) || !(phi < model.c0())) {
    throw DomainError("fluid pressure defined only for phi in [0, c0)");
  }
  return model.log_c0() - std::log(model.c0() - phi);
}

double s_fluid(double rho, const RateModel& model) {
  if (!(rho >= 0.0)) throw DomainError("s_fluid requires rho >= 0");
  if (rho == 0.0) return 0.0;
  return (1.0 + rho) * std::log1p(rho) - rho * (model.log_c0() + std::log(rho));
}

FluidPoint fluid_from_rho(double rho, const RateModel& model) {
  FluidPoint f;
  f.rho_inf = rho;
  f.phi_inf = phi_inf(rho, model);
  f.log_z_inf = p_fluid(f.phi_inf, model);
  f.p_fluid = f.log_z_inf;
  f.s_fluid = s_fluid(rho, model);
  return f;
}

FluidPoint fluid_from_phi(double phi, const RateModel& model) {
  FluidPoint f;
  f.phi_inf = phi;
  f.rho_inf = rho_inf(phi, model);
  f.log_z_inf = p_fluid(phi, model);
  f.p_fluid = f.log_z_inf;
  f.s_fluid = s_fluid(f.rho_inf, model);
  return f;
}

CriticalPoint critical_density(const RateModel& model) {
  if (model.mode() == CutoffMode::kLatticeDep) {
    return {model.c1() / (model.c0() - model.c1()), model.c1()};
  }
  const double e = 1.0 - model.a();
  const double c1e = std::pow(model.c1(), e);
  return {c1e / (std::pow(model.c0(), e) - c1e),
          model.c1() * std::exp(model.a() * model.log_ratio())};
}

double s_gcan(double rho, const RateModel& model) {
  const CriticalPoint crit = critical_density(model);
  if (rho <= crit.rho_c) return s_fluid(rho, model);
  return s_fluid(crit.rho_c, model) - (rho - crit.rho_c) * std::log(crit.phi_c);
}

double log_marginal_probability(std::uint64_t k, const GrandCanonicalPoint& point,
                                const RateModel& model) {
  const double log_phi = log_phi_from_gap(point.log_gap, model);
  if (log_phi == kNegInf) return k == 0 ? 0.0 : kNegInf;
  return log_weight(k, point.R, model) + static_cast<double>(k) * log_phi - point.log_z;
}

double log_tail_probability(const GrandCanonicalPoint& point, const RateModel& model) {
  const double log_phi = log_phi_from_gap(point.log_gap, model);
  if (log_phi == kNegInf) return kNegInf;
  const double log_q = log_phi - model.log_c0();
  return static_cast<double>(point.R) * log_q + log_phi - point.log_gap - point.log_z;
}

MarginalMoments marginal_moments(const GrandCanonicalPoint& point, const RateModel& model) {
  const double log_phi = log_phi_from_gap(point.log_gap, model);
  if (log_phi == kNegInf) return {0.0, 0.0, kNegInf};
  const double log_q = log_phi - model.log_c0();
  const double q = std::exp(log_q);

  // Truncated geometric part k = 0..R, terms q^k <= 1.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, qk = 1.0;
  for (std::size_t k = 0; k <= point.R; ++k) {
    const auto kd = static_cast<double>(k);
    s0 += qk;
    s1 += kd * qk;
    s2 += kd * kd * qk;
    qk *= q;
  }

  // Tail k = R + j, j >= 1, weight q^R r^j with r = phi / c1 and 1 - r = delta / c1.
  const double Rd = static_cast<double>(point.R);
  const double log_qR = Rd * log_q;
  const double log_r = log_phi - model.log_c1();
  const double log_1mr = point.log_gap - model.log_c1();
  const double g1 = log_r - log_1mr;                                   // r/(1-r)
  const double g2 = log_r - 2.0 * log_1mr;                             // r/(1-r)^2
  const double g3 = log_r + std::log1p(std::exp(log_r)) - 3.0 * log_1mr;  // r(1+r)/(1-r)^3
  const double logR = point.R > 0 ? std::log(Rd) : kNegInf;

  const double t0 = log_qR + g1;
  const double t1 = log_qR + log_add(logR + g1, g2);
  const double t2 =
      log_qR + log_add(log_add(2.0 * logR + g1, std::log(2.0) + logR + g2), g3);

  const double log_norm = log_add(std::log(s0), t0);
  const double log_m1 = log_add(s1 > 0 ? std::log(s1) : kNegInf, t1) - log_norm;
  const double log_m2 = log_add(s2 > 0 ? std::log(s2) : kNegInf, t2) - log_norm;

  MarginalMoments m;
  m.mean = std::exp(log_m1);
  m.log_variance = log_sub(log_m2, 2.0 * log_m1);
  m.variance = std::exp(m.log_variance);
  return m;
}

std::uint64_t sample_marginal(const GrandCanonicalPoint& point, const RateModel& model, Rng& rng) {
  const double log_phi = log_phi_from_gap(point.log_gap, model);
  if (log_phi == kNegInf) return 0;
  const double p_tail = std::exp(log_tail_probability(point, model));
  if (uniform01(rng) < p_tail) {
    // Geometric on j >= 1 with ratio r = phi / c1.
    const double log_r = log_phi - model.log_c1();
    const double j = std::floor(std::log(uniform_open0(rng)) / log_r);
    constexpr double kCap = 9.0e18;  // saturate instead of overflowing uint64
    return point.R + 1 + static_cast<std::uint64_t>(std::min(j, kCap));
  }
  // Truncated geometric on 0..R with ratio q = phi / c0.
  const double log_q = log_phi - model.log_c0();
  const double mass = -std::expm1(static_cast<double>(point.R + 1) * log_q);
  const double k = std::floor(std::log1p(-uniform01(rng) * mass) / log_q);
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(k, 0.0)), point.R);
}

}  // namespace zrp
