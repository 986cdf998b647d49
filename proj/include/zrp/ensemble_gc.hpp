#pragma once

#include <cstddef>
#include <cstdint>

#include "zrp/rate_model.hpp"
#include "zrp/rng.hpp"

namespace zrp {

/// Grand-canonical single-site measure at fugacity phi < c1 and cutoff R.
///
/// Close to criticality phi sits within 1e-30 of c1 and is not representable
/// as a double offset from c1, so the point carries log(c1 - phi) as well;
/// every computation below uses `log_gap`, `phi` is the rounded value.
struct GrandCanonicalPoint {
  double phi = 0.0;
  double log_gap = 0.0;  // log(c1 - phi)
  std::size_t R = 0;
  double log_z = 0.0;    // log z_R(phi)
  double rho = 0.0;      // rho_R(phi)
};

struct FluidPoint {
  double phi_inf = 0.0;
  double rho_inf = 0.0;
  double log_z_inf = 0.0;
  double p_fluid = 0.0;
  double s_fluid = 0.0;
};

struct CriticalPoint {
  double rho_c = 0.0;
  double phi_c = 0.0;
};

struct MarginalMoments {
  double mean = 0.0;
  double variance = 0.0;
  double log_variance = 0.0;
};

/// log w_R(k): -k log c0 up to R, then -R log c0 - (k - R) log c1.
double log_weight(std::uint64_t k, std::size_t R, const RateModel& model);

double log_z_R(double phi, std::size_t R, const RateModel& model);
double log_z_R_gap(double log_gap, std::size_t R, const RateModel& model);

/// Expected occupation phi * d/dphi log z_R(phi).
double rho_R(double phi, std::size_t R, const RateModel& model);
double rho_R_gap(double log_gap, std::size_t R, const RateModel& model);

GrandCanonicalPoint make_point(double phi, std::size_t R, const RateModel& model);
GrandCanonicalPoint make_point_gap(double log_gap, std::size_t R, const RateModel& model);

/// Fugacity with rho_R(phi) = rho, by bisection on log(c1 - phi).
GrandCanonicalPoint invert_phi(double rho, std::size_t R, const RateModel& model);

// Fluid-limit (R -> infinity) quantities.
double phi_inf(double rho, const RateModel& model);
double rho_inf(double phi, const RateModel& model);
double p_fluid(double phi, const RateModel& model);
double s_fluid(double rho, const RateModel& model);
FluidPoint fluid_from_rho(double rho, const RateModel& model);
FluidPoint fluid_from_phi(double phi, const RateModel& model);

/// rho_c and phi_c; both depend on a in particle-dependent mode.
CriticalPoint critical_density(const RateModel& model);

/// Grand-canonical entropy density (negative Legendre transform of p_gcan).
double s_gcan(double rho, const RateModel& model);

/// nu^1_{phi,R}(k) in log form.
double log_marginal_probability(std::uint64_t k, const GrandCanonicalPoint& point,
                                const RateModel& model);

/// Log of the probability that a single site exceeds R.
double log_tail_probability(const GrandCanonicalPoint& point, const RateModel& model);

/// Exact mean and variance of the single-site marginal (closed-form geometric sums).
MarginalMoments marginal_moments(const GrandCanonicalPoint& point, const RateModel& model);

/// Draw from nu^1_{phi,R} by two-piece geometric inversion.
std::uint64_t sample_marginal(const GrandCanonicalPoint& point, const RateModel& model, Rng& rng);

}  // namespace zrp
