#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zrp/ensemble_gc.hpp"
#include "zrp/rate_model.hpp"

namespace zrp {

/// Boundaries of the stationary phase diagram at the model's a.
struct PhaseBoundaries {
  double rho_c = 0.0;   // grand-canonical critical density (a-dependent in particle mode)
  double phi_c = 0.0;
  double rho_c_background = 0.0;      // background density of the condensed phase
  std::optional<double> rho_meta;     // onset of the metastable condensed well; empty for a = 0
  double rho_trans = 0.0;
};

PhaseBoundaries phase_boundaries(const RateModel& model);

/// Phase label at density rho: "F(E)", "F", "F/C", "C/F", or "F(E)+F/C" where
/// the equivalence and metastable regions overlap (particle mode only).
std::string phase_label(double rho, const RateModel& model);

/// Transition density: root of the fluid/condensed entropy balance, rho_trans >= rho_c.
double rho_trans(const RateModel& model);

/// Density above which the rate function has a second well at rho_c.
/// Throws DomainError for a = 0.
double rho_meta(const RateModel& model);

/// Thermodynamic-limit canonical entropy density; the transition point itself
/// takes the condensed branch.
double s_can(double rho, const RateModel& model);
double s_can(double rho, const RateModel& model, double rho_transition);

/// Contribution of the condensate, a-scaled: a (lattice) or a * rho (particle mode).
double condensate_cutoff_density(double rho, const RateModel& model);

/// Large-deviation rate of Sigma_bg / L = rho_bg; +infinity for rho_bg > rho.
double rate_function(double rho, double rho_bg, const RateModel& model);

/// |difference| of the two branches at rho_bg = rho - a (0 when that point is negative).
double rate_function_branch_gap(double rho, const RateModel& model);

struct RateFunctionCurve {
  double rho = 0.0;
  std::vector<double> rho_bg;
  std::vector<double> I;
  std::vector<std::size_t> local_minima;  // indices into rho_bg
  std::vector<std::size_t> local_maxima;
};

/// Rate function sampled on a grid with discrete local extrema. Points where
/// I is +infinity never count as extrema; a finite endpoint is a minimum when
/// its only finite neighbour is larger.
RateFunctionCurve rate_function_curve(double rho, const std::vector<double>& rho_bg_grid,
                                      const RateModel& model);

struct LifetimeExponents {
  double xi_fluid = 0.0;
  double xi_cond = 0.0;
};

/// Exponential growth rates of the fluid and condensed lifetimes.
/// Defined for rho >= rho_meta; throws DomainError below.
LifetimeExponents lifetime_exponents(double rho, const RateModel& model);

/// Specific relative entropy h(pi_{L,N}, nu^L_{phi,R}) = log z_R - (N/L) log phi - log Z_{L,N} / L.
double relative_entropy_specific(std::size_t L, std::size_t N, const GrandCanonicalPoint& point,
                                 double log_Z_LN, const RateModel& model);
double relative_entropy_specific(std::size_t L, std::size_t N, double phi, const RateModel& model);
/// h(pi_{L,N}, nu_{phi_R(N/L), R}) with the fugacity matched to the density N / L.
double relative_entropy_matched(std::size_t L, std::size_t N, const RateModel& model);

}  // namespace zrp
