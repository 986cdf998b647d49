#include "zrp/rate_model.hpp"

#include <cmath>
#include <string>

#include "zrp/errors.hpp"

namespace zrp {

std::string_view to_string(CutoffMode mode) {
  return mode == CutoffMode::kLatticeDep ? "lattice" : "particle";
}

CutoffMode cutoff_mode_from_string(std::string_view name) {
  if (name == "lattice" || name == "L" || name == "lattice_dep") return CutoffMode::kLatticeDep;
  if (name == "particle" || name == "N" || name == "particle_dep") return CutoffMode::kParticleDep;
  throw DomainError("unknown cutoff mode '" + std::string(name) + "' (expected lattice|particle)");
}

RateModel::RateModel(double c0, double c1, double a, CutoffMode mode,
                     std::optional<std::size_t> explicit_R)
    : c0_(c0), c1_(c1), a_(a), mode_(mode), explicit_R_(explicit_R) {
  if (!(c1 > 0.0) || !(c0 > c1) || !std::isfinite(c0)) {
    throw DomainError("rate model requires c0 > c1 > 0");
  }
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("rate model requires a >= 0");
  if (mode == CutoffMode::kParticleDep && !(a < 1.0)) {
    throw DomainError("particle-dependent cutoff requires a < 1");
  }
  log_c0_ = std::log(c0);
  log_c1_ = std::log(c1);
}

std::size_t RateModel::cutoff(std::size_t L, std::size_t N) const {
  if (explicit_R_) return *explicit_R_;
  const double size = mode_ == CutoffMode::kLatticeDep ? static_cast<double>(L)
                                                        : static_cast<double>(N);
  // a*size is often an integer in exact arithmetic (0.29*100); absorb the
  // representation error before flooring.
  return static_cast<std::size_t>(std::floor(a_ * size + 1e-9));
}

}  // namespace zrp
