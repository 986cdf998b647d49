#include "zrp/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "zrp/ensemble_gc.hpp"
#include "zrp/errors.hpp"
#include "zrp/rng.hpp"

namespace zrp {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InsufficientData("least squares needs at least 2 paired points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InsufficientData("least squares needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = x.size();
  if (x.size() > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      sse += r * r;
    }
    f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return f;
}

double ks_exponential(std::vector<double> sample) {
  if (sample.empty()) throw InsufficientData("KS statistic of an empty sample");
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = -std::expm1(-std::max(0.0, sample[i]));
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n));
  }
  return d;
}

std::vector<double> normalize_by_mean(const std::vector<double>& tau) {
  if (tau.empty()) return {};
  double mean = 0.0;
  for (const double t : tau) mean += t;
  mean /= static_cast<double>(tau.size());
  std::vector<double> out(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) out[i] = tau[i] / mean;
  return out;
}

ExponentFit fit_lifetime_exponent(const std::vector<LifetimeRecord>& records, Branch branch) {
  std::vector<const LifetimeRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->L < b->L; });
  ExponentFit out;
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& stats = branch == Branch::kFluid ? sorted[i]->fluid : sorted[i]->cond;
    if (!stats || stats->uncensored == 0) continue;
    if (i == 0 && stats->censored_fraction > 0.2) {
      out.dropped_smallest = true;
      continue;
    }
    x.push_back(static_cast<double>(sorted[i]->L));
    y.push_back(std::log(stats->mean));
    out.used_L.push_back(sorted[i]->L);
  }
  if (x.size() < 3) throw InsufficientData("fewer than 3 uncensored L points for the fit");
  out.fit = least_squares(x, y);
  return out;
}

BatchReport lln_batches(std::size_t L, std::size_t R, double rho, const RateModel& model,
                        std::size_t batches, std::uint64_t seed) {
  if (L == 0 || batches == 0) throw DomainError("lln check needs L >= 1 and batches >= 1");
  const auto point = invert_phi(rho, R, model);
  // Fixed-R regime: the bulk critical density c1 / (c0 - c1) in either cutoff mode.
  const double rho_c = model.c1() / (model.c0() - model.c1());
  BatchReport report;
  report.phi = point.phi;
  report.target = std::min(rho, rho_c);
  report.tail_bound = static_cast<double>(L) *
                      std::exp(0.5 * static_cast<double>(R) * (model.log_c1() - model.log_c0()));
  for (std::size_t b = 0; b < batches; ++b) {
    Rng rng = make_stream(seed, L, b);
    double sum = 0.0;
    bool exceeded = false;
    for (std::size_t x = 0; x < L; ++x) {
      const std::uint64_t k = sample_marginal(point, model, rng);
      sum += static_cast<double>(k);
      report.max_occupation = std::max(report.max_occupation, k);
      if (k > R) exceeded = true;
    }
    if (exceeded) ++report.batches_exceeding_R;
    const double mean = sum / static_cast<double>(L);
    report.means.push_back(mean);
    report.max_deviation = std::max(report.max_deviation, std::abs(mean - report.target));
  }
  return report;
}

}  // namespace zrp
