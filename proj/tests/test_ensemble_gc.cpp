#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "zrp/ensemble_gc.hpp"
#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"
#include "zrp/rng.hpp"

using namespace zrp;

namespace {
const RateModel kModel(2.0, 1.0, 0.5);
const double kLog2 = std::log(2.0);
}  // namespace

TEST_SUITE("rate_model") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS(RateModel(1.0, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(RateModel(2.0, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(RateModel(2.0, 1.0, -0.1), DomainError);
    CHECK_THROWS_AS(RateModel(2.0, 1.0, 1.0, CutoffMode::kParticleDep), DomainError);
    CHECK_NOTHROW(RateModel(2.0, 1.0, 1.0, CutoffMode::kLatticeDep));
  }

  TEST_CASE("cutoff rules") {
    CHECK(kModel.cutoff(100, 254) == 50);
    CHECK(kModel.cutoff(101, 7) == 50);
    const RateModel pd(2.0, 1.0, 0.5, CutoffMode::kParticleDep);
    CHECK(pd.cutoff(100, 254) == 127);
    CHECK(pd.cutoff(100, 3) == 1);
    const RateModel fixed(2.0, 1.0, 0.5, CutoffMode::kLatticeDep, 7);
    CHECK(fixed.cutoff(1000, 1000) == 7);
    // 0.3 * 10 is 2.9999999999999996 in binary floating point.
    CHECK(RateModel(2.0, 1.0, 0.3).cutoff(10, 0) == 3);
  }

  TEST_CASE("rates") {
    CHECK(kModel.rate(0, 3) == 0.0);
    CHECK(kModel.rate(3, 3) == 2.0);
    CHECK(kModel.rate(4, 3) == 1.0);
  }

  TEST_CASE("mode names") {
    CHECK(cutoff_mode_from_string("lattice") == CutoffMode::kLatticeDep);
    CHECK(cutoff_mode_from_string("particle") == CutoffMode::kParticleDep);
    CHECK_THROWS_AS(cutoff_mode_from_string("bogus"), DomainError);
  }
}

TEST_SUITE("ensemble_gc") {
  TEST_CASE("log_weight") {
    CHECK(log_weight(0, 4, kModel) == 0.0);
    CHECK(log_weight(3, 5, kModel) == doctest::Approx(-3.0 * kLog2).epsilon(1e-15));
    CHECK(log_weight(7, 5, kModel) == doctest::Approx(-5.0 * kLog2).epsilon(1e-15));
    const RateModel m(3.0, 1.5, 0.0);
    for (int k = 0; k < 20; ++k) {
      CHECK(log_weight(k, 6, m) == doctest::Approx(std::log(oracle::weight(k, 6, 3.0, 1.5))));
    }
  }

  TEST_CASE("z_R against truncated series") {
    CHECK(log_z_R(0.0, 7, kModel) == 0.0);
    const double series = oracle::z_series(0.5, 4, 2.0, 1.0, 200);
    CHECK(std::abs(std::exp(log_z_R(0.5, 4, kModel)) / series - 1.0) <= 1e-10);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      const double c0 = 1.0 + 4.0 * u(gen);
      const double c1 = c0 * (0.1 + 0.8 * u(gen));
      const int R = static_cast<int>(gen() % 30);
      const double phi = c1 * 0.9 * u(gen);
      const RateModel m(c0, c1, 0.0);
      const double s = oracle::z_series(phi, R, c0, c1, 3000);
      CHECK(std::abs(std::exp(log_z_R(phi, R, m)) / s - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("z_R diverges as phi approaches c1") {
    const double a = log_z_R(0.99, 10, kModel);
    const double b = log_z_R(0.999, 10, kModel);
    const double c = log_z_R(0.9999, 10, kModel);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(log_z_R(1.0 - 1e-12, 10, kModel) > c + 10.0);
    CHECK_THROWS_AS(log_z_R(1.0, 10, kModel), DomainError);
    CHECK_THROWS_AS(rho_R(1.5, 10, kModel), DomainError);
  }

  TEST_CASE("rho_R is the logarithmic derivative") {
    CHECK(rho_R(0.0, 6, kModel) == 0.0);
    const double h = 1e-6;
    const double phi = 0.5;
    const double fd = phi * (log_z_R(phi + h, 6, kModel) - log_z_R(phi - h, 6, kModel)) / (2 * h);
    CHECK(std::abs(rho_R(phi, 6, kModel) - fd) <= 1e-6);
    // Fluid limit phi / (c0 - phi) = 0.9 / 1.1.
    CHECK(rho_R(0.9, 400, kModel) == doctest::Approx(0.9 / 1.1).epsilon(1e-12));
  }

  TEST_CASE("rho_R strictly increasing") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      const double c0 = 1.0 + 3.0 * u(gen);
      const double c1 = c0 * (0.1 + 0.8 * u(gen));
      const int R = static_cast<int>(gen() % 60);
      const RateModel m(c0, c1, 0.0);
      double prev = -1.0;
      for (int i = 0; i < 100; ++i) {
        const double r = rho_R(c1 * i / 100.0, R, m);
        CHECK(r > prev);
        prev = r;
      }
    }
  }

  TEST_CASE("invert_phi") {
    CHECK(invert_phi(0.0, 10, kModel).phi == 0.0);
    for (const double rho : {0.01, 0.5, 1.0, 2.0, 7.5, 100.0}) {
      for (const int R : {0, 1, 5, 40, 200}) {
        const auto p = invert_phi(rho, R, kModel);
        // phi itself may round to c1; the gap log(c1 - phi) carries the precision.
        CHECK(p.phi <= 1.0);
        CHECK(std::isfinite(p.log_gap));
        CHECK(std::abs(p.rho - rho) <= 1e-10 * std::max(1.0, rho));
      }
    }
    // Roundtrip phi -> rho -> phi.
    for (int i = 1; i <= 99; ++i) {
      const double phi = i / 100.0;
      CHECK(std::abs(invert_phi(rho_R(phi, 20, kModel), 20, kModel).phi - phi) <= 1e-8);
    }
  }

  TEST_CASE("fugacity above the critical density") {
    const auto p = invert_phi(2.0, 40, kModel);
    const double gap = std::exp(p.log_gap);
    // Leading order c1 - phi = (c1/c0)^{R/2} / sqrt(z_inf(c1) (rho - rho_c)) with z_inf(1) = 2.
    CHECK(gap == doctest::Approx(std::pow(0.5, 20) / std::sqrt(2.0)).epsilon(1e-3));
    const auto q = invert_phi(1.0, 40, kModel);
    CHECK(q.phi < 1.0);
    CHECK(std::abs(q.rho - 1.0) <= 1e-10);
  }

  TEST_CASE("fugacity at the critical density decays with exponent R/4") {
    const double g40 = invert_phi(1.0, 40, kModel).log_gap;
    const double g160 = invert_phi(1.0, 160, kModel).log_gap;
    const double rate = (g160 - g40) / 120.0;
    CHECK(rate == doctest::Approx(-0.25 * kLog2).epsilon(0.1));
  }

  TEST_CASE("fugacity converges monotonically in R") {
    const double target = phi_inf(0.5, kModel);
    double prev = kInf;
    for (const int R : {10, 20, 40, 80}) {
      const double d = std::abs(invert_phi(0.5, R, kModel).phi - target);
      CHECK(d <= prev);
      prev = d;
    }
    CHECK(prev <= 1e-12);
    prev = kInf;
    for (const int R : {10, 20, 40, 80}) {
      const double gap = std::exp(invert_phi(2.0, R, kModel).log_gap);
      CHECK(gap < prev);
      prev = gap;
    }
  }

  TEST_CASE("fluid quantities") {
    CHECK(s_fluid(0.0, kModel) == 0.0);
    CHECK(phi_inf(0.0, kModel) == 0.0);
    CHECK(s_fluid(1.0, kModel) == doctest::Approx(kLog2).epsilon(1e-14));
    for (const double rho : {0.1, 1.0, 10.0}) {
      CHECK(rho_inf(phi_inf(rho, kModel), kModel) == doctest::Approx(rho).epsilon(1e-14));
    }
    CHECK_THROWS_AS(p_fluid(2.0, kModel), DomainError);
    CHECK_THROWS_AS(rho_inf(2.5, kModel), DomainError);
    const auto f = fluid_from_rho(1.0, kModel);
    CHECK(f.phi_inf == doctest::Approx(1.0));
    CHECK(f.log_z_inf == doctest::Approx(kLog2));
  }

  TEST_CASE("Legendre duality of the fluid phase") {
    for (int i = 1; i <= 100; ++i) {
      const double rho = 0.05 * i;
      const double phi = phi_inf(rho, kModel);
      CHECK(std::abs(s_fluid(rho, kModel) - (p_fluid(phi, kModel) - rho * std::log(phi))) <=
            1e-10);
    }
  }

  TEST_CASE("critical density") {
    auto c = critical_density(kModel);
    CHECK(c.rho_c == 1.0);
    CHECK(c.phi_c == 1.0);
    const RateModel pd0(2.0, 1.0, 0.0, CutoffMode::kParticleDep);
    CHECK(critical_density(pd0).rho_c == doctest::Approx(1.0).epsilon(1e-15));
    const RateModel pd(2.0, 1.0, 0.5, CutoffMode::kParticleDep);
    c = critical_density(pd);
    CHECK(std::abs(c.rho_c - 1.0 / (std::sqrt(2.0) - 1.0)) <= 1e-12);
    CHECK(c.phi_c == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }

  TEST_CASE("s_gcan") {
    for (const double rho : {0.0, 0.3, 1.0}) CHECK(s_gcan(rho, kModel) == s_fluid(rho, kModel));
    CHECK(s_gcan(2.0, kModel) == doctest::Approx(kLog2).epsilon(1e-14));
    const RateModel m(3.0, 1.0, 0.2);
    const double rc = 0.5;
    CHECK(s_gcan(2.0, m) == doctest::Approx(s_fluid(rc, m) - 1.5 * std::log(1.0)));
    // Concave: midpoint above chord.
    for (int i = 1; i < 60; ++i) {
      const double x = 0.1 * i;
      CHECK(s_gcan(x, kModel) + 1e-12 >=
            0.5 * (s_gcan(x - 0.05, kModel) + s_gcan(x + 0.05, kModel)));
    }
  }

  TEST_CASE("marginal probabilities and moments") {
    const auto p = make_point(0.7, 8, kModel);
    const double z = oracle::z_series(0.7, 8, 2.0, 1.0, 4000);
    double mean = 0.0;
    double second = 0.0;
    double total = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      const double pk = std::exp(log_marginal_probability(k, p, kModel));
      if (k <= 50) {
        CHECK(pk == doctest::Approx(oracle::weight(k, 8, 2.0, 1.0) * std::pow(0.7, k) / z)
                        .epsilon(1e-12));
      }
      total += pk;
      mean += k * pk;
      second += double(k) * k * pk;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto mom = marginal_moments(p, kModel);
    CHECK(mom.mean == doctest::Approx(mean).epsilon(1e-10));
    CHECK(mom.variance == doctest::Approx(second - mean * mean).epsilon(1e-9));
    double tail = 0.0;
    for (int k = 9; k <= 4000; ++k) tail += std::exp(log_marginal_probability(k, p, kModel));
    CHECK(std::exp(log_tail_probability(p, kModel)) == doctest::Approx(tail).epsilon(1e-10));
  }

  TEST_CASE("marginal converges to the geometric fluid limit") {
    const double phi = 0.8;
    double prev = kInf;
    for (const int R : {5, 10, 20, 40, 80}) {
      const auto p = make_point(phi, R, kModel);
      double worst = 0.0;
      for (int k = 0; k <= 20; ++k) {
        const double geo = std::pow(phi / 2.0, k) * (1.0 - phi / 2.0);
        worst = std::max(worst, std::abs(std::exp(log_marginal_probability(k, p, kModel)) - geo));
      }
      CHECK(worst <= prev);
      prev = worst;
    }
    CHECK(prev < 1e-10);
  }

  TEST_CASE("variance grows like (c0/c1)^{R/2} above the critical density") {
    const auto v = marginal_moments(invert_phi(2.0, 80, kModel), kModel);
    CHECK(v.log_variance / 80.0 == doctest::Approx(0.5 * kLog2).epsilon(0.1));
  }

  TEST_CASE("sample_marginal") {
    Rng rng = make_stream(1, 2, 3);
    const auto zero = make_point(0.0, 10, kModel);
    for (int i = 0; i < 100; ++i) CHECK(sample_marginal(zero, kModel, rng) == 0);

    const auto p = invert_phi(0.5, 30, kModel);
    const auto mom = marginal_moments(p, kModel);
    const int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(sample_marginal(p, kModel, rng));
    CHECK(std::abs(sum / n - 0.5) <= 3.0 * std::sqrt(mom.variance / n));

    // Frequencies of the two-piece sampler against exact probabilities.
    const auto q = make_point(0.95, 6, kModel);
    std::vector<double> freq(60, 0.0);
    const int m = 400'000;
    for (int i = 0; i < m; ++i) {
      const auto k = sample_marginal(q, kModel, rng);
      if (k < freq.size()) freq[k] += 1.0 / m;
    }
    for (int k = 0; k < 50; ++k) {
      const double pk = std::exp(log_marginal_probability(k, q, kModel));
      CHECK(std::abs(freq[k] - pk) <= 5.0 * std::sqrt(pk * (1 - pk) / m) + 1e-6);
    }
  }

  TEST_CASE("batch means of marginals concentrate at rho_c above it") {
    const auto p = invert_phi(2.0, 60, kModel);
    Rng rng = make_stream(7, 10000, 0);
    int near_rho_c = 0;
    for (int b = 0; b < 20; ++b) {
      double sum = 0.0;
      for (int x = 0; x < 10000; ++x) sum += static_cast<double>(sample_marginal(p, kModel, rng));
      if (std::abs(sum / 10000 - 1.0) < 0.1) ++near_rho_c;
    }
    CHECK(near_rho_c >= 18);
  }
}
