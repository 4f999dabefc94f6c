#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "levysup/entrance.hpp"
#include "levysup/errors.hpp"
#include "levysup/fluctuation.hpp"
#include "levysup/stable.hpp"
#include "oracles.hpp"

using namespace levysup;

TEST_CASE("Fristedt formula against closed forms") {
  for (double c : {-1.0, 0.0, 1.0}) {
    const auto m = brownian(c);
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {0.0, 0.5, 2.0}) {
        const double k = fristedt_kappa(m, a, b);
        CHECK(k == doctest::Approx(oracle::bm_kappa(c, a, b)).epsilon(1e-7));
        CHECK(closed_form_kappa(m, a, b) == doctest::Approx(oracle::bm_kappa(c, a, b)).epsilon(1e-14));
      }
  }
  // Stable with beta = 0: alpha^rho
  for (const auto& m : {cauchy(), spectrally_negative_stable(1.5), stable(0.7, 0.3)})
    for (double a : {0.5, 3.0})
      CHECK(fristedt_kappa(m, a, 0.0) == doctest::Approx(std::pow(a, m.rho())).epsilon(1e-7));
  CHECK_THROWS_AS(closed_form_kappa(cauchy(), 1.0, 1.0), UnsupportedOperation);
  CHECK_THROWS_AS(fristedt_kappa(compound_poisson(1, 1, JumpSign::Positive, -1), 1.0, 0.0), UnsupportedOperation);
}

TEST_CASE("kappa(0, 0) is the killing rate") {
  const auto m = brownian(-1.0);
  CHECK(fristedt_kappa(m, 0.0, 0.0) == doctest::Approx(m.killing_rate()).epsilon(1e-7));
  CHECK_THROWS_AS(fristedt_kappa(brownian(0.5), 0.0, 0.0), DomainError);
}

TEST_CASE("Wiener-Hopf factorization and normalization") {
  for (double c : {-1.0, 0.0, 1.0})
    for (double a : {0.5, 1.0, 2.0, 5.0}) CHECK(std::abs(wiener_hopf_residual(brownian(c), a)) < 1e-8);
  for (const auto& m : {cauchy(), spectrally_negative_stable(1.5), stable(0.7, 0.3)}) {
    CHECK(std::abs(wiener_hopf_residual(m, 2.0)) < 1e-8);
    CHECK(fristedt_kappa(m, 1.0, 0.0) == 1.0);
  }
  const LadderExponent closed{brownian(0.5), KappaMethod::ClosedForm, {}, 1e-3};
  const LadderExponent quad{brownian(0.5), KappaMethod::FristedtQuadrature, {}, 1e-3};
  CHECK(ladder_exponent(closed, 2.0, 1.0) == doctest::Approx(ladder_exponent(quad, 2.0, 1.0)).epsilon(1e-7));
  // The small-time split is a numerical device only.
  CHECK(fristedt_kappa(brownian(0.5), 2.0, 1.0, {}, 1e-2) ==
        doctest::Approx(fristedt_kappa(brownian(0.5), 2.0, 1.0, {}, 1e-4)).epsilon(1e-8));
}

TEST_CASE("kappa from the excursion measure") {
  for (double c : {0.0, 0.5, -1.0})
    for (double e : {0.5, 1.0, 2.0})
      CHECK(excursion_kappa(brownian(c), e) == doctest::Approx(oracle::bm_kappa(c, e, 0.0)).epsilon(1e-8));
  CHECK(excursion_kappa(cauchy(), 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("Cauchy entrance law against Fristedt's formula") {
  // int e^{-s} q*_s(dx) ds is the 1-potential of the ladder height; by scaling
  // sqrt(pi) int q_1(u) (1 + beta u)^{-1/2} du = 1 / kappa(1, beta).
  boost::math::quadrature::exp_sinh<double> q;
  for (double beta : {1.0, 4.0}) {
    const double lhs = std::sqrt(oracle::pi) *
                       q.integrate([&](double u) { return cauchy_unit_density(u) / std::sqrt(1.0 + beta * u); }, 0.0,
                                   std::numeric_limits<double>::infinity(), 1e-10);
    CHECK(lhs == doctest::Approx(1.0 / fristedt_kappa(cauchy(), 1.0, beta)).epsilon(1e-7));
  }
}

TEST_CASE("semigroup rebuilt from entrance laws") {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-4.5 + 0.25 * i);
  const auto rec = semigroup_reconstruct(brownian(0.5), 1.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(rec[i] == doctest::Approx(oracle::gaussian(0.5, 1.0, grid[i])).epsilon(1e-7));
  QuadratureConfig loose;
  loose.rel_tol = 1e-6;
  loose.abs_tol = 1e-9;
  const std::vector<double> cg{-3.0, -0.3, 0.2, 1.0, 2.5};
  const auto rc = semigroup_reconstruct(cauchy(), 1.0, cg, loose);
  for (std::size_t i = 0; i < cg.size(); ++i) CHECK(rc[i] == doctest::Approx(oracle::cauchy(1.0, cg[i])).epsilon(1e-4));
  CHECK_THROWS_AS(semigroup_reconstruct(stable(0.7, 0.3), 1.0, cg), UnsupportedOperation);
}

TEST_CASE("subordinator Laplace exponent") {
  const auto s = stable_subordinator(0.5, 1.3, 0.2, 0.1);
  for (double a : {0.0, 0.3, 1.0, 7.0})
    CHECK(subordinator_phi(s, a) == doctest::Approx(subordinator_phi_closed(s, a)).epsilon(1e-8));
  const auto d = pure_drift_subordinator(2.0, 0.5);
  CHECK(subordinator_phi(d, 3.0) == doctest::Approx(6.5));
  CHECK_THROWS_AS(stable_subordinator(1.2, 1.0), DomainError);
  CHECK_THROWS_AS(pure_drift_subordinator(0.0), DomainError);
}

TEST_CASE("subordinator law: E(1 - e^{-a S_x}) = 1 - e^{-x Phi(a)}") {
  boost::math::quadrature::exp_sinh<double> q;
  for (double idx : {0.5, 0.3, 0.75}) {
    const auto s = stable_subordinator(idx, 0.8, 0.0, 0.2);
    for (double a : {0.5, 2.0})
      for (double x : {0.4, 1.5}) {
        // killed paths (S_x = inf) contribute 1 - e^{-k x}
        const double alive = q.integrate([&](double u) { return -std::expm1(-a * u) * subordinator_density(s, x, u); },
                                         0.0, std::numeric_limits<double>::infinity(), 1e-11);
        const double lhs = alive + 1.0 - std::exp(-0.2 * x);
        CHECK(lhs == doctest::Approx(1.0 - std::exp(-x * subordinator_phi_closed(s, a))).epsilon(1e-7));
      }
  }
}

TEST_CASE("inverse of the 1/2-stable subordinator is half-normal") {
  // Phi(l) = sqrt(2 l): S is the Brownian first-passage process, L_t ~ |B_t|.
  const auto s = stable_subordinator(0.5, std::sqrt(2.0 / oracle::pi));
  for (double x : {0.1, 0.5, 1.0, 2.0, 3.0})
    CHECK(std::abs(inverse_subordinator_density(s, 1.0, x) - oracle::half_normal(x)) < 1e-8);
  CHECK_THROWS_AS(inverse_subordinator_density(stable_subordinator(0.5, 1.0, 0.3), 1.0, 1.0), PreconditionError);
  // Scaling route for another index: t p_{S_x}(t) / (index x)
  const auto s3 = stable_subordinator(0.3, 1.0);
  for (double x : {0.2, 1.0})
    CHECK(inverse_subordinator_density(s3, 2.0, x) ==
          doctest::Approx(2.0 * subordinator_density(s3, x, 2.0) / (0.3 * x)).epsilon(1e-7));
}

TEST_CASE("identity for subordinators with drift") {
  const auto s = stable_subordinator(0.5, 1.0, 0.5, 0.1);
  const auto r = drifted_identity_check(s, 1.0, 2.0, 12, 1e-5);
  CHECK(r.pass);
  CHECK(r.tv_distance < 1e-6);
  CHECK(r.t.size() == 12);
  const auto p = drifted_identity_check(pure_drift_subordinator(1.5, 0.3), 1.0, 3.0, 30, 1e-12);
  CHECK(p.pass);
  // A wrong tolerance of zero fails unless the two sides agree bitwise.
  CHECK_FALSE(drifted_identity_check(s, 1.0, 2.0, 12, 0.0).pass);
}
