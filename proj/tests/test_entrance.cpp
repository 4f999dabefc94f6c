#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "levysup/compound_poisson.hpp"
#include "levysup/entrance.hpp"
#include "levysup/errors.hpp"
#include "levysup/stable.hpp"
#include "oracles.hpp"

using namespace levysup;

namespace {

double half_line(const std::function<double(double)>& f, double tol = 1e-12) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 0.0, std::numeric_limits<double>::infinity(), tol);
}

}  // namespace

TEST_CASE("Cauchy inner factor g") {
  // g(1) = 2^{-1/4} exp(-G/pi), G Catalan's constant
  const double g1 = std::pow(2.0, -0.25) * std::exp(-oracle::catalan / oracle::pi);
  CHECK(cauchy_inner_factor_direct(1.0) == doctest::Approx(g1).epsilon(1e-12));
  CHECK(cauchy_inner_factor(1.0) == doctest::Approx(g1).epsilon(1e-9));
  CHECK(cauchy_inner_factor(0.0) == 1.0);
  // I(y) = int_0^y (u pi/2 - log u) / (1 + u^2) du
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double y : {1e-7, 1e-3, 0.2, 3.0, 40.0, 1e4, 1e7}) {
    const double table = cauchy_inner_factor(y);
    CHECK(table == doctest::Approx(cauchy_inner_factor_direct(y)).epsilon(1e-9));
    if (y <= 40.0) {
      const double I = ts.integrate([](double u) { return (0.5 * oracle::pi * u - std::log(u)) / (1.0 + u * u); },
                                    0.0, y, 1e-13);
      CHECK(table == doctest::Approx(std::exp(-I / oracle::pi)).epsilon(1e-9));
    }
  }
  // g(y) sqrt(y) -> 1
  CHECK(cauchy_inner_factor(1e9) * std::sqrt(1e9) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(cauchy_inner_factor(1e12) * std::sqrt(1e12) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Cauchy entrance density") {
  const EntranceLaw law{cauchy(), Side::Supremum, {}};
  const EntranceLaw star{cauchy(), Side::Infimum, {}};
  // q_1 has mass n(1 < zeta) = 1 / Gamma(1/2)
  const double mass = half_line([&](double x) { return entrance_density(law, 1.0, x); }, 1e-10);
  CHECK(mass == doctest::Approx(1.0 / std::sqrt(oracle::pi)).epsilon(1e-8));
  CHECK(lifetime_tail(law, 1.0) == doctest::Approx(1.0 / std::sqrt(oracle::pi)).epsilon(1e-15));
  // The uncorrected weights carry four times too much mass.
  const double uncorrected = half_line([](double x) { return cauchy_uncorrected_density(x); }, 1e-10);
  CHECK(uncorrected == doctest::Approx(2.306563).epsilon(1e-6));
  for (double x : {0.0, 0.3, 2.0, 50.0}) {
    CHECK(entrance_density(law, 1.0, x) == entrance_density(star, 1.0, x));
    CHECK(entrance_density(law, 1.0, x) == doctest::Approx(cauchy_unit_density(x)).epsilon(1e-15));
    // q_t(x) = t^{-3/2} q_1(x / t)
    CHECK(entrance_density(law, 4.0, x) == doctest::Approx(entrance_density(law, 1.0, x / 4.0) / 8.0).epsilon(1e-12));
  }
  for (double x : {0.0, 0.01, 1.0, 10.0, 1e3, 1e5}) CHECK(cauchy_unit_density(x) > 0.0);
}

TEST_CASE("Brownian entrance laws") {
  for (double c : {-1.0, 0.0, 0.5, 3.0, 6.0}) {
    const auto m = brownian(c);
    for (Side side : {Side::Supremum, Side::Infimum}) {
      const EntranceLaw law{m, side, {}};
      for (double t : {0.3, 1.0, 2.0}) {
        const double mass = half_line([&](double x) { return entrance_density(law, t, x); });
        CHECK(lifetime_tail(law, t) == doctest::Approx(mass).epsilon(1e-9));
      }
    }
    // The dual of the infimum side is the supremum side of -X.
    const EntranceLaw star{m, Side::Infimum, {}};
    const EntranceLaw dual_sup{dual_model(m), Side::Supremum, {}};
    CHECK(entrance_density(star, 0.7, 0.4) == doctest::Approx(entrance_density(dual_sup, 0.7, 0.4)).epsilon(1e-15));
  }
  // c = 0: n(t < zeta) = t^{-1/2} / Gamma(1/2) under kappa(1,0) = 1
  const EntranceLaw law{brownian(0.0), Side::Supremum, {}};
  CHECK(lifetime_tail(law, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0 * oracle::pi)).epsilon(1e-14));
  CHECK(brownian_ladder_scale(0.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("stable-type entrance laws") {
  // Spectrally negative: q*_t(x) = x p_t(x) / t with mass t^{-(1-rho)} / Gamma(rho)
  const auto sn = spectrally_negative_stable(1.5);
  const EntranceLaw star{sn, Side::Infimum, {}};
  for (double t : {0.5, 1.0}) {
    for (double x : {0.2, 1.0, 3.0})
      CHECK(entrance_density(star, t, x) == doctest::Approx(x * marginal_density(sn, t, x) / t).epsilon(1e-14));
    const double mass = half_line([&](double x) { return entrance_density(star, t, x); }, 1e-10);
    CHECK(mass == doctest::Approx(lifetime_tail(star, t)).epsilon(1e-7));
    CHECK(lifetime_tail(star, t) == doctest::Approx(std::pow(t, -(1.0 - sn.rho())) / std::tgamma(sn.rho())));
  }
  CHECK(has_entrance_density(sn, Side::Infimum));
  CHECK_FALSE(has_entrance_density(sn, Side::Supremum));
  CHECK_THROWS_AS(entrance_density({sn, Side::Supremum, {}}, 1.0, 1.0), UnsupportedOperation);
  // Its dual on the supremum side
  const auto sp = dual_model(sn);
  const EntranceLaw sup{sp, Side::Supremum, {}};
  CHECK(entrance_density(sup, 1.0, 0.8) == doctest::Approx(entrance_density(star, 1.0, 0.8)).epsilon(1e-14));
  // Stable(2, 1/2) is sqrt(2) B: same lifetime tail as B, scaled densities
  const EntranceLaw s2{stable(2.0, 0.5), Side::Supremum, {}};
  const double m2 = half_line([&](double x) { return entrance_density(s2, 1.0, x); });
  CHECK(m2 == doctest::Approx(1.0 / std::sqrt(oracle::pi)).epsilon(1e-10));
  CHECK_THROWS_AS(entrance_density({stable(0.7, 0.3), Side::Supremum, {}}, 1.0, 1.0), UnsupportedOperation);
  CHECK_THROWS_AS(entrance_density(star, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(entrance_density(star, 1.0, -1.0), DomainError);
}

TEST_CASE("compound Poisson lifetime tail on the irregular side") {
  const auto m = compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0);
  const EntranceLaw law{m, Side::Supremum, {}};
  const UpwardJumpProcess up{1.0, 1.0, 1.0};
  CHECK(lifetime_tail(law, 1.0) == doctest::Approx(m.ladder_gamma()->value * first_passage_survival(up, 1.0)));
  CHECK_THROWS_AS(lifetime_tail({m, Side::Infimum, {}}, 1.0), UnsupportedOperation);
  CHECK_FALSE(has_entrance_density(m, Side::Supremum));
}

TEST_CASE("Cauchy entrance density far tail") {
  // The quadrature branch and the u^{-2} limit meet continuously.
  const double below = cauchy_unit_density(0.999e7) * 0.999e7 * 0.999e7;
  const double above = cauchy_unit_density(1.001e7) * 1.001e7 * 1.001e7;
  CHECK(below == doctest::Approx(above).epsilon(1e-6));
  CHECK(cauchy_unit_density(1e300) >= 0.0);
}
