#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "levysup/compound_poisson.hpp"
#include "levysup/errors.hpp"
#include "levysup/io.hpp"
#include "levysup/model.hpp"
#include "levysup/quadrature.hpp"
#include "levysup/rng.hpp"
#include "oracles.hpp"

using namespace levysup;

TEST_CASE("philox known answers") {
  // Reference vectors of the Philox4x32-10 generator.
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
        PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("path streams are addressable") {
  PathRng a(42, 7), b(42, 7), c(42, 8);
  a.seek(3);
  b.seek(3);
  c.seek(3);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  // Re-seeking replays the step.
  a.seek(3);
  CHECK(a.uniform() == x);
  CHECK(to_open_unit(0) > 0.0);
  CHECK(to_open_unit(~0ULL) < 1.0);
}

TEST_CASE("regularity types of the catalog") {
  CHECK(brownian(0.3).regularity() == Regularity::Type1);
  CHECK(cauchy().regularity() == Regularity::Type1);
  CHECK(stable(0.7, 0.4).regularity() == Regularity::Type1);
  CHECK(spectrally_negative_stable(1.5).regularity() == Regularity::Type1);
  const auto up = compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0);
  const auto down = compound_poisson(1.0, 1.0, JumpSign::Negative, 1.0);
  CHECK(up.regularity() == Regularity::Type3);
  CHECK(down.regularity() == Regularity::Type2);
  CHECK(up.ladder_drift() == 0.0);
  CHECK(up.ladder_drift_star() > 0.0);
  CHECK(down.ladder_drift() > 0.0);
  CHECK(down.ladder_drift_star() == 0.0);
  for (const auto& m : {brownian(-1.0), cauchy(), stable(1.2, 0.3), spectrally_negative_stable(1.7)}) {
    CHECK(m.ladder_drift() == 0.0);
    CHECK(m.ladder_drift_star() == 0.0);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(stable(2.5, 0.5), DomainError);
  CHECK_THROWS_AS(stable(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(stable(1.5, 0.2), DomainError);  // rho must lie in [1 - 1/alpha, 1/alpha]
  CHECK_THROWS_AS(spectrally_negative_stable(0.8), DomainError);
  CHECK_THROWS_AS(compound_poisson(-1.0, 1.0, JumpSign::Positive, -1.0), DomainError);
  CHECK_THROWS_AS(compound_poisson(1.0, 1.0, JumpSign::Positive, 1.0), DomainError);
  CHECK_THROWS_AS(brownian(std::nan("")), DomainError);
}

TEST_CASE("stable aliases are canonical") {
  CHECK(stable(1.0, 0.5).family() == Family::SymmetricCauchy);
  CHECK(stable(1.5, 1.0 / 1.5).family() == Family::SpectrallyNegativeStable);
  CHECK(stable(1.5, 1.0 / 1.5) == spectrally_negative_stable(1.5));
}

TEST_CASE("duality is an involution and flips positivity") {
  const std::vector<ProcessModel> models{brownian(0.7), brownian(-1.0), cauchy(),
                                         stable(0.6, 0.25), stable(1.5, 0.5),
                                         spectrally_negative_stable(1.5),
                                         compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0),
                                         compound_poisson(2.0, 0.5, JumpSign::Negative, 1.5)};
  for (const auto& m : models) {
    CHECK(dual_model(dual_model(m)) == m);
    if (m.family() != Family::CompoundPoissonWithDrift)
      CHECK(positivity_param(dual_model(m)) == doctest::Approx(1.0 - positivity_param(m)).epsilon(1e-14));
    else
      CHECK_THROWS_AS(positivity_param(m), UnsupportedOperation);
  }
  CHECK(dual_model(spectrally_negative_stable(1.5)).family() == Family::Stable);
}

TEST_CASE("characteristic exponent is conjugate symmetric") {
  const std::vector<ProcessModel> models{brownian(0.7), cauchy(), stable(0.6, 0.25), stable(1.5, 0.5),
                                         spectrally_negative_stable(1.3),
                                         compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0)};
  for (const auto& m : models)
    for (double l : {0.1, 1.0, 3.7}) {
      const auto a = char_exponent(m, -l), b = std::conj(char_exponent(m, l));
      CHECK(std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)));
    }
  // psi(l) = l^2/2 - i c l
  const auto m = brownian(0.5);
  const auto p = char_exponent(m, 2.0);
  CHECK(p.real() == doctest::Approx(2.0));
  CHECK(p.imag() == doctest::Approx(-1.0));
  CHECK(std::abs(char_exponent(cauchy(), -3.0) - 3.0) < 1e-15);
}

TEST_CASE("BM positivity and killing") {
  CHECK(positivity_param(brownian(0.0)) == 0.5);
  CHECK(positivity_param(brownian(1.0)) == doctest::Approx(oracle::normal_cdf(1.0)));
  CHECK(brownian(0.5).killing_rate() == 0.0);
  // kappa(0, 0) = 2|c| / (sqrt(c^2 + 2) - c)
  CHECK(brownian(-1.0).killing_rate() == doctest::Approx(oracle::bm_kappa(-1.0, 0.0, 0.0)));
}

TEST_CASE("ladder constant gamma of the compound Poisson example is the golden ratio") {
  // Minus the process is spectrally negative with psi(theta) = theta^2/(1+theta),
  // so E exp(-tau) = 1 - 1/Phi(1) and gamma = Phi(1) = golden ratio.
  const auto m = compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0);
  const auto& g = m.ladder_gamma();
  REQUIRE(g.has_value());
  CHECK(std::abs(g->value - oracle::golden) < 4.0 * g->std_error + 1e-12);
  CHECK(g->std_error < 5e-3);
  CHECK(*m.gamma() == g->value);
  CHECK(m.ladder_drift_star() == doctest::Approx(1.0 / g->value));
}

TEST_CASE("first passage survival: Laplace transform and Monte Carlo") {
  const UpwardJumpProcess p{1.0, 1.0, 1.0};
  // int_0^inf e^{-q t} P(tau > t) dt = (1 - E e^{-q tau}) / q = 1 / Phi(q)
  for (double q : {0.5, 1.0, 3.0}) {
    auto f = [&](double t) { return std::exp(-q * t) * first_passage_survival(p, t); };
    const auto r = integrate_semi_infinite(f, 0.0, 1.0 / q);
    CHECK(r.value == doctest::Approx(1.0 / oracle::cpp_dual_phi(q)).epsilon(1e-8));
  }
  CHECK(first_passage_survival(p, 0.0) == 1.0);
  int late = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    PathRng rng(11, i);
    late += simulate_first_passage(p, 1.0, rng) > 1.0;
  }
  const double s = first_passage_survival(p, 1.0);
  CHECK(std::abs(late / double(n) - s) < 4.0 * std::sqrt(s * (1 - s) / n));
  // Density integrates to the survival drop.
  auto d = [&](double t) { return first_passage_density(p, t); };
  CHECK(integrate(d, 0.0, 2.0).value == doctest::Approx(1.0 - first_passage_survival(p, 2.0)).epsilon(1e-8));
}

TEST_CASE("model text round trip") {
  const std::vector<ProcessModel> models{brownian(0.1), cauchy(), stable(0.6, 0.25),
                                         spectrally_negative_stable(1.5),
                                         compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0)};
  for (const auto& m : models) CHECK(model_from_text(model_to_text(m)) == m);
  CHECK(model_from_text("family=bm drift=0.25").drift() == 0.25);
  CHECK_THROWS_AS(model_from_text("family=cauchy drift=1"), DomainError);
  CHECK_THROWS_AS(model_from_text("family=bm speed=1"), DomainError);
  CHECK_THROWS_AS(model_from_text("drift=1"), DomainError);
  CHECK_THROWS_AS(model_from_text("family=bm drift=x"), DomainError);
  CHECK_THROWS_AS(model_from_text("family=levy"), DomainError);
}

TEST_CASE("shortest round-trip decimal formatting") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
    const auto s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("batched draws equal the stream") {
  const PathRng rng(0x1234567890ULL, 77);
  std::vector<double> u(300), v(300);
  rng.first_pairs(4000000000u, 300, u.data(), v.data());
  for (std::uint32_t j = 0; j < 300; ++j) {
    PathRng r(0x1234567890ULL, 77);
    r.seek(4000000000u + j);
    CHECK(u[j] == r.uniform());
    CHECK(v[j] == r.uniform());
    CHECK(rng.first_pair(4000000000u + j)[0] == u[j]);
  }
}
