#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levysup/compound_poisson.hpp"
#include "levysup/errors.hpp"
#include "levysup/jointlaw.hpp"
#include "levysup/montecarlo.hpp"
#include "levysup/rng.hpp"
#include "levysup/stats.hpp"
#include "oracles.hpp"

using namespace levysup;

namespace {

std::vector<double> sorted_coordinate(const std::vector<TripleSample>& s, Coordinate c) {
  std::vector<double> v;
  for (const auto& x : s) v.push_back(project(x, c));
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("results do not depend on the worker count") {
  for (const auto& m : {brownian(0.5), cauchy(), spectrally_negative_stable(1.5),
                        compound_poisson(1, 1, JumpSign::Positive, -1)}) {
    SimulationPlan p{m, 1.0, 3000, 50, 99, 1, true};
    const auto one = simulate_sup_triple(p);
    p.workers = 4;
    CHECK(simulate_sup_triple(p) == one);
  }
}

TEST_CASE("step k of a path uses only the draws addressed by k") {
  // Rebuild a Cauchy path draw by draw: ratio of uniforms on the half disc.
  const std::uint32_t n = 700;
  SimulationPlan p{cauchy(), 2.0, 3, n, 11, 1, false};
  const auto s = simulate_sup_triple(p);
  for (std::uint64_t path = 0; path < 3; ++path) {
    PathRng rng(11, path);
    double x = 0.0, sup = 0.0;
    for (std::uint32_t k = 0; k < n; ++k) {
      rng.seek(k);
      for (;;) {
        const double u = rng.uniform(), v = 2.0 * rng.uniform() - 1.0;
        if (u * u + v * v <= 1.0) {
          x += (2.0 / n) * (v / u);
          break;
        }
      }
      sup = std::max(sup, x);
    }
    CHECK(s[path].terminal == x);
    CHECK(s[path].sup_hat == sup);
  }
}

TEST_CASE("nested grids read the same paths") {
  SimulationPlan p{cauchy(), 1.0, 500, 120, 3, 2, false};
  const auto nested = simulate_nested(p, {12, 60, 120});
  CHECK(nested.samples[2] == simulate_sup_triple(p));
  for (std::size_t i = 0; i < 500; ++i) {
    // Coarser grids see a subset of the points.
    CHECK(nested.samples[0][i].sup_hat <= nested.samples[1][i].sup_hat);
    CHECK(nested.samples[1][i].sup_hat <= nested.samples[2][i].sup_hat);
    CHECK(nested.samples[0][i].terminal == nested.samples[2][i].terminal);
  }
  CHECK_THROWS_AS(simulate_nested(p, {7}), DomainError);
  p.model = compound_poisson(1, 1, JumpSign::Positive, -1);
  CHECK_THROWS_AS(simulate_nested(p, {12}), UnsupportedOperation);
}

TEST_CASE("plan validation") {
  SimulationPlan p{brownian(0), 1.0, 0, 10, 1, 1, true};
  CHECK_THROWS_AS(simulate_sup_triple(p), DomainError);
  p.paths = 10;
  p.horizon = -1.0;
  CHECK_THROWS_AS(simulate_sup_triple(p), DomainError);
}

TEST_CASE("bridge-corrected Brownian supremum is exact in law") {
  const double c = 0.5;
  SimulationPlan p{brownian(c), 1.0, 40000, 16, 17, 4, true};
  const auto s = simulate_sup_triple(p);
  const auto v = sorted_coordinate(s, Coordinate::SupHat);
  const double d = ks_statistic(v, [&](double x) { return oracle::bm_sup_cdf(c, 1.0, x); });
  CHECK(kolmogorov_pvalue(d, v.size()) > 1e-3);
  // Terminal values are Gaussian.
  const auto xt = sorted_coordinate(s, Coordinate::Terminal);
  const double dt = ks_statistic(xt, [&](double x) { return oracle::normal_cdf(x - c); });
  CHECK(kolmogorov_pvalue(dt, xt.size()) > 1e-3);
  // Without the correction the grid maximum is biased low.
  p.bridge_correction = false;
  const auto raw = simulate_sup_triple(p);
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    a += s[i].sup_hat;
    b += raw[i].sup_hat;
    REQUIRE(raw[i].sup_hat <= s[i].sup_hat);
  }
  CHECK(b < a);
}

TEST_CASE("Cauchy argmax time follows the arcsine law") {
  // On n steps the grid argmax has an atom of about (pi n)^{-1/2} at 0.
  SimulationPlan p{cauchy(), 1.0, 20000, 4000, 23, 4, false};
  const auto g = sorted_coordinate(simulate_sup_triple(p), Coordinate::GHat);
  const double d = ks_statistic(g, [](double s) { return oracle::arcsine_cdf(1.0, s); });
  CHECK(d < 0.02);
}

TEST_CASE("compound Poisson paths are exact") {
  const auto m3 = compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0);
  SimulationPlan p{m3, 1.0, 100000, 1, 5, 4, true};
  const auto est = atom_mass_estimate(m3, 1.0, p);
  CHECK(est.z_score < 4.0);
  const double atom = sup_atom_mass(m3, 1.0);
  CHECK(std::abs(est.sup_zero - atom) < 4.0 * est.sup_zero_se);
  CHECK(std::abs(est.first_passage - atom) < 4.0 * est.first_passage_se);
  CHECK_THROWS_AS(atom_mass_estimate(brownian(0), 1.0, p), PreconditionError);

  // Type 2: P(g_t = t) is the end atom.
  const auto m2 = dual_model(m3);
  p.model = m2;
  const auto s2 = simulate_sup_triple(p);
  const auto at_end = std::count_if(s2.begin(), s2.end(), [](const TripleSample& s) { return s.g_hat == 1.0; });
  const double f = at_end / double(s2.size());
  const double end = joint_atoms(m2, 1.0).end_mass;
  CHECK(std::abs(f - end) < 4.0 * std::sqrt(end * (1 - end) / s2.size()));
  // Zero-mean increments
  double mean = 0.0;
  for (const auto& s : s2) mean += s.terminal;
  CHECK(std::abs(mean / s2.size()) < 0.02);
}
