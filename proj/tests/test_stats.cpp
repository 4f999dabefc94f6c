#include <doctest.h>

#include <cmath>
#include <random>

#include "levysup/errors.hpp"
#include "levysup/stats.hpp"
#include "oracles.hpp"

using namespace levysup;

namespace {

// O(n^2) V-statistic from the double-centred distance matrices.
double naive_dcov(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> ar(n, 0), br(n, 0);
  double am = 0, bm = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ar[i] += std::abs(x[i] - x[j]) / n;
      br[i] += std::abs(y[i] - y[j]) / n;
    }
  for (std::size_t i = 0; i < n; ++i) {
    am += ar[i] / n;
    bm += br[i] / n;
  }
  double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s += (std::abs(x[i] - x[j]) - ar[i] - ar[j] + am) * (std::abs(y[i] - y[j]) - br[i] - br[j] + bm);
  return s / (double(n) * n);
}

}  // namespace

TEST_CASE("fast distance covariance equals the quadratic formula") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  std::vector<double> x(300), y(300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = nd(gen);
    y[i] = 0.5 * x[i] * x[i] + nd(gen);
  }
  CHECK(distance_covariance(x, y) == doctest::Approx(naive_dcov(x, y)).epsilon(1e-10));
  // Ties in both coordinates
  for (auto& v : x) v = std::round(v);
  for (auto& v : y) v = std::round(2 * v) / 2;
  CHECK(distance_covariance(x, y) == doctest::Approx(naive_dcov(x, y)).epsilon(1e-10));
  CHECK(distance_correlation(x, x) == doctest::Approx(1.0));
}

TEST_CASE("independence test") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  std::vector<std::array<double, 3>> ind(1500), dep(1500);
  for (std::size_t i = 0; i < ind.size(); ++i) {
    ind[i] = {nd(gen), nd(gen), nd(gen)};
    const double z = nd(gen);
    dep[i] = {z, std::abs(z) + 0.5 * nd(gen), nd(gen)};
  }
  const auto a = independence_statistic(ind, 99, 1);
  const auto b = independence_statistic(dep, 99, 1);
  CHECK(a.pvalue > 0.01);
  CHECK(b.pvalue <= 3.0 / 100.0);
  CHECK(b.pair_pvalue[0] == doctest::Approx(0.01));
  CHECK(independence_statistic(ind, 99, 1).pvalue == a.pvalue);
  // Too few triples, constant coordinate
  CHECK_THROWS_AS(independence_statistic(std::span(ind).first(999), 9, 1), DomainError);
  auto flat = ind;
  for (auto& t : flat) t[1] = 2.0;
  CHECK_THROWS_AS(independence_statistic(flat, 9, 1), DomainError);
}

TEST_CASE("Kolmogorov-Smirnov pieces") {
  const std::vector<double> one{0.5};
  CHECK(ks_statistic(one, [](double x) { return x; }) == doctest::Approx(0.5));
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  CHECK(ks_statistic(grid, [](double x) { return x; }) == doctest::Approx(0.1));
  // Restricted window ignores the disagreement beyond it.
  const std::vector<double> skew{0.1, 0.2, 0.95, 0.96};
  CHECK(ks_statistic(skew, [](double x) { return x; }, 0.0, 0.25) == doctest::Approx(0.3));
  // Classical 5% critical value 1.358 / sqrt(n)
  CHECK(kolmogorov_pvalue(1.358 / std::sqrt(1e6), 1000000) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(kolmogorov_pvalue(0.0, 100) == 1.0);
}

TEST_CASE("tabulated distribution functions") {
  // Exponential density on a geometric grid
  std::vector<double> x, f;
  for (int i = 0; i <= 400; ++i) {
    x.push_back(1e-5 * std::pow(4e6, i / 400.0));
    f.push_back(std::exp(-x.back()));
  }
  const auto cdf = TabulatedCdf::from_density(x, f, 0.0);
  for (double z : {0.01, 0.5, 2.0, 10.0}) CHECK(std::abs(cdf(z) - (1 - std::exp(-z))) < 1e-4);
  CHECK(cdf(-1.0) == 0.0);
  // x^{-1/2} head with an atom
  std::vector<double> g;
  for (double v : x) g.push_back(0.5 / std::sqrt(v) * 0.1);
  const auto c2 = TabulatedCdf::from_density(std::vector<double>(x.begin(), x.begin() + 50),
                                             std::vector<double>(g.begin(), g.begin() + 50), 0.2);
  CHECK(c2(0.0) == doctest::Approx(0.2));
  // exact on the head sub-nodes
  CHECK(c2(2.5e-6) == doctest::Approx(0.2 + 0.1 * std::sqrt(2.5e-6)).epsilon(1e-12));
  CHECK(std::abs(c2(1e-6) - (0.2 + 0.1 * 1e-3)) < 2e-6);
  CHECK_THROWS_AS(TabulatedCdf::from_density({1, 2, 3}, {1, 1}, 0), DomainError);
  // a known head mass replaces the power-law guess but keeps its shape
  const auto c3 = TabulatedCdf::from_density(std::vector<double>(x.begin(), x.begin() + 50),
                                             std::vector<double>(g.begin(), g.begin() + 50), 0.0, 0.5);
  CHECK(c3(x[0]) == doctest::Approx(0.5));
  CHECK(c3(x[0] / 4) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("supremum distribution tables") {
  const auto bm = sup_marginal_cdf(brownian(0.5), 1.0, 8.0, 400);
  for (double x : {1e-4, 0.05, 0.5, 1.0, 3.0, 8.0})
    CHECK(std::abs(bm(x) - oracle::bm_sup_cdf(0.5, 1.0, x)) < 5e-6);
  // Cauchy: the density blows up like x^{-1/2} at 0, where a power law fitted
  // at the first node misses; the far tail is P(sup > x) ~ 1/(pi x).
  const auto c = sup_marginal_cdf(cauchy(), 1.0, 4000.0);
  CHECK(std::abs((1.0 - c.mass()) * oracle::pi * 4000.0 - 1.0) < 0.01);
  // and near 0, P(sup <= x) ~ (2/pi) sqrt(x) with a relative correction O(sqrt x)
  for (double x : {1e-6, 1e-4})
    CHECK(c(x) / (2.0 / oracle::pi * std::sqrt(x)) == doctest::Approx(1.0).epsilon(20 * std::sqrt(x)));
}

TEST_CASE("histograms") {
  std::vector<TripleSample> s;
  for (double v : {0.0, 0.1, 0.5, 0.5, 0.99, 1.0, 3.0, -1.0}) s.push_back({0.0, v, 0.0, 1, false});
  const auto h = empirical_distribution(s, Coordinate::SupHat, {0.0, 0.5, 1.0});
  CHECK(h.atom_count == 1);
  CHECK(h.counts == std::vector<std::uint64_t>{1, 4});
  CHECK(h.above == 1);
  CHECK(h.below == 1);
  CHECK(h.total == 8);
  auto m = h;
  m.merge(h);
  CHECK(m.total == 16);
  CHECK(m.frequencies()[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(empirical_distribution({}, Coordinate::SupHat, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(empirical_distribution(s, Coordinate::SupHat, {1.0, 0.0}), DomainError);
}

TEST_CASE("chi-square with pooling") {
  const std::vector<std::uint64_t> obs{50, 30, 20};
  const auto r = chi_square_test(obs, {0.5, 0.3, 0.2}, 100);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.pvalue == doctest::Approx(1.0));
  CHECK(r.dof == 2);
  // Expected counts 90, 5, 5: with a threshold of 6 the two small cells pool.
  const auto q = chi_square_test({90, 4, 6}, {0.9, 0.05, 0.05}, 100, 6.0);
  CHECK(q.cells == 2);
  // Statistic of a 2-cell table with dof 1: compare against the normal tail.
  const auto t = chi_square_test({60, 40}, {0.5, 0.5}, 100);
  CHECK(t.statistic == doctest::Approx(4.0));
  CHECK(t.pvalue == doctest::Approx(2.0 * oracle::normal_cdf(-2.0)).epsilon(1e-10));
}

TEST_CASE("Richardson extrapolation") {
  // D(n) = 0.01 + 0.5 n^{-1/2} on n = 1e3, 1e4, 1e5
  auto d = [](double n) { return 0.01 + 0.5 / std::sqrt(n); };
  const auto r = richardson_extrapolate(d(1e3), d(1e4), d(1e5), 10.0);
  CHECK(r.monotone);
  CHECK(r.rate == doctest::Approx(0.5));
  CHECK(r.extrapolated == doctest::Approx(0.01).epsilon(1e-10));
  const auto bad = richardson_extrapolate(0.1, 0.05, 0.07, 10.0);
  CHECK_FALSE(bad.monotone);
  CHECK(bad.extrapolated == 0.07);
}
