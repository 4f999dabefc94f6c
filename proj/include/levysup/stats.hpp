#pragma once

// Statistical comparisons between simulated samples and analytic laws.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "levysup/montecarlo.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

enum class Coordinate { GHat, SupHat, Terminal, Gap };

double project(const TripleSample& s, Coordinate c);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  // Samples exactly at 0 (the type 3 atom of the supremum), kept out of the bins.
  std::uint64_t atom_count = 0;
  std::uint64_t below = 0, above = 0;
  std::uint64_t total = 0;

  std::vector<double> frequencies() const;
  void merge(const Histogram& other);
};

// Throws DomainError on empty input or edges that are not strictly increasing.
Histogram empirical_distribution(std::span<const TripleSample> samples, Coordinate projection,
                                 const std::vector<double>& edges, bool track_atom_at_zero = true);

// sup_x |F_n(x) - F(x)| over sorted samples.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);
// Same supremum restricted to x in [lo, hi]; F_n still uses all samples.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf,
                    double lo, double hi);

// Asymptotic Kolmogorov p-value P(sqrt(n) D > d sqrt(n)).
double kolmogorov_pvalue(double d, std::size_t n);

// Piecewise-linear distribution function on a grid with an optional atom at
// the left end.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> x, std::vector<double> cdf);
  // Integrates density values on an increasing positive grid: a local power
  // law x^p below the first node, parabolas in log x above (grid should be
  // geometric). atom is added at 0. head, when known, is the mass on (0, x0]
  // and only the shape of the power law is used there. Values between nodes
  // are cubic Hermite with the density as slope.
  static TabulatedCdf from_density(const std::vector<double>& x, const std::vector<double>& density,
                                   double atom = 0.0, std::optional<double> head = std::nullopt);
  double operator()(double x) const;
  double mass() const { return cdf_.back(); }

 private:
  std::vector<double> x_, cdf_;
  std::vector<double> pdf_;  // empty for tables built from CDF values: linear
};

// Distribution function of sup_{[0,t]} X from sup_marginal_density on a
// geometric grid with points nodes in [x_max 1e-5, x_max], continued at the
// same spacing down to about x_max 1e-12, plus the atom at 0. The mass below
// the first node is integrated directly.
TabulatedCdf sup_marginal_cdf(const ProcessModel& model, double t, double x_max, int points = 160,
                              const QuadratureConfig& cfg = {});

// Distance covariance (V-statistic) of two samples in O(n log n).
double distance_covariance(std::span<const double> x, std::span<const double> y);
double distance_correlation(std::span<const double> x, std::span<const double> y);

struct IndependenceResult {
  std::array<double, 3> dcor{};       // pairs (0,1), (0,2), (1,2)
  std::array<double, 3> pair_pvalue{};
  double pvalue = 1.0;                // Bonferroni: min(1, 3 min pair p)
};

// Permutation test of mutual independence of the three coordinates, on
// ranks. Throws DomainError for fewer than 1000 triples or a constant coordinate.
IndependenceResult independence_statistic(std::span<const std::array<double, 3>> triples,
                                          int permutations, std::uint64_t seed);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 1.0;
  int cells = 0;  // after pooling
};

// Pearson chi-square of observed counts against cell probabilities. Cells
// with expected count below min_expected are pooled (in the given order)
// until each pooled group reaches it. The probabilities need not sum to one;
// the remainder is an extra cell with the unobserved count.
ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& probabilities, std::uint64_t total,
                                double min_expected = 5.0);

// D_inf from three distances on grids refined by the same factor, assuming
// D(n) = D_inf + C n^{-p}; p is estimated from the data and clamped to
// [p_min, p_max]. Returns the finest value when the differences change sign.
struct RichardsonResult {
  double extrapolated = 0.0;
  double rate = 0.0;
  bool monotone = false;
};
RichardsonResult richardson_extrapolate(double coarse, double mid, double fine, double factor,
                                        double p_min = 0.1, double p_max = 2.0);

}  // namespace levysup
