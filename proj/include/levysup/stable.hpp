#pragma once

// Marginal densities p_t of the catalog models, with three independent
// evaluators for strictly stable laws:
//   * the convergent power series (index > 1),
//   * Zolotarev's non-oscillatory integral (the Fourier inversion of
//     exp(-psi) moved onto the steepest-descent contour),
//   * plain Fourier inversion on the real line.
// All use psi(l) = |l|^alpha exp(-i pi alpha (rho - 1/2) sgn l).

#include "levysup/model.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

struct SeriesValue {
  double value = 0.0;
  // Largest |term| seen, for cancellation diagnostics.
  double max_term = 0.0;
  int terms = 0;
  bool converged = false;
};

// p_1(x) = (1/pi) sum_{n>=1} (-1)^{n-1} Gamma(1+n/alpha)/n! sin(n pi rho) x^{n-1}
// for x >= 0 and alpha in (1, 2); x < 0 uses rho -> 1 - rho.
SeriesValue stable_density_series(double alpha, double rho, double x, int max_terms,
                                  double rel_tol = 1e-15);

// Zolotarev integral representation, alpha != 1, rho in [0, 1].
double stable_density_integral(double alpha, double rho, double x,
                               const QuadratureConfig& cfg = {});

// (1/pi) int_0^inf exp(-l^alpha cos phi) cos(l^alpha sin phi - l x) dl.
double stable_density_fourier(double alpha, double rho, double x,
                              const QuadratureConfig& cfg = {});

// Unit-time density p_1(x) of a stable-type model (Cauchy, Brownian with
// zero drift, Stable, SpectrallyNegativeStable). For index > 1 the series is
// used while its cancellation stays below a fixed budget, and the integral
// representation beyond. Throws UnsupportedOperation otherwise.
double stable_unit_density(const ProcessModel& model, double x,
                           const QuadratureConfig& cfg = {});

// Density of X_t at x for every model with an absolutely continuous
// marginal law (Brownian with drift and the stable-type models).
double marginal_density(const ProcessModel& model, double t, double x,
                        const QuadratureConfig& cfg = {});

// Density of a positive stable law with E exp(-q S) = exp(-q^alpha),
// alpha in (0, 1).
double positive_stable_density(double alpha, double s, const QuadratureConfig& cfg = {});

// Chambers-Mallows-Stuck draw from the unit-time law, given an angle
// uniform on (-pi/2, pi/2) and a standard exponential.
double stable_from_uniforms(double alpha, double rho, double angle, double exponential);

}  // namespace levysup
