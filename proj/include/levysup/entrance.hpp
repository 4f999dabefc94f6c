#pragma once

// Entrance laws q_t (excursions of the reflected process sup X - X, measure n)
// and q*_t (excursions of X - inf X, measure n*), normalized by
// kappa(1,0) = kappa*(1,0) = 1, and their lifetime tails n(t < zeta).

#include "levysup/model.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

enum class Side {
  Supremum,  // q_t, n
  Infimum,   // q*_t, n*
};

struct EntranceLaw {
  ProcessModel model;
  Side side = Side::Supremum;
  QuadratureConfig quadrature{};
};

// Density of q_t (or q*_t) at x >= 0. Supported:
//   Brownian with drift (both sides), symmetric Cauchy (both sides),
//   Stable(2, 1/2) (both sides, by scaling from Brownian motion),
//   spectrally negative stable on the Infimum side (q*_t(x) = x p_t(x) / t),
//   Stable(alpha, 1 - 1/alpha) on the Supremum side (the dual of the above).
// Throws UnsupportedOperation for other pairs and DomainError for t <= 0.
double entrance_density(const EntranceLaw& law, double t, double x);

// n(t < zeta) or n*(t < zeta). Closed form for stable-type models, quadrature
// of the density for Brownian motion with drift, and gamma P(tau_0^+ > t) on
// the irregular side of a compound Poisson model.
double lifetime_tail(const EntranceLaw& law, double t);

bool has_entrance_density(const ProcessModel& model, Side side);

// g(y) = exp(-(1/pi) int_0^inf log(y + s) / (1 + s^2) ds), interpolated from a
// table built on first use.
double cauchy_inner_factor(double y);

// Same quantity by direct quadrature (no table).
double cauchy_inner_factor_direct(double y, const QuadratureConfig& cfg = {});

// Unit-time Cauchy density with the integral term weighted by 1/(2 pi), the
// form whose mass is wrong; kept for comparison.
double cauchy_uncorrected_density(double x, const QuadratureConfig& cfg = {});

// q_1 for the symmetric Cauchy process under kappa(1,0) = 1:
//   (sqrt(2) sin(pi/8 + 3/2 atan x) (1+x^2)^{-3/4}
//    - (1/pi) int_0^inf y g(y) / ((1+y^2)(x y + 1)^{3/2}) dy) / (2 sqrt(pi)).
double cauchy_unit_density(double x, const QuadratureConfig& cfg = {});

// Brownian constant kappa_0(1,0) = sqrt(c^2 + 2) - c of the ladder time when
// the local time at the supremum is sup X itself.
double brownian_ladder_scale(double drift);

}  // namespace levysup
