#pragma once

// Fluctuation identities: Fristedt's formula for the ladder exponent, the
// Wiener-Hopf product, the semigroup rebuilt from entrance laws, and the
// subordinator identities behind the density of an inverse subordinator.

#include <string>
#include <vector>

#include "levysup/model.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

enum class KappaMethod { FristedtQuadrature, ClosedForm };

struct LadderExponent {
  ProcessModel model;
  KappaMethod method = KappaMethod::FristedtQuadrature;
  QuadratureConfig quadrature{};
  // Split point of the time integral: [0, eps] is integrated with an
  // endpoint-singular map, (eps, inf) with ordinary panels.
  double small_time = 1e-3;
};

// kappa(alpha, beta) = exp( int_0^inf dt/t int_[0,inf) (e^{-t} - e^{-alpha t - beta x}) P(X_t in dx) ).
// Needs an absolutely continuous marginal law (Brownian, Cauchy, stable).
// alpha = beta = 0 is accepted only for models drifting to -infinity.
double fristedt_kappa(const ProcessModel& model, double alpha, double beta,
                      const QuadratureConfig& cfg = {}, double small_time = 1e-3);

// Closed forms: Brownian with drift, (beta + sqrt(c^2 + 2 alpha) - c) / (sqrt(c^2 + 2) - c);
// stable with beta = 0, alpha^rho. Throws UnsupportedOperation otherwise.
double closed_form_kappa(const ProcessModel& model, double alpha, double beta);

double ladder_exponent(const LadderExponent& k, double alpha, double beta);

// kappa(alpha, 0) kappa*(alpha, 0) / alpha - 1 with kappa* taken from the dual model.
double wiener_hopf_residual(const ProcessModel& model, double alpha,
                            const QuadratureConfig& cfg = {});

// eps int_0^inf e^{-eps t} n(t < zeta) dt + eps d, which should equal kappa(eps, 0).
double excursion_kappa(const ProcessModel& model, double eps, const QuadratureConfig& cfg = {});

// p_t on the grid from int_0^t qbar_s * q*_{t-s} ds + d q*_t + d* qbar_t,
// qbar_s(x) = q_s(-x) on x <= 0. Brownian with drift and Cauchy.
std::vector<double> semigroup_reconstruct(const ProcessModel& model, double t,
                                          const std::vector<double>& grid,
                                          const QuadratureConfig& cfg = {});

enum class SubordinatorFamily { StableSubordinator, PureDrift };

// nu_bar(t) = nu(t, inf) + k. StableSubordinator: nu(t, inf) = C t^{-index},
// index in (0, 1); PureDrift: no jumps.
struct SubordinatorModel {
  SubordinatorFamily family = SubordinatorFamily::StableSubordinator;
  double index = 0.5;
  double tail_constant = 1.0;  // C
  double drift = 0.0;          // b
  double killing = 0.0;        // k

  double tail(double t) const;
  void validate() const;
};

SubordinatorModel stable_subordinator(double index, double tail_constant, double drift = 0.0,
                                      double killing = 0.0);
SubordinatorModel pure_drift_subordinator(double drift, double killing = 0.0);

// Phi(alpha) = alpha b + alpha int_0^inf e^{-alpha t} nu_bar(t) dt, by quadrature.
double subordinator_phi(const SubordinatorModel& sub, double alpha, const QuadratureConfig& cfg = {});
// Same quantity in closed form: alpha b + C Gamma(1 - index) alpha^index + k.
double subordinator_phi_closed(const SubordinatorModel& sub, double alpha);

// Density of S_x (absolutely continuous part; S_x is killed with probability
// 1 - e^{-k x}). Index 1/2 uses the closed form, other indices the stable density.
double subordinator_density(const SubordinatorModel& sub, double x, double s,
                            const QuadratureConfig& cfg = {});
double subordinator_survival(const SubordinatorModel& sub, double x, double t,
                             const QuadratureConfig& cfg = {});

// Density of L_t = inf{u : S_u > t}: int_(0,t] nu_bar(t - s) P(S_x in ds).
// Throws PreconditionError when the subordinator has a drift.
double inverse_subordinator_density(const SubordinatorModel& sub, double t, double x,
                                    const QuadratureConfig& cfg = {});

// Both sides of
//   P(S_x > t) dt = int_0^x int_(0,t] nu_bar(t-s) P(S_y in ds) dy dt + b int_0^x P(S_y in dt) dy
// as densities in t on a grid, and their total-variation distance.
struct DriftedIdentityReport {
  std::vector<double> t;
  std::vector<double> lhs, rhs;
  double tv_distance = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
DriftedIdentityReport drifted_identity_check(const SubordinatorModel& sub, double x, double t_max,
                                             int points, double tolerance,
                                             const QuadratureConfig& cfg = {});

}  // namespace levysup
