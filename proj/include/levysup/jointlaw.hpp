#pragma once

// Law of (g_t, sup_{[0,t]} X, sup - X_t) assembled from entrance laws:
//
//   P(g_t in ds, sup in dx, sup - X_t in dy)
//     = q*_s(x) q_{t-s}(y) ds dx dy          (density part, 0 < s < t)
//     + d q*_t(x) delta_t(ds) delta_0(dy) dx  (type 2 only)
//     + d* delta_0(ds) delta_0(dx) q_t(y) dy  (type 3 only)

#include <vector>

#include "levysup/entrance.hpp"
#include "levysup/model.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

struct JointAtoms {
  // Component d q*_t(dx) at g_t = t, sup - X_t = 0 (type 2).
  double end_coefficient = 0.0;
  double end_mass = 0.0;  // d n*(t < zeta)
  // Component d* q_t(dy) at g_t = 0, sup = 0 (type 3).
  double start_coefficient = 0.0;
  double start_mass = 0.0;  // d* n(t < zeta)
};

JointAtoms joint_atoms(const ProcessModel& model, double t, const QuadratureConfig& cfg = {});

// Density part at (s, x, y), 0 < s < t. Throws DomainError otherwise.
double joint_density(const ProcessModel& model, double t, double s, double x, double y,
                     const QuadratureConfig& cfg = {});

// Same density in the coordinates (g_t, sup, X_t); the Jacobian is 1.
double joint_density_terminal(const ProcessModel& model, double t, double s, double x,
                              double terminal, const QuadratureConfig& cfg = {});

// Total mass: int_0^t (int q*_s)(int q_{t-s}) ds + atom masses. The inner
// integrals are quadratures of the entrance densities; when only q* is
// implemented the y-integral falls back on the lifetime tail n(t-s < zeta).
double joint_total_mass(const ProcessModel& model, double t, const QuadratureConfig& cfg = {});

// Density of sup_{[0,t]} X at x > 0:
//   int_0^t n(t-s < zeta) q*_s(x) ds + d q*_t(x).
// At x = 0 the right limit is returned (sup_marginal_density_at_zero).
double sup_marginal_density_at_zero(const ProcessModel& model, double t);
double sup_marginal_density(const ProcessModel& model, double t, double x,
                            const QuadratureConfig& cfg = {});

// Atom of sup_{[0,t]} X at 0: d* n(t < zeta).
double sup_atom_mass(const ProcessModel& model, double t, const QuadratureConfig& cfg = {});

// Density of g_t for type 1 models: n*(s < zeta) n(t-s < zeta).
double gt_density(const ProcessModel& model, double t, double s, const QuadratureConfig& cfg = {});

// sin(pi rho)/pi s^{rho-1} (t-s)^{-rho} and its distribution function.
double generalized_arcsine_density(double rho, double t, double s);
double generalized_arcsine_cdf(double rho, double t, double s);

// Independent factors of a stable process:
//   g_t                            ~ generalized arcsine on [0, t]
//   sup / g_t^{1/alpha}            ~ Gamma(rho) q*_1(x)
//   (sup - X_t) / (t - g_t)^{1/alpha} ~ Gamma(1 - rho) q_1(y)
// alpha = 2 stands for standard Brownian motion, alpha = 1 for the symmetric
// Cauchy process, alpha in (1, 2) with rho = 1/alpha for the spectrally
// negative process (whose third factor has no implemented density).
struct StableTripleFactors {
  ProcessModel model;
  double alpha = 0.0;
  double rho = 0.0;
  QuadratureConfig quadrature{};

  double time_density(double t, double s) const;
  double sup_density(double x) const;
  double gap_density(double y) const;
  // Joint density rebuilt from the factors through the scaling maps.
  double joint_density(double t, double s, double x, double y) const;
};

StableTripleFactors stable_triple_factors(double alpha, double rho, const QuadratureConfig& cfg = {});

enum class SnPath {
  SemigroupForm,  // c x p_s(x) n(t-s < zeta) / s with p_s from stable_unit_density
  Series,         // power series in x, summed in extended precision
};

struct SnSeriesValue {
  double value = 0.0;
  double remainder_bound = 0.0;
  int terms = 0;
  bool converged = false;
};

// Joint density of (g_t, sup) for the spectrally negative alpha-stable
// process at s in (0, t], x > 0 (infinite at s = t).
double sn_gt_sup_density(double alpha, double t, double s, double x,
                         SnPath path = SnPath::SemigroupForm, const QuadratureConfig& cfg = {});

// Series path with diagnostics. The series is stopped once at least 8 terms
// are in and the geometric tail bound is below rel_tol |sum|; it reports
// non-convergence after cfg.series_cap terms.
SnSeriesValue sn_series_density(double alpha, double t, double s, double x,
                                const QuadratureConfig& cfg = {});

// P(g_t in [s0, s1], sup in [x0, x1]) for the spectrally negative process.
class SnCellIntegrator {
 public:
  SnCellIntegrator(double alpha, double t, const QuadratureConfig& cfg = {});
  double cell(double s0, double s1, double x0, double x1) const;
  // G(u) = int_0^u v p_1(v) dv.
  double first_moment_cdf(double u) const;

 private:
  double alpha_, t_;
  ProcessModel model_;
  QuadratureConfig cfg_;
  std::vector<double> u_, g_, dg_;
};

// Law of (g_inf, sup_{[0,inf)} X) for models drifting to -infinity.
struct AllTimeLaw {
  double density = 0.0;    // a q*_s(x)
  double atom_mass = 0.0;  // d* a at (0, 0)
};
AllTimeLaw sup_all_time_law(const ProcessModel& model, double s, double x,
                            const QuadratureConfig& cfg = {});

// Marginal density of sup_{[0,inf)} X: a int_0^inf q*_s(x) ds.
double sup_all_time_density(const ProcessModel& model, double x, const QuadratureConfig& cfg = {});

}  // namespace levysup
