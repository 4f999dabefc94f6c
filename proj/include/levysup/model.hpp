#pragma once

// Catalog of parametric Lévy processes.
//
// Parameterization (fixed, used by every module):
//   BrownianWithDrift(c)       X_t = B_t + c t,           psi(l) = l^2/2 - i c l
//   SymmetricCauchy            psi(l) = |l|
//   Stable(alpha, rho)         psi(l) = |l|^alpha exp(-i pi alpha (rho - 1/2) sgn l)
//   SpectrallyNegativeStable   Stable with rho = 1/alpha, alpha in (1, 2);
//                              equivalently E exp(theta X_1) = exp(theta^alpha)
//   CompoundPoissonWithDrift   X_t = drift * t + sum of exponential jumps
//                              (rate r, mean m, one sign), drift of opposite sign
//
// Stable(1, 1/2) is stored as SymmetricCauchy and Stable(alpha, 1/alpha) with
// alpha in (1, 2) as SpectrallyNegativeStable, so dual_model is an involution.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace levysup {

enum class Family {
  BrownianWithDrift,
  SymmetricCauchy,
  Stable,
  SpectrallyNegativeStable,
  CompoundPoissonWithDrift,
};

enum class Regularity { Type1, Type2, Type3 };

enum class JumpSign { Positive, Negative };

std::string to_string(Family f);
std::string to_string(Regularity r);

struct ModelParams {
  Family family = Family::BrownianWithDrift;
  double drift = 0.0;       // BrownianWithDrift, CompoundPoissonWithDrift
  double index = 2.0;       // stable index alpha
  double rho = 0.5;         // positivity parameter (Stable only)
  double jump_rate = 1.0;   // CompoundPoissonWithDrift
  double jump_mean = 1.0;   // mean absolute jump size (exponential law)
  JumpSign jump_sign = JumpSign::Positive;
  // Monte Carlo settings for the ladder constant gamma (compound Poisson only).
  std::uint64_t gamma_seed = 0x5eed0fd1ab0105ULL;
  std::uint64_t gamma_samples = 1u << 18;
};

// gamma = (1 - E exp(-tau_0^+))^{-1} for the side of the process on which 0 is
// irregular, estimated by simulation.
struct LadderGamma {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  bool operator==(const LadderGamma&) const = default;
};

class ProcessModel {
 public:
  Family family() const { return family_; }
  double drift() const { return drift_; }
  double index() const { return index_; }
  double rho() const { return rho_; }
  double jump_rate() const { return jump_rate_; }
  double jump_mean() const { return jump_mean_; }
  JumpSign jump_sign() const { return jump_sign_; }

  Regularity regularity() const { return regularity_; }
  // Drift d of the ladder time tau (0 unless Type2).
  double ladder_drift() const { return ladder_drift_; }
  // Drift d* of tau* (0 unless Type3); equals 1/gamma for Type3.
  double ladder_drift_star() const { return ladder_drift_star_; }
  // Killing rate a of tau (positive iff X drifts to -infinity).
  double killing_rate() const { return killing_rate_; }
  // gamma for Type3 models.
  std::optional<double> gamma() const;
  // gamma estimate of the irregular side (Type2 or Type3).
  const std::optional<LadderGamma>& ladder_gamma() const { return gamma_; }

  bool is_stable_type() const;

  ModelParams params() const;

  bool operator==(const ProcessModel&) const = default;

 private:
  friend ProcessModel classify_model(const ModelParams&);
  friend ProcessModel dual_model(const ProcessModel&);

  Family family_ = Family::BrownianWithDrift;
  double drift_ = 0.0;
  double index_ = 2.0;
  double rho_ = 0.5;
  double jump_rate_ = 0.0;
  double jump_mean_ = 0.0;
  JumpSign jump_sign_ = JumpSign::Positive;
  Regularity regularity_ = Regularity::Type1;
  double ladder_drift_ = 0.0;
  double ladder_drift_star_ = 0.0;
  double killing_rate_ = 0.0;
  std::optional<LadderGamma> gamma_;
  std::uint64_t gamma_seed_ = 0;
  std::uint64_t gamma_samples_ = 0;
};

// Validates parameters and fills in the regularity type and ladder constants.
// Throws DomainError for out-of-range parameters.
ProcessModel classify_model(const ModelParams& params);

// psi(lambda) with E exp(i lambda X_t) = exp(-t psi(lambda)).
std::complex<double> char_exponent(const ProcessModel& model, double lambda);

// rho = P(X_1 >= 0). Throws UnsupportedOperation for compound Poisson models.
double positivity_param(const ProcessModel& model);

// Model of -X.
ProcessModel dual_model(const ProcessModel& model);

// Convenience constructors.
ProcessModel brownian(double drift);
ProcessModel cauchy();
ProcessModel stable(double index, double rho);
ProcessModel spectrally_negative_stable(double index);
ProcessModel compound_poisson(double rate, double jump_mean, JumpSign sign, double drift);

}  // namespace levysup
