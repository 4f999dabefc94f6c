#include "levysup/model.hpp"

#include <cmath>
#include <numbers>

#include "levysup/compound_poisson.hpp"
#include "levysup/errors.hpp"

namespace levysup {

std::string to_string(Family f) {
  switch (f) {
    case Family::BrownianWithDrift: return "BrownianWithDrift";
    case Family::SymmetricCauchy: return "SymmetricCauchy";
    case Family::Stable: return "Stable";
    case Family::SpectrallyNegativeStable: return "SpectrallyNegativeStable";
    case Family::CompoundPoissonWithDrift: return "CompoundPoissonWithDrift";
  }
  return "unknown";
}

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::Type1: return "Type1";
    case Regularity::Type2: return "Type2";
    case Regularity::Type3: return "Type3";
  }
  return "unknown";
}

namespace {

constexpr double kRhoTol = 1e-12;

bool finite(double v) { return std::isfinite(v); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

// Ladder exponent constants of Brownian motion with drift c under
// kappa(1,0) = 1: kappa(a,b) = (b + sqrt(c^2+2a) - c) / (sqrt(c^2+2) - c).
double brownian_killing(double c) {
  if (c >= 0.0) return 0.0;
  return -2.0 * c / (std::sqrt(c * c + 2.0) - c);
}

// Killing rate of tau for the compound Poisson family. v = |drift|, and
// r m - v is the mean of the irregular-side orientation (upward jumps).
//   Type3: a = gamma P(tau_0^+ = inf) with ruin probability r m / v from 0.
//   Type2: a = lim alpha / kappa*(alpha,0) = 1 / (gamma E tau_0^+(-X)); the
//          overshoot of exponential jumps is exponential, E tau = m / (r m - v).
double compound_poisson_killing(Regularity type, double r, double m, double v, double g) {
  const double mean_up = r * m - v;
  if (type == Regularity::Type3) return mean_up < 0.0 ? g * (1.0 - r * m / v) : 0.0;
  return mean_up > 0.0 ? mean_up / (g * m) : 0.0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

std::optional<double> ProcessModel::gamma() const {
  if (regularity_ != Regularity::Type3 || !gamma_) return std::nullopt;
  return gamma_->value;
}

bool ProcessModel::is_stable_type() const {
  switch (family_) {
    case Family::SymmetricCauchy:
    case Family::Stable:
    case Family::SpectrallyNegativeStable:
      return true;
    case Family::BrownianWithDrift:
      return drift_ == 0.0;
    case Family::CompoundPoissonWithDrift:
      return false;
  }
  return false;
}

ModelParams ProcessModel::params() const {
  ModelParams p;
  p.family = family_;
  p.drift = drift_;
  p.index = index_;
  p.rho = rho_;
  p.jump_rate = jump_rate_;
  p.jump_mean = jump_mean_;
  p.jump_sign = jump_sign_;
  p.gamma_seed = gamma_seed_;
  p.gamma_samples = gamma_samples_;
  return p;
}

ProcessModel classify_model(const ModelParams& in) {
  ProcessModel m;
  m.family_ = in.family;
  switch (in.family) {
    case Family::BrownianWithDrift: {
      require(finite(in.drift), "Brownian drift must be finite");
      m.drift_ = in.drift;
      m.index_ = 2.0;
      m.rho_ = normal_cdf(in.drift);
      m.regularity_ = Regularity::Type1;
      m.killing_rate_ = brownian_killing(in.drift);
      break;
    }
    case Family::SymmetricCauchy: {
      m.index_ = 1.0;
      m.rho_ = 0.5;
      m.regularity_ = Regularity::Type1;
      break;
    }
    case Family::Stable: {
      const double a = in.index, r = in.rho;
      require(finite(a) && a > 0.0 && a <= 2.0, "stable index must lie in (0, 2]");
      require(finite(r) && r > 0.0 && r < 1.0, "positivity parameter must lie in (0, 1)");
      if (a == 2.0 || a == 1.0)
        require(std::abs(r - 0.5) < kRhoTol, "stable index 1 and 2 require rho = 1/2");
      if (a > 1.0)
        require(r >= 1.0 - 1.0 / a - kRhoTol && r <= 1.0 / a + kRhoTol,
                "for index alpha > 1, rho must lie in [1 - 1/alpha, 1/alpha]");
      if (a == 1.0) return cauchy();
      if (a > 1.0 && a < 2.0 && std::abs(r - 1.0 / a) < kRhoTol)
        return spectrally_negative_stable(a);
      m.index_ = a;
      m.rho_ = (a == 2.0) ? 0.5 : r;
      if (a > 1.0 && std::abs(r - (1.0 - 1.0 / a)) < kRhoTol) m.rho_ = 1.0 - 1.0 / a;
      m.regularity_ = Regularity::Type1;
      break;
    }
    case Family::SpectrallyNegativeStable: {
      const double a = in.index;
      require(finite(a) && a > 1.0 && a < 2.0,
              "spectrally negative stable index must lie in (1, 2)");
      m.index_ = a;
      m.rho_ = 1.0 / a;
      m.regularity_ = Regularity::Type1;
      break;
    }
    case Family::CompoundPoissonWithDrift: {
      require(finite(in.jump_rate) && in.jump_rate > 0.0, "jump rate must be positive");
      require(finite(in.jump_mean) && in.jump_mean > 0.0, "jump mean must be positive");
      require(finite(in.drift) && in.drift != 0.0,
              "compound Poisson model needs a nonzero drift");
      const bool up = in.jump_sign == JumpSign::Positive;
      require(up == (in.drift < 0.0),
              "drift and jumps must have opposite signs (otherwise X or -X is a subordinator)");
      m.drift_ = in.drift;
      m.jump_rate_ = in.jump_rate;
      m.jump_mean_ = in.jump_mean;
      m.jump_sign_ = in.jump_sign;
      m.index_ = 0.0;
      m.rho_ = 0.0;
      m.gamma_seed_ = in.gamma_seed;
      m.gamma_samples_ = in.gamma_samples;
      const auto side = UpwardJumpProcess{in.jump_rate, in.jump_mean, std::abs(in.drift)};
      m.gamma_ = estimate_ladder_gamma(side, in.gamma_seed, in.gamma_samples);
      const double g = m.gamma_->value;
      if (up) {
        m.regularity_ = Regularity::Type3;
        m.ladder_drift_star_ = 1.0 / g;
      } else {
        m.regularity_ = Regularity::Type2;
        m.ladder_drift_ = 1.0 / g;
      }
      m.killing_rate_ = compound_poisson_killing(m.regularity_, in.jump_rate, in.jump_mean,
                                                 std::abs(in.drift), g);
      break;
    }
  }
  if (in.family != Family::CompoundPoissonWithDrift) {
    m.gamma_seed_ = 0;
    m.gamma_samples_ = 0;
  }
  return m;
}

std::complex<double> char_exponent(const ProcessModel& m, double lambda) {
  using namespace std::complex_literals;
  switch (m.family()) {
    case Family::BrownianWithDrift:
      return 0.5 * lambda * lambda - 1i * m.drift() * lambda;
    case Family::SymmetricCauchy:
      return std::abs(lambda);
    case Family::Stable:
    case Family::SpectrallyNegativeStable: {
      if (lambda == 0.0) return 0.0;
      const double phase = std::numbers::pi * m.index() * (m.rho() - 0.5);
      const double mag = std::pow(std::abs(lambda), m.index());
      const double sgn = lambda > 0.0 ? 1.0 : -1.0;
      return mag * std::exp(-1i * phase * sgn);
    }
    case Family::CompoundPoissonWithDrift: {
      const double s = m.jump_sign() == JumpSign::Positive ? 1.0 : -1.0;
      const std::complex<double> cf = 1.0 / (1.0 - 1i * lambda * m.jump_mean() * s);
      return -1i * m.drift() * lambda + m.jump_rate() * (1.0 - cf);
    }
  }
  return 0.0;
}

double positivity_param(const ProcessModel& m) {
  if (m.family() == Family::CompoundPoissonWithDrift)
    throw UnsupportedOperation("positivity parameter is defined for stable-type and Brownian models");
  return m.rho();
}

ProcessModel dual_model(const ProcessModel& m) {
  ProcessModel d = m;
  switch (m.family()) {
    case Family::BrownianWithDrift:
      d.drift_ = -m.drift_;
      // Recomputed from the closed form so that dual(dual(m)) == m bitwise.
      d.rho_ = normal_cdf(d.drift_);
      d.killing_rate_ = brownian_killing(d.drift_);
      break;
    case Family::SymmetricCauchy:
      break;
    case Family::Stable: {
      const double a = m.index_;
      if (a > 1.0 && a < 2.0 && m.rho_ == 1.0 - 1.0 / a) return spectrally_negative_stable(a);
      d.rho_ = 1.0 - m.rho_;
      break;
    }
    case Family::SpectrallyNegativeStable:
      d.family_ = Family::Stable;
      d.rho_ = 1.0 - 1.0 / m.index_;
      break;
    case Family::CompoundPoissonWithDrift: {
      d.drift_ = -m.drift_;
      d.jump_sign_ = m.jump_sign_ == JumpSign::Positive ? JumpSign::Negative : JumpSign::Positive;
      d.regularity_ = m.regularity_ == Regularity::Type3 ? Regularity::Type2 : Regularity::Type3;
      std::swap(d.ladder_drift_, d.ladder_drift_star_);
      d.killing_rate_ = compound_poisson_killing(d.regularity_, d.jump_rate_, d.jump_mean_,
                                                 std::abs(d.drift_), d.gamma_->value);
      break;
    }
  }
  return d;
}

ProcessModel brownian(double drift) {
  ModelParams p;
  p.family = Family::BrownianWithDrift;
  p.drift = drift;
  return classify_model(p);
}

ProcessModel cauchy() {
  ModelParams p;
  p.family = Family::SymmetricCauchy;
  return classify_model(p);
}

ProcessModel stable(double index, double rho) {
  ModelParams p;
  p.family = Family::Stable;
  p.index = index;
  p.rho = rho;
  return classify_model(p);
}

ProcessModel spectrally_negative_stable(double index) {
  ModelParams p;
  p.family = Family::SpectrallyNegativeStable;
  p.index = index;
  return classify_model(p);
}

ProcessModel compound_poisson(double rate, double jump_mean, JumpSign sign, double drift) {
  ModelParams p;
  p.family = Family::CompoundPoissonWithDrift;
  p.jump_rate = rate;
  p.jump_mean = jump_mean;
  p.jump_sign = sign;
  p.drift = drift;
  return classify_model(p);
}

}  // namespace levysup
