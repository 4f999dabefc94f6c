#include "levysup/compound_poisson.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "levysup/errors.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

namespace {

// exp(-z) I_1(z) for z >= 0.
double scaled_bessel_i1(double z) {
  if (z < 700.0) return std::exp(-z) * std::cyl_bessel_i(1.0, z);
  const double iz = 1.0 / z;
  const double series = 1.0 - 0.375 * iz - 0.1171875 * iz * iz - 0.1025390625 * iz * iz * iz;
  return series / std::sqrt(2.0 * std::numbers::pi * z);
}

struct BesselConstants {
  double a, b, coef;
};

BesselConstants constants(const UpwardJumpProcess& p) {
  const double a = p.drift_down / p.jump_mean + p.rate;
  const double b = 2.0 * std::sqrt(p.drift_down * p.rate / p.jump_mean);
  return {a, b, p.jump_mean * b / (2.0 * p.drift_down)};
}

// e^{-A u} I_1(B u) / u, with the u -> 0 limit B/2.
double kernel(const BesselConstants& k, double u) {
  if (u <= 0.0) return 0.5 * k.b;
  const double z = k.b * u;
  if (z < 1e-8) return 0.5 * k.b * std::exp(-k.a * u);
  return std::exp(-(k.a - k.b) * u) * scaled_bessel_i1(z) / u;
}

}  // namespace

UpwardJumpProcess UpwardJumpProcess::irregular_side_of(const ProcessModel& model) {
  if (model.family() != Family::CompoundPoissonWithDrift)
    throw PreconditionError("irregular-side process is defined for compound Poisson models only");
  return {model.jump_rate(), model.jump_mean(), std::abs(model.drift())};
}

double simulate_first_passage(const UpwardJumpProcess& p, double horizon, PathRng& rng) {
  double t = 0.0;
  double x = 0.0;
  for (std::uint32_t k = 0;; ++k) {
    rng.seek(k);
    const double wait = rng.exponential() / p.rate;
    t += wait;
    if (t > horizon) return std::numeric_limits<double>::infinity();
    x += -p.drift_down * wait + p.jump_mean * rng.exponential();
    if (x > 0.0) return t;
  }
}

double first_passage_density(const UpwardJumpProcess& p, double t) {
  if (t <= 0.0) return 0.0;
  const auto k = constants(p);
  return k.coef * kernel(k, t);
}

double first_passage_survival(const UpwardJumpProcess& p, double t) {
  if (t <= 0.0) return 1.0;
  const auto k = constants(p);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-13;
  auto f = [&](double u) { return kernel(k, u); };
  const auto bp = geometric_breakpoints(0.0, t, 4, 0.1, false, false);
  const double mass = k.coef * integrate(f, std::span<const double>(bp), cfg).value;
  return std::clamp(1.0 - mass, 0.0, 1.0);
}

LadderGamma estimate_ladder_gamma(const UpwardJumpProcess& p, std::uint64_t seed,
                                  std::uint64_t samples) {
  if (samples < 2) throw DomainError("gamma estimation needs at least two samples");
  // exp(-40) is below double resolution of the mean, so later passages count as 0.
  constexpr double horizon = 40.0;
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    PathRng rng(seed, i);
    const double tau = simulate_first_passage(p, horizon, rng);
    const double v = std::isfinite(tau) ? std::exp(-tau) : 0.0;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(samples);
  const double se_mean = std::sqrt(m2 / (n - 1.0) / n);
  const double denom = 1.0 - mean;
  LadderGamma g;
  g.value = 1.0 / denom;
  g.std_error = se_mean / (denom * denom);
  g.seed = seed;
  g.samples = samples;
  return g;
}

}  // namespace levysup
