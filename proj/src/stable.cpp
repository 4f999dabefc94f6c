#include "levysup/stable.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "levysup/errors.hpp"

namespace levysup {

namespace {

constexpr double kPi = std::numbers::pi;

// Cancellation budget for the double-precision series: the largest term may
// exceed the sum by at most this factor before we switch to the integral.
constexpr double kSeriesCancellation = 1e3;

void check_params(double alpha, double rho) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable index must lie in (0, 2]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("positivity parameter must lie in [0, 1]");
}

}  // namespace

SeriesValue stable_density_series(double alpha, double rho, double x, int max_terms,
                                  double rel_tol) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("series needs stable index in (1, 2)");
  check_params(alpha, rho);
  if (x < 0.0) {
    x = -x;
    rho = 1.0 - rho;
  }
  SeriesValue out;
  if (x == 0.0) {
    out.value = std::tgamma(1.0 + 1.0 / alpha) * std::sin(kPi * rho) / kPi;
    out.max_term = std::abs(out.value);
    out.terms = 1;
    out.converged = true;
    return out;
  }
  const double lx = std::log(x);
  double sum = 0.0;
  double prev_env = 0.0;
  for (int n = 1; n <= max_terms; ++n) {
    const double log_env =
        std::lgamma(1.0 + n / alpha) - std::lgamma(n + 1.0) + (n - 1) * lx;
    const double env = std::exp(log_env);
    const double term = (n % 2 == 1 ? 1.0 : -1.0) * env * std::sin(n * kPi * rho);
    sum += term;
    out.max_term = std::max(out.max_term, env / kPi);
    out.terms = n;
    // Past the peak the envelope ratio decreases, so the tail is bounded by a
    // geometric series with the current ratio.
    if (n >= 8 && prev_env > 0.0) {
      const double r = env / prev_env;
      if (r < 1.0) {
        const double tail = env * r / (1.0 - r);
        if (tail <= rel_tol * std::abs(sum)) {
          out.converged = true;
          break;
        }
      }
    }
    prev_env = env;
  }
  out.value = sum / kPi;
  return out;
}

double stable_density_integral(double alpha, double rho, double x, const QuadratureConfig& cfg) {
  check_params(alpha, rho);
  if (alpha == 1.0) throw DomainError("integral representation needs stable index != 1");
  if (x < 0.0) return stable_density_integral(alpha, 1.0 - rho, -x, cfg);
  if (x == 0.0) {
    if (alpha < 1.0 && rho == 1.0) return 0.0;
    return std::tgamma(1.0 + 1.0 / alpha) * std::sin(kPi * rho) / kPi;
  }
  const double th0 = kPi * (rho - 0.5);
  const double lo = -th0, hi = 0.5 * kPi;
  if (!(hi > lo)) return 0.0;  // rho = 0 with alpha < 1: no mass on (0, inf)
  const double e = alpha / (alpha - 1.0);
  const double log_z = e * std::log(x);

  auto log_v = [&](double th) {
    const double s = std::sin(alpha * (th0 + th));
    const double c = std::cos(th);
    return e * (std::log(c) - std::log(s)) + std::log(std::cos(alpha * th0 + (alpha - 1.0) * th)) -
           std::log(c);
  };
  auto f = [&](double th) {
    if (th <= lo || th >= hi) return 0.0;
    const double lv = log_v(th);
    if (!std::isfinite(lv)) return 0.0;
    const double zv = std::exp(lv + log_z);
    if (zv > 745.0) return 0.0;
    return std::exp(lv - zv);
  };

  // The integrand peaks where z V = 1; V is monotone so bisection finds it.
  std::vector<double> bp;
  {
    double a = lo, b = hi;
    const double w = b - a;
    a += 1e-12 * w;
    b -= 1e-12 * w;
    const double ga = log_v(a) + log_z, gb = log_v(b) + log_z;
    bp.push_back(lo);
    if (std::isfinite(ga) && std::isfinite(gb) && (ga > 0.0) != (gb > 0.0)) {
      const bool dec = ga > gb;
      for (int it = 0; it < 200 && b - a > 1e-15 * w; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = log_v(m) + log_z;
        if ((gm > 0.0) == dec) a = m; else b = m;
      }
      const double peak = 0.5 * (a + b);
      for (int k = 6; k >= 1; --k) bp.push_back(lo + (peak - lo) * (1.0 - std::pow(0.3, k)));
      bp.push_back(peak);
      for (int k = 1; k <= 6; ++k) bp.push_back(peak + (hi - peak) * (1.0 - std::pow(0.3, k)));
      // Far in the tails the peak hugs an endpoint and is about as wide as
      // its distance to it.
      const double d = std::min(peak - lo, hi - peak);
      for (double s = d; s < w; s *= 3.0) {
        if (peak - s > lo) bp.push_back(peak - s);
        if (peak + s < hi) bp.push_back(peak + s);
      }
      std::sort(bp.begin(), bp.end());
      bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    } else {
      bp.push_back(0.5 * (lo + hi));
    }
    bp.push_back(hi);
  }
  const auto r = integrate(f, std::span<const double>(bp), cfg);
  const double pref = alpha * std::exp(log_z / alpha) / (kPi * std::abs(alpha - 1.0));
  return std::max(0.0, pref * checked(r, "stable density integral"));
}

double stable_density_fourier(double alpha, double rho, double x, const QuadratureConfig& cfg) {
  check_params(alpha, rho);
  const double phi = kPi * alpha * (rho - 0.5);
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  if (!(cphi > 0.0)) throw DomainError("Fourier inversion needs cos(pi alpha (rho - 1/2)) > 0");
  const double lambda_max = std::pow(46.0 / cphi, 1.0 / alpha);
  auto f = [&](double l) {
    const double la = std::pow(l, alpha);
    return std::exp(-la * cphi) * std::cos(la * sphi - l * x);
  };
  const int panels = 8 + static_cast<int>(std::ceil(lambda_max * std::max(std::abs(x), 1.0) / kPi));
  std::vector<double> bp{0.0};
  for (int k = 8; k >= 1; --k) bp.push_back(lambda_max / panels * std::pow(0.1, k));
  for (int k = 1; k <= panels; ++k) bp.push_back(lambda_max * k / panels);
  const auto r = integrate(f, std::span<const double>(bp), cfg);
  return checked(r, "stable Fourier inversion") / kPi;
}

double stable_unit_density(const ProcessModel& m, double x, const QuadratureConfig& cfg) {
  if (!m.is_stable_type())
    throw UnsupportedOperation("unit-time stable density needs a stable-type model");
  switch (m.family()) {
    case Family::SymmetricCauchy:
      return 1.0 / (kPi * (1.0 + x * x));
    case Family::BrownianWithDrift:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    default:
      break;
  }
  const double a = m.index(), rho = m.rho();
  if (a == 2.0) return std::exp(-0.25 * x * x) / (2.0 * std::sqrt(kPi));
  if (a > 1.0 && std::abs(x) <= 4.0) {
    const auto s = stable_density_series(a, rho, x, cfg.series_cap);
    if (s.converged && s.value > 0.0 && s.max_term <= kSeriesCancellation * s.value)
      return s.value;
  }
  return stable_density_integral(a, rho, x, cfg);
}

double marginal_density(const ProcessModel& m, double t, double x, const QuadratureConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  switch (m.family()) {
    case Family::BrownianWithDrift: {
      const double z = (x - m.drift() * t);
      return std::exp(-0.5 * z * z / t) / std::sqrt(2.0 * kPi * t);
    }
    case Family::SymmetricCauchy:
      return t / (kPi * (t * t + x * x));
    case Family::Stable:
    case Family::SpectrallyNegativeStable: {
      const double sc = std::pow(t, 1.0 / m.index());
      return stable_unit_density(m, x / sc, cfg) / sc;
    }
    case Family::CompoundPoissonWithDrift:
      break;
  }
  throw UnsupportedOperation("marginal density is not absolutely continuous for this model");
}

double positive_stable_density(double alpha, double s, const QuadratureConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("positive stable index must lie in (0, 1)");
  if (!(s > 0.0)) return 0.0;
  return stable_density_integral(alpha, 1.0, s, cfg);
}

double stable_from_uniforms(double alpha, double rho, double angle, double w) {
  if (alpha == 1.0) return std::tan(angle);  // symmetric Cauchy only
  const double phi = kPi * alpha * (rho - 0.5);
  const double a = std::sin(alpha * angle + phi) / std::pow(std::cos(angle), 1.0 / alpha);
  const double b = std::pow(std::cos((1.0 - alpha) * angle - phi) / w, (1.0 - alpha) / alpha);
  return a * b;
}

}  // namespace levysup
