#include "levysup/entrance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "levysup/compound_poisson.hpp"
#include "levysup/errors.hpp"
#include "levysup/stable.hpp"

namespace levysup {

namespace {

constexpr double kPi = std::numbers::pi;


void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

// x (pi t^3)^{-1/2} exp(-(x + c t)^2 / 2t) * sqrt(2) / kappa_0(1,0): the
// excursion of sup X - X is a Brownian excursion with drift -c.
double brownian_sup_entrance(double c, double t, double x) {
  const double z = x + c * t;
  return std::numbers::sqrt2 * x / (brownian_ladder_scale(c) * std::sqrt(kPi * t * t * t)) *
         std::exp(-0.5 * z * z / t);
}

// I(y) = int_0^inf log(y+s)/(1+s^2) ds folded onto [0,1] by s -> 1/s:
// int_0^1 (log1p(y/s) + log1p(y s)) / (1 + s^2) ds.
double cauchy_log_integral(double y, const QuadratureConfig& cfg) {
  if (y == 0.0) return 0.0;
  auto f = [y](double s) {
    if (s <= 0.0) return 0.0;
    return (std::log1p(y / s) + std::log1p(y * s)) / (1.0 + s * s);
  };
  std::vector<double> bp{0.0, 1.0};
  for (int k = 1; k <= 24; ++k) bp.push_back(std::pow(0.25, k));
  for (double m : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const double a = m * y, b = m / y;
    if (a > 0.0 && a < 1.0) bp.push_back(a);
    if (b > 0.0 && b < 1.0) bp.push_back(b);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return checked(integrate(f, std::span<const double>(bp), cfg), "Cauchy inner integral");
}

// d log g / d log y = -y (pi y / 2 - log y) / (pi (1 + y^2)).
double cauchy_log_slope(double y) {
  return -y * (0.5 * kPi * y - std::log(y)) / (kPi * (1.0 + y * y));
}

class CauchyTable {
 public:
  static constexpr int kNodes = 512;
  static constexpr double kLo = 1e-6, kHi = 1e6;

  CauchyTable() {
    const double ulo = std::log(kLo), uhi = std::log(kHi);
    h_ = (uhi - ulo) / (kNodes - 1);
    u0_ = ulo;
    const auto cfg = QuadratureConfig{}.with_tolerance(1e-16, 1e-14);
    for (int i = 0; i < kNodes; ++i) {
      const double y = std::exp(ulo + i * h_);
      logg_[i] = -cauchy_log_integral(y, cfg) / kPi;
      slope_[i] = cauchy_log_slope(y);
    }
  }

  double operator()(double y) const {
    if (y < kLo) {
      // I(y) = y - y log y + pi y^2 / 4 + O(y^3 log y)
      return std::exp(-(y - y * std::log(y) + 0.25 * kPi * y * y) / kPi);
    }
    if (y > kHi) {
      // I(y) = (pi/2) log y + (1 + log y) / y + O(log y / y^3)
      const double ly = std::log(y);
      return std::exp(-0.5 * ly - (1.0 + ly) / (kPi * y));
    }
    const double u = (std::log(y) - u0_) / h_;
    int i = std::clamp(static_cast<int>(u), 0, kNodes - 2);
    const double s = u - i;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double v = h00 * logg_[i] + h10 * h_ * slope_[i] + h01 * logg_[i + 1] +
                     h11 * h_ * slope_[i + 1];
    return std::exp(v);
  }

 private:
  double u0_ = 0.0, h_ = 0.0;
  std::array<double, kNodes> logg_{}, slope_{};
};

const CauchyTable& cauchy_table() {
  static const CauchyTable table;
  return table;
}

// Both terms of the Cauchy entrance density at t = 1: the closed-form lead
// and J(u) = int_0^inf y g(y) / ((1+y^2)(u y + 1)^{3/2}) dy.
struct CauchyTerms {
  double lead, integral;
};

CauchyTerms cauchy_terms(double u, const QuadratureConfig& cfg) {
  if (u < 1e-100) u = 0.0;  // keeps e^v finite; the change is far below rounding
  const double lead = std::numbers::sqrt2 * std::sin(kPi / 8.0 + 1.5 * std::atan(u)) /
                      std::pow(1.0 + u * u, 0.75);
  // y = e^v; the integrand y g(y) / ((1+y^2)(u y + 1)^{3/2}) picks up a factor y.
  const auto& g = cauchy_table();
  auto f = [&](double v) {
    const double y = std::exp(v);
    return y * y * g(y) / ((1.0 + y * y) * std::pow(u * y + 1.0, 1.5));
  };
  const double v0 = u > 0.0 ? -std::log(u) : 0.0;
  std::vector<double> bp{-45.0, -20.0, -10.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0, 40.0};
  if (u > 0.0)
    for (double d : {-5.0, -2.0, 0.0, 2.0, 5.0}) bp.push_back(v0 + d);
  bp.push_back(std::max(0.0, v0) + (u > 0.0 ? 45.0 : 95.0));
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  while (bp.size() > 2 && bp[bp.size() - 2] >= bp.back()) bp.erase(bp.end() - 2);
  return {lead, checked(integrate(f, std::span<const double>(bp), cfg), "Cauchy entrance law")};
}

// Weighing J by 1/(2 pi) gives total mass 2.3066 rather
// than 1/sqrt(pi). Matching int q_1(u) (1 + beta u)^{-1/2} du = 1/(sqrt(pi) kappa(1, beta))
// against Fristedt's formula pins the coefficients to 1/pi and 1/(2 sqrt(pi)).
double cauchy_unit_entrance(double u, const QuadratureConfig& cfg) {
  // Both terms decay like u^{-3/2} and cancel down to 2 pi^{-3/2} u^{-2};
  // past 1e7 the cancellation costs more digits than the limit misses.
  if (u > 1e7) return 2.0 / (kPi * std::sqrt(kPi) * u * u);
  const auto [lead, j] = cauchy_terms(u, cfg);
  return (lead - j / kPi) / (2.0 * std::sqrt(kPi));
}

bool is_spectrally_positive(const ProcessModel& m) {
  return m.family() == Family::Stable && m.index() > 1.0 && m.index() < 2.0 &&
         m.rho() == 1.0 - 1.0 / m.index();
}

bool cpp_irregular_side(const ProcessModel& m, Side side) {
  if (m.family() != Family::CompoundPoissonWithDrift) return false;
  return (m.regularity() == Regularity::Type3 && side == Side::Supremum) ||
         (m.regularity() == Regularity::Type2 && side == Side::Infimum);
}

}  // namespace

double brownian_ladder_scale(double drift) { return std::sqrt(drift * drift + 2.0) - drift; }

double cauchy_inner_factor(double y) {
  if (!(y >= 0.0)) throw DomainError("inner factor needs y >= 0");
  if (y == 0.0) return 1.0;
  return cauchy_table()(y);
}

double cauchy_inner_factor_direct(double y, const QuadratureConfig& cfg) {
  if (!(y >= 0.0)) throw DomainError("inner factor needs y >= 0");
  return std::exp(-cauchy_log_integral(y, cfg) / kPi);
}

double cauchy_uncorrected_density(double x, const QuadratureConfig& cfg) {
  const auto [lead, j] = cauchy_terms(x, cfg);
  return lead - j / (2.0 * kPi);
}

double cauchy_unit_density(double x, const QuadratureConfig& cfg) {
  if (!(x >= 0.0)) throw DomainError("entrance density is defined for x >= 0");
  return cauchy_unit_entrance(x, cfg);
}

bool has_entrance_density(const ProcessModel& m, Side side) {
  switch (m.family()) {
    case Family::BrownianWithDrift:
    case Family::SymmetricCauchy:
      return true;
    case Family::Stable:
      if (m.index() == 2.0) return true;
      return side == Side::Supremum && is_spectrally_positive(m);
    case Family::SpectrallyNegativeStable:
      return side == Side::Infimum;
    case Family::CompoundPoissonWithDrift:
      return false;
  }
  return false;
}

double entrance_density(const EntranceLaw& law, double t, double x) {
  check_time(t);
  if (!(x >= 0.0)) throw DomainError("entrance density needs x >= 0");
  const auto& m = law.model;
  if (!has_entrance_density(m, law.side))
    throw UnsupportedOperation("no entrance density for " + to_string(m.family()) +
                               (law.side == Side::Supremum ? " (supremum side)" : " (infimum side)"));
  switch (m.family()) {
    case Family::BrownianWithDrift:
      return brownian_sup_entrance(law.side == Side::Supremum ? m.drift() : -m.drift(), t, x);
    case Family::SymmetricCauchy: {
      const double v = cauchy_unit_entrance(x / t, law.quadrature);
      return std::max(0.0, v) / std::pow(t, 1.5);
    }
    case Family::Stable:
      if (m.index() == 2.0) {
        // X = sqrt(2) B with the same ladder-time normalization.
        return brownian_sup_entrance(0.0, t, x / std::numbers::sqrt2) / std::numbers::sqrt2;
      }
      // Spectrally positive: q_t(x) = x p_t(-x) / t, the dual of the line below.
      return x * marginal_density(m, t, -x, law.quadrature) / t;
    case Family::SpectrallyNegativeStable:
      return x * marginal_density(m, t, x, law.quadrature) / t;
    case Family::CompoundPoissonWithDrift:
      break;
  }
  throw UnsupportedOperation("no entrance density for this model");
}

double lifetime_tail(const EntranceLaw& law, double t) {
  check_time(t);
  const auto& m = law.model;
  if (m.is_stable_type()) {
    const double r = law.side == Side::Supremum ? m.rho() : 1.0 - m.rho();
    return std::pow(t, -r) / std::tgamma(1.0 - r);
  }
  if (m.family() == Family::BrownianWithDrift) {
    const double c = law.side == Side::Supremum ? m.drift() : -m.drift();
    const double z = c * std::sqrt(0.5 * t);
    // Closed form loses digits to cancellation once c sqrt(t) is large.
    if (z < 3.0)
      return std::numbers::sqrt2 / brownian_ladder_scale(c) *
             (std::exp(-z * z) / std::sqrt(kPi * t) - c / std::numbers::sqrt2 * std::erfc(z));
    auto f = [&](double x) { return entrance_density(law, t, x); };
    const double scale = std::sqrt(t) + std::abs(m.drift()) * t;
    std::vector<double> bp{0.0};
    for (int k = 1; k <= 12; ++k) bp.push_back(0.5 * k * scale);
    const auto head = integrate(f, std::span<const double>(bp), law.quadrature);
    const auto tail = integrate_semi_infinite(f, bp.back(), scale, law.quadrature);
    return checked(head, "lifetime tail") + checked(tail, "lifetime tail");
  }
  if (cpp_irregular_side(m, law.side)) {
    const auto up = UpwardJumpProcess::irregular_side_of(m);
    return m.ladder_gamma()->value * first_passage_survival(up, t);
  }
  throw UnsupportedOperation("no lifetime tail for this (model, side) pair");
}

}  // namespace levysup
