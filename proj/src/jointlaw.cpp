#include "levysup/jointlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "levysup/errors.hpp"
#include "levysup/stable.hpp"

namespace levysup {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time horizon must be positive and finite");
}

EntranceLaw law_of(const ProcessModel& m, Side side, const QuadratureConfig& cfg) {
  return EntranceLaw{m, side, cfg};
}

// Natural length scale of X at time s, used to place quadrature panels.
double space_scale(const ProcessModel& m, double s) {
  switch (m.family()) {
    case Family::BrownianWithDrift: return std::sqrt(s) + std::abs(m.drift()) * s;
    case Family::SymmetricCauchy: return s;
    default: return std::pow(s, 1.0 / m.index());
  }
}

// int_0^inf f(x) dx for an entrance density at time s. Heavy (x^{-3/2}) tails
// use x = a + scale w^2/(1-w)^2, which makes the mapped integrand bounded.
template <class F>
double half_line(F&& f, const ProcessModel& m, double s, const QuadratureConfig& cfg) {
  const double sc = space_scale(m, s);
  std::vector<double> bp{0.0};
  for (int k = 6; k >= 1; --k) bp.push_back(sc * std::pow(0.1, k));
  for (int k = 1; k <= 8; ++k) bp.push_back(0.5 * k * sc);
  const double head = checked(integrate(f, std::span<const double>(bp), cfg), "half-line head");
  const double a = bp.back();
  double tail;
  if (m.family() == Family::SymmetricCauchy) {
    auto g = [&](double w) {
      if (w <= 0.0 || w >= 1.0) return 0.0;
      const double r = w / (1.0 - w);
      const double om = 1.0 - w;
      return f(a + sc * r * r) * sc * 2.0 * w / (om * om * om);
    };
    const auto gbp = geometric_breakpoints(0.0, 1.0, 8, 0.1, false, true);
    tail = checked(integrate(g, std::span<const double>(gbp), cfg), "half-line tail");
  } else {
    tail = checked(integrate_semi_infinite(f, a, sc, cfg), "half-line tail");
  }
  return head + tail;
}

bool stable_type(const ProcessModel& m) { return m.is_stable_type(); }

}  // namespace

JointAtoms joint_atoms(const ProcessModel& m, double t, const QuadratureConfig& cfg) {
  check_time(t);
  JointAtoms a;
  if (m.regularity() == Regularity::Type2) {
    a.end_coefficient = m.ladder_drift();
    a.end_mass = a.end_coefficient * lifetime_tail(law_of(m, Side::Infimum, cfg), t);
  } else if (m.regularity() == Regularity::Type3) {
    a.start_coefficient = m.ladder_drift_star();
    a.start_mass = a.start_coefficient * lifetime_tail(law_of(m, Side::Supremum, cfg), t);
  }
  return a;
}

double joint_density(const ProcessModel& m, double t, double s, double x, double y,
                     const QuadratureConfig& cfg) {
  check_time(t);
  if (!(s > 0.0 && s < t))
    throw DomainError("g_t coordinate must lie in (0, t); atoms are reported by joint_atoms");
  if (!(x >= 0.0 && y >= 0.0)) throw DomainError("sup and gap coordinates must be >= 0");
  const double qs = entrance_density(law_of(m, Side::Infimum, cfg), s, x);
  if (qs == 0.0) return 0.0;
  return qs * entrance_density(law_of(m, Side::Supremum, cfg), t - s, y);
}

double joint_density_terminal(const ProcessModel& m, double t, double s, double x, double terminal,
                              const QuadratureConfig& cfg) {
  if (terminal > x) return 0.0;
  return joint_density(m, t, s, x, x - terminal, cfg);
}

double joint_total_mass(const ProcessModel& m, double t, const QuadratureConfig& cfg) {
  check_time(t);
  if (!has_entrance_density(m, Side::Infimum))
    throw UnsupportedOperation("joint mass needs the entrance density q*");
  const bool have_q = has_entrance_density(m, Side::Supremum);
  const auto inf = law_of(m, Side::Infimum, cfg), sup = law_of(m, Side::Supremum, cfg);
  // Stable-type densities scale exactly: int q*_s = s^{rho-1} int q*_1 and
  // int q_u = u^{-rho} int q_1, so the x-integrals are done once at unit time.
  const bool scaling = m.is_stable_type();
  const double rho = scaling ? m.rho() : 0.0;
  auto raw_star = [&](double s) {
    return half_line([&](double x) { return entrance_density(inf, s, x); }, m, s, cfg);
  };
  auto raw = [&](double u) {
    if (!have_q) return lifetime_tail(sup, u);
    return half_line([&](double y) { return entrance_density(sup, u, y); }, m, u, cfg);
  };
  const double unit_star = scaling ? raw_star(1.0) : 0.0;
  const double unit = scaling ? raw(1.0) : 0.0;
  auto mass_star = [&](double s) { return scaling ? std::pow(s, rho - 1.0) * unit_star : raw_star(s); };
  auto mass = [&](double u) { return scaling ? std::pow(u, -rho) * unit : raw(u); };
  auto f = [&](double s, double r) {
    if (s <= 0.0 || r <= 0.0) return 0.0;
    return mass_star(s) * mass(r);
  };
  const auto r = integrate_endpoint_singular(f, 0.0, t, cfg);
  const auto atoms = joint_atoms(m, t, cfg);
  return checked(r, "joint mass") + atoms.end_mass + atoms.start_mass;
}

double sup_marginal_density_at_zero(const ProcessModel& m, double t) {
  check_time(t);
  if (m.family() == Family::BrownianWithDrift) {
    // d/dx [Phi((x-ct)/sqrt t) - e^{2cx} Phi((-x-ct)/sqrt t)] at x = 0
    const double c = m.drift(), z = c * std::sqrt(t);
    return 2.0 * std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi * t) - c * std::erfc(z / std::numbers::sqrt2);
  }
  if (m.is_stable_type()) {
    const double a = m.index(), r = m.rho();
    // P(sup_1 <= x) ~ x^{alpha rho}; alpha rho = 1 exactly when there are no
    // positive jumps, where P(sup_1 <= x) ~ x / Gamma(1 - 1/alpha).
    if (a * r < 1.0 - 1e-12) return std::numeric_limits<double>::infinity();
    return std::pow(t, -1.0 / a) / std::tgamma(1.0 - 1.0 / a);
  }
  throw UnsupportedOperation("no limit of the supremum density at 0 for this model");
}

double sup_marginal_density(const ProcessModel& m, double t, double x, const QuadratureConfig& cfg) {
  check_time(t);
  if (!(x >= 0.0)) throw DomainError("sup marginal density is defined for x >= 0");
  if (x == 0.0) return sup_marginal_density_at_zero(m, t);
  if (!has_entrance_density(m, Side::Infimum))
    throw UnsupportedOperation("sup marginal density needs the entrance density q*");
  const auto inf = law_of(m, Side::Infimum, cfg), sup = law_of(m, Side::Supremum, cfg);
  auto f = [&](double s, double r) {
    if (s <= 0.0 || r <= 0.0) return 0.0;
    const double q = entrance_density(inf, s, x);
    if (q == 0.0) return 0.0;
    return lifetime_tail(sup, r) * q;
  };
  double v = checked(integrate_endpoint_singular(f, 0.0, t, cfg, 8), "sup marginal density");
  if (m.regularity() == Regularity::Type2) v += m.ladder_drift() * entrance_density(inf, t, x);
  return std::max(0.0, v);
}

double sup_atom_mass(const ProcessModel& m, double t, const QuadratureConfig& cfg) {
  return joint_atoms(m, t, cfg).start_mass;
}

double generalized_arcsine_density(double rho, double t, double s) {
  check_time(t);
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("arcsine index must lie in (0, 1)");
  if (!(s > 0.0 && s < t)) return 0.0;
  return std::sin(kPi * rho) / kPi * std::pow(s, rho - 1.0) * std::pow(t - s, -rho);
}

double generalized_arcsine_cdf(double rho, double t, double s) {
  check_time(t);
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("arcsine index must lie in (0, 1)");
  if (s <= 0.0) return 0.0;
  if (s >= t) return 1.0;
  return boost::math::ibeta(rho, 1.0 - rho, s / t);
}

double gt_density(const ProcessModel& m, double t, double s, const QuadratureConfig& cfg) {
  check_time(t);
  if (m.regularity() != Regularity::Type1)
    throw UnsupportedOperation("g_t has an atom for type 2 and type 3 models");
  if (!(s > 0.0 && s < t)) throw DomainError("s must lie in (0, t)");
  if (stable_type(m)) return generalized_arcsine_density(m.rho(), t, s);
  return lifetime_tail(law_of(m, Side::Infimum, cfg), s) *
         lifetime_tail(law_of(m, Side::Supremum, cfg), t - s);
}

double StableTripleFactors::time_density(double t, double s) const {
  return generalized_arcsine_density(rho, t, s);
}

double StableTripleFactors::sup_density(double x) const {
  if (x < 0.0) return 0.0;
  return std::tgamma(rho) * entrance_density({model, Side::Infimum, quadrature}, 1.0, x);
}

double StableTripleFactors::gap_density(double y) const {
  if (y < 0.0) return 0.0;
  return std::tgamma(1.0 - rho) * entrance_density({model, Side::Supremum, quadrature}, 1.0, y);
}

double StableTripleFactors::joint_density(double t, double s, double x, double y) const {
  if (!(s > 0.0 && s < t)) return 0.0;
  const double a = std::pow(s, 1.0 / alpha), b = std::pow(t - s, 1.0 / alpha);
  return time_density(t, s) * sup_density(x / a) / a * gap_density(y / b) / b;
}

StableTripleFactors stable_triple_factors(double alpha, double rho, const QuadratureConfig& cfg) {
  StableTripleFactors f;
  f.quadrature = cfg;
  f.alpha = alpha;
  f.rho = rho;
  if (alpha == 1.0 && rho == 0.5) {
    f.model = cauchy();
  } else if (alpha == 2.0 && rho == 0.5) {
    f.model = brownian(0.0);
  } else if (alpha > 1.0 && alpha < 2.0 && std::abs(rho - 1.0 / alpha) < 1e-12) {
    f.model = spectrally_negative_stable(alpha);
    f.rho = 1.0 / alpha;
  } else {
    throw UnsupportedOperation("stable factors need Cauchy, Brownian or spectrally negative parameters");
  }
  return f;
}

double sn_gt_sup_density(double alpha, double t, double s, double x, SnPath path,
                         const QuadratureConfig& cfg) {
  check_time(t);
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("spectrally negative index must lie in (1, 2)");
  if (!(s > 0.0 && s <= t)) throw DomainError("s must lie in (0, t]");
  if (!(x > 0.0)) return 0.0;
  if (s == t) return std::numeric_limits<double>::infinity();
  if (path == SnPath::Series) {
    const auto r = sn_series_density(alpha, t, s, x, cfg);
    if (!r.converged) throw ConvergenceError("spectrally negative series did not converge");
    return r.value;
  }
  const auto m = spectrally_negative_stable(alpha);
  const double rho = 1.0 / alpha;
  // c = Phi(1) = 1 for E exp(theta X_1) = exp(theta^alpha).
  const double n_tail = std::pow(t - s, -rho) / std::tgamma(1.0 - rho);
  return x * marginal_density(m, s, x, cfg) * n_tail / s;
}

SnSeriesValue sn_series_density(double alpha, double t, double s, double x,
                                const QuadratureConfig& cfg) {
  check_time(t);
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("spectrally negative index must lie in (1, 2)");
  if (!(s > 0.0 && s < t)) throw DomainError("series path needs s in (0, t)");
  using mp = boost::multiprecision::cpp_bin_float_100;
  const mp a = alpha;
  const mp pi = boost::math::constants::pi<mp>();
  const mp u = mp(x) * boost::multiprecision::pow(mp(s), -1 / a);
  const mp lu = boost::multiprecision::log(u);
  mp sum = 0, prev_env = 0, max_env = 0;
  SnSeriesValue out;
  for (int n = 1; n <= cfg.series_cap; ++n) {
    const mp log_env = boost::math::lgamma(1 + n / a) - boost::math::lgamma(mp(n + 1)) + n * lu;
    const mp env = boost::multiprecision::exp(log_env);
    const mp term = env * boost::multiprecision::sin(n * pi / a);
    if (n % 2 == 1) sum += term; else sum -= term;
    max_env = std::max(max_env, env);
    out.terms = n;
    if (n >= 8 && prev_env > 0) {
      const mp r = env / prev_env;
      if (r < 1) {
        const mp tail = env * r / (1 - r);
        out.remainder_bound = static_cast<double>(tail);
        if (tail <= cfg.rel_tol * boost::multiprecision::abs(sum)) {
          out.converged = true;
          break;
        }
      }
    }
    prev_env = env;
  }
  // 100 decimal digits leave room for max_env / |sum| up to about 1e80.
  if (max_env > 1e80 * boost::multiprecision::abs(sum)) out.converged = false;
  const double rho = 1.0 / alpha;
  const double pref = 1.0 / (kPi * std::tgamma(1.0 - rho) * std::pow(t - s, rho) * s);
  out.value = pref * static_cast<double>(sum);
  out.remainder_bound *= pref;
  return out;
}

SnCellIntegrator::SnCellIntegrator(double alpha, double t, const QuadratureConfig& cfg)
    : alpha_(alpha), t_(t), model_(spectrally_negative_stable(alpha)), cfg_(cfg) {
  check_time(t);
  // The unit density decays like exp(-c u^{alpha/(alpha-1)}) on the right.
  constexpr int kPanels = 1200;
  constexpr double kUmax = 12.0;
  u_.resize(kPanels + 1);
  g_.resize(kPanels + 1);
  dg_.resize(kPanels + 1);
  auto f = [&](double v) { return v * stable_unit_density(model_, v, cfg_); };
  double acc = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double u = kUmax * i / kPanels;
    if (i > 0) acc += checked(integrate(f, u_[i - 1], u, cfg_), "first moment table");
    u_[i] = u;
    g_[i] = acc;
    dg_[i] = f(u);
  }
}

double SnCellIntegrator::first_moment_cdf(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= u_.back()) return g_.back();
  const double h = u_[1] - u_[0];
  const double z = u / h;
  const int i = std::min(static_cast<int>(z), static_cast<int>(u_.size()) - 2);
  const double w = z - i, w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * g_[i] + (w3 - 2 * w2 + w) * h * dg_[i] +
         (-2 * w3 + 3 * w2) * g_[i + 1] + (w3 - w2) * h * dg_[i + 1];
}

double SnCellIntegrator::cell(double s0, double s1, double x0, double x1) const {
  s0 = std::max(s0, 0.0);
  s1 = std::min(s1, t_);
  if (!(s1 > s0) || !(x1 > x0)) return 0.0;
  const double rho = 1.0 / alpha_;
  const double cn = 1.0 / std::tgamma(1.0 - rho);
  // r = s1 - s is exact; t - s = (t - s1) + r
  const double gap = t_ - s1;
  auto f = [&](double s, double r) {
    if (s <= 0.0 || gap + r <= 0.0) return 0.0;
    const double sc = std::pow(s, rho);
    const double hi = std::isinf(x1) ? g_.back() : first_moment_cdf(x1 / sc);
    const double lo = first_moment_cdf(x0 / sc);
    return cn * std::pow(gap + r, -rho) * sc / s * (hi - lo);
  };
  return checked(integrate_endpoint_singular(f, s0, s1, cfg_), "cell probability");
}

AllTimeLaw sup_all_time_law(const ProcessModel& m, double s, double x, const QuadratureConfig& cfg) {
  const double a = m.killing_rate();
  if (!(a > 0.0)) throw UnsupportedOperation("all-time supremum law needs a process drifting to -infinity");
  if (!has_entrance_density(m, Side::Infimum))
    throw UnsupportedOperation("all-time supremum law needs the entrance density q*");
  if (!(s >= 0.0 && x >= 0.0)) throw DomainError("coordinates must be >= 0");
  AllTimeLaw r;
  r.atom_mass = m.ladder_drift_star() * a;
  if (s > 0.0) r.density = a * entrance_density(law_of(m, Side::Infimum, cfg), s, x);
  return r;
}

double sup_all_time_density(const ProcessModel& m, double x, const QuadratureConfig& cfg) {
  const double a = m.killing_rate();
  if (!(a > 0.0)) throw UnsupportedOperation("all-time supremum law needs a process drifting to -infinity");
  if (!has_entrance_density(m, Side::Infimum))
    throw UnsupportedOperation("all-time supremum law needs the entrance density q*");
  const auto inf = law_of(m, Side::Infimum, cfg);
  auto f = [&](double s) { return s > 0.0 ? entrance_density(inf, s, x) : 0.0; };
  // q*_s(x) peaks near s = x^2 / 3 for Brownian motion.
  const double sc = std::max(x * x, 1e-3);
  std::vector<double> bp{0.0};
  for (int k = 8; k >= 1; --k) bp.push_back(sc * std::pow(0.2, k));
  for (int k = 1; k <= 8; ++k) bp.push_back(sc * k);
  const double head = checked(integrate(f, std::span<const double>(bp), cfg), "all-time density");
  const double tail = checked(integrate_semi_infinite(f, bp.back(), sc, cfg), "all-time density");
  return a * (head + tail);
}

}  // namespace levysup
