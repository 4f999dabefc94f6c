#include "levysup/fluctuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "levysup/entrance.hpp"
#include "levysup/errors.hpp"
#include "levysup/stable.hpp"

namespace levysup {

namespace {

constexpr double kPi = std::numbers::pi;

bool heavy_tailed(const ProcessModel& m) {
  return m.family() == Family::SymmetricCauchy ||
         (m.family() == Family::Stable && m.index() < 2.0) ||
         m.family() == Family::SpectrallyNegativeStable;
}

double space_scale(const ProcessModel& m, double t) {
  switch (m.family()) {
    case Family::BrownianWithDrift: return std::sqrt(t);
    case Family::SymmetricCauchy: return t;
    default: return std::pow(t, 1.0 / m.index());
  }
}

double mean_shift(const ProcessModel& m, double t) {
  return m.family() == Family::BrownianWithDrift ? m.drift() * t : 0.0;
}

// int_lo^inf f(x) dx for a function living on the scale of X_t. Panels are
// laid around the location of X_t; heavy tails use x = a + sc w^2/(1-w)^2.
template <class F>
double integrate_from(F&& f, double lo, double center, double sc, bool heavy,
                      const QuadratureConfig& cfg) {
  std::vector<double> bp{lo};
  for (int k = 6; k >= 1; --k) bp.push_back(lo + sc * std::pow(0.1, k));
  for (int k = -8; k <= 8; ++k) {
    const double p = center + 0.75 * k * sc;
    if (p > lo) bp.push_back(p);
  }
  for (int k = 1; k <= 6; ++k) bp.push_back(std::max(lo, center) + 6.0 * sc + 2.0 * k * sc);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const double head = checked(integrate(f, std::span<const double>(bp), cfg), "x integral");
  const double a = bp.back();
  double tail;
  if (heavy) {
    auto g = [&](double w) {
      if (w <= 0.0 || w >= 1.0) return 0.0;
      const double r = w / (1.0 - w), om = 1.0 - w;
      return f(a + sc * r * r) * sc * 2.0 * w / (om * om * om);
    };
    const auto gbp = geometric_breakpoints(0.0, 1.0, 8, 0.1, false, true);
    tail = checked(integrate(g, std::span<const double>(gbp), cfg), "x tail");
  } else {
    tail = checked(integrate_semi_infinite(f, a, sc, cfg), "x tail");
  }
  return head + tail;
}

// Unit-time Cauchy entrance density on a table in w = log(1 + u), stored as
// q_1(u) (1 + u)^{3/2}, which is bounded and smooth; cubic Lagrange between nodes.
class CauchyEntranceTable {
 public:
  CauchyEntranceTable() {
    const double wmax = std::log1p(kUmax);
    h_ = wmax / (kNodes - 1);
    const auto cfg = QuadratureConfig{}.with_tolerance(1e-15, 1e-12);
    const EntranceLaw law{cauchy(), Side::Supremum, cfg};
    for (int i = 0; i < kNodes; ++i) {
      const double u = std::expm1(i * h_);
      v_[i] = entrance_density(law, 1.0, u) * std::pow(1.0 + u, 1.5);
    }
  }
  double operator()(double u) const {
    if (u < 0.0) return 0.0;
    if (u >= kUmax) return 2.0 / (kPi * std::sqrt(kPi) * u * u);
    const double z = std::log1p(u) / h_;
    int i = std::clamp(static_cast<int>(z) - 1, 0, kNodes - 4);
    const double x = z - i;
    const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0, l1 = x * (x - 2) * (x - 3) / 2.0;
    const double l2 = -x * (x - 1) * (x - 3) / 2.0, l3 = x * (x - 1) * (x - 2) / 6.0;
    const double v = l0 * v_[i] + l1 * v_[i + 1] + l2 * v_[i + 2] + l3 * v_[i + 3];
    return v * std::pow(1.0 + u, -1.5);
  }

 private:
  static constexpr int kNodes = 6000;
  static constexpr double kUmax = 1e7;
  double h_ = 0.0;
  std::array<double, kNodes> v_{};
};

const CauchyEntranceTable& cauchy_entrance_table() {
  static const CauchyEntranceTable table;
  return table;
}

double lifetime(const ProcessModel& m, Side side, double t, const QuadratureConfig& cfg) {
  return lifetime_tail(EntranceLaw{m, side, cfg}, t);
}

}  // namespace

double closed_form_kappa(const ProcessModel& m, double alpha, double beta) {
  if (!(alpha >= 0.0 && beta >= 0.0)) throw DomainError("kappa needs alpha, beta >= 0");
  if (m.family() == Family::BrownianWithDrift) {
    const double c = m.drift();
    return (beta + std::sqrt(c * c + 2.0 * alpha) - c) / (std::sqrt(c * c + 2.0) - c);
  }
  if (m.is_stable_type() && beta == 0.0) return std::pow(alpha, m.rho());
  throw UnsupportedOperation("no closed-form ladder exponent for this (model, beta)");
}

double fristedt_kappa(const ProcessModel& m, double alpha, double beta, const QuadratureConfig& cfg,
                      double eps) {
  if (!(alpha >= 0.0 && beta >= 0.0)) throw DomainError("kappa needs alpha, beta >= 0");
  if (alpha == 0.0 && beta == 0.0 && !(m.killing_rate() > 0.0))
    throw DomainError("Fristedt integral diverges at alpha = beta = 0 unless X drifts to -infinity");
  if (m.family() == Family::CompoundPoissonWithDrift)
    throw UnsupportedOperation("Fristedt quadrature needs an absolutely continuous marginal law");
  if (!(eps > 0.0)) throw DomainError("small-time split must be positive");
  const bool heavy = heavy_tailed(m);

  if (m.is_stable_type()) {
    // Scaling X_t = t^{1/a} X_1 lets the t-integral go inside:
    //   log kappa = int_0^inf p_1(u) (log alpha + J(u)) du,
    //   J(u) = int_0^inf e^{-alpha t} (1 - e^{-beta u t^{1/a}}) dt / t.
    // Only the unit density is evaluated, once per u node.
    if (alpha == 0.0) throw DomainError("kappa(0, beta) diverges for a stable process");
    const double a = m.index(), la = std::log(alpha);
    auto J = [&](double u) {
      const double bu = beta * u;
      if (bu == 0.0) return 0.0;
      // t = e^v; the integrand switches on near t = (beta u)^{-a} and off near 1/alpha.
      auto g = [&](double v) {
        return -std::exp(-alpha * std::exp(v)) * std::expm1(-bu * std::exp(v / a));
      };
      const double v_on = -a * std::log(bu), v_off = -std::log(alpha);
      std::vector<double> bp{std::min(v_on, v_off) - 40.0 * a, v_on, v_off,
                             std::max(v_on, v_off) + 5.0};
      std::sort(bp.begin(), bp.end());
      bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
      return checked(integrate(g, std::span<const double>(bp), cfg), "Fristedt time integral");
    };
    auto f = [&](double u) { return stable_unit_density(m, u, cfg) * (la + J(u)); };
    return std::exp(integrate_from(f, 0.0, 0.0, 1.0, heavy, cfg));
  }

  // x-integral first: F(t) = int_0^inf (e^{-t} - e^{-alpha t - beta x}) p_t(x) dx.
  auto inner = [&](double t) {
    auto f = [&](double x) {
      // e^{-t} - e^{-alpha t - beta x}, with expm1 only where the two nearly cancel
      const double d = (alpha - 1.0) * t + beta * x;
      const double w = std::abs(d) < 1.0 ? -std::exp(-t) * std::expm1(-d)
                                         : std::exp(-t) - std::exp(-alpha * t - beta * x);
      return w * marginal_density(m, t, x, cfg);
    };
    return integrate_from(f, 0.0, mean_shift(m, t), space_scale(m, t), heavy, cfg);
  };
  auto outer = [&](double t) { return t > 0.0 ? inner(t) / t : 0.0; };

  const double head = checked(integrate_endpoint_singular(outer, 0.0, eps, cfg, 8), "Fristedt head");
  std::vector<double> bp{eps};
  while (bp.back() < 64.0) bp.push_back(bp.back() * 2.0);
  const double mid = checked(integrate(outer, std::span<const double>(bp), cfg), "Fristedt body");
  const double tail = checked(integrate_semi_infinite(outer, bp.back(), 16.0, cfg), "Fristedt tail");
  return std::exp(head + mid + tail);
}

double ladder_exponent(const LadderExponent& k, double alpha, double beta) {
  if (k.method == KappaMethod::ClosedForm) return closed_form_kappa(k.model, alpha, beta);
  return fristedt_kappa(k.model, alpha, beta, k.quadrature, k.small_time);
}

double wiener_hopf_residual(const ProcessModel& m, double alpha, const QuadratureConfig& cfg) {
  if (!(alpha > 0.0)) throw DomainError("Wiener-Hopf residual needs alpha > 0");
  const double k = fristedt_kappa(m, alpha, 0.0, cfg);
  const double ks = fristedt_kappa(dual_model(m), alpha, 0.0, cfg);
  return k * ks / alpha - 1.0;
}

double excursion_kappa(const ProcessModel& m, double eps, const QuadratureConfig& cfg) {
  if (!(eps > 0.0)) throw DomainError("excursion kappa needs eps > 0");
  auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(-eps * t) * lifetime(m, Side::Supremum, t, cfg);
  };
  const double head = checked(integrate_endpoint_singular(f, 0.0, 1.0, cfg), "excursion kappa");
  const double tail = checked(integrate_semi_infinite(f, 1.0, 1.0 / eps, cfg), "excursion kappa");
  return eps * (head + tail) + eps * m.ladder_drift();
}

std::vector<double> semigroup_reconstruct(const ProcessModel& m, double t,
                                          const std::vector<double>& grid,
                                          const QuadratureConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  const bool bm = m.family() == Family::BrownianWithDrift;
  if (!bm && m.family() != Family::SymmetricCauchy)
    throw UnsupportedOperation("semigroup reconstruction needs Brownian or Cauchy entrance laws");
  const EntranceLaw sup{m, Side::Supremum, cfg}, inf{m, Side::Infimum, cfg};
  std::function<double(double, double)> q, qs;
  if (bm) {
    q = [&](double s, double y) { return entrance_density(sup, s, y); };
    qs = [&](double s, double x) { return entrance_density(inf, s, x); };
  } else {
    const auto& tab = cauchy_entrance_table();
    q = [&tab](double s, double y) { return tab(y / s) / std::pow(s, 1.5); };
    qs = q;
  }
  std::vector<double> out;
  out.reserve(grid.size());
  for (double z : grid) {
    // p_t(z) = int_0^t ds int_{y >= max(0,-z)} q_s(y) q*_{t-s}(z + y) dy
    auto fs = [&](double s) {
      if (s <= 0.0 || s >= t) return 0.0;
      auto fy = [&](double y) {
        // quadrature nodes may round a hair below the lower limit
        if (y < 0.0 || z + y < 0.0) return 0.0;
        return q(s, y) * qs(t - s, z + y);
      };
      const double lo = std::max(0.0, -z);
      const double sc = std::min(space_scale(m, s), space_scale(m, t - s));
      return integrate_from(fy, lo, lo, std::max(sc, 1e-12), !bm, cfg);
    };
    double v = checked(integrate_endpoint_singular(fs, 0.0, t, cfg, 8), "semigroup");
    // Drift terms d q*_t and d* qbar_t vanish for these type 1 models.
    out.push_back(v);
  }
  return out;
}

double SubordinatorModel::tail(double t) const {
  if (family == SubordinatorFamily::PureDrift) return killing;
  if (!(t > 0.0)) return std::numeric_limits<double>::infinity();
  return tail_constant * std::pow(t, -index) + killing;
}

void SubordinatorModel::validate() const {
  if (!(drift >= 0.0) || !(killing >= 0.0)) throw DomainError("drift and killing rate must be >= 0");
  if (family == SubordinatorFamily::StableSubordinator) {
    if (!(index > 0.0 && index < 1.0)) throw DomainError("stable subordinator index must lie in (0, 1)");
    if (!(tail_constant > 0.0)) throw DomainError("tail constant must be positive");
  } else if (!(drift > 0.0)) {
    throw DomainError("pure-drift subordinator needs a positive drift");
  }
}

SubordinatorModel stable_subordinator(double index, double tail_constant, double drift, double killing) {
  SubordinatorModel s{SubordinatorFamily::StableSubordinator, index, tail_constant, drift, killing};
  s.validate();
  return s;
}

SubordinatorModel pure_drift_subordinator(double drift, double killing) {
  SubordinatorModel s{SubordinatorFamily::PureDrift, 0.0, 0.0, drift, killing};
  s.validate();
  return s;
}

double subordinator_phi_closed(const SubordinatorModel& sub, double alpha) {
  sub.validate();
  if (!(alpha >= 0.0)) throw DomainError("Laplace exponent needs alpha >= 0");
  double v = alpha * sub.drift + sub.killing;
  if (sub.family == SubordinatorFamily::StableSubordinator && alpha > 0.0)
    v += sub.tail_constant * std::tgamma(1.0 - sub.index) * std::pow(alpha, sub.index);
  return v;
}

double subordinator_phi(const SubordinatorModel& sub, double alpha, const QuadratureConfig& cfg) {
  sub.validate();
  if (!(alpha >= 0.0)) throw DomainError("Laplace exponent needs alpha >= 0");
  if (alpha == 0.0) return sub.killing;
  auto f = [&](double t) { return t > 0.0 ? std::exp(-alpha * t) * sub.tail(t) : 0.0; };
  const double w = 1.0 / alpha;
  const double head = checked(integrate_endpoint_singular(f, 0.0, w, cfg, 8), "Laplace exponent");
  const double tail = checked(integrate_semi_infinite(f, w, w, cfg), "Laplace exponent");
  return alpha * sub.drift + alpha * (head + tail);
}

namespace {

// Scale of the jump part: S_x - b x = sigma S with E exp(-q S) = exp(-q^index).
double jump_scale(const SubordinatorModel& sub, double x) {
  return std::pow(x * sub.tail_constant * std::tgamma(1.0 - sub.index), 1.0 / sub.index);
}

double unit_positive_density(double a, double u, const QuadratureConfig& cfg) {
  if (!(u > 0.0)) return 0.0;
  if (a == 0.5) return std::exp(-0.25 / u) / (2.0 * std::sqrt(kPi) * std::pow(u, 1.5));
  return positive_stable_density(a, u, cfg);
}

double unit_positive_cdf(double a, double u, const QuadratureConfig& cfg) {
  if (!(u > 0.0)) return 0.0;
  if (a == 0.5) return std::erfc(0.5 / std::sqrt(u));
  auto f = [&](double v) { return unit_positive_density(a, v, cfg); };
  return std::min(1.0, checked(integrate_endpoint_singular(f, 0.0, u, cfg, 8), "positive stable cdf"));
}

}  // namespace

double subordinator_density(const SubordinatorModel& sub, double x, double s,
                            const QuadratureConfig& cfg) {
  sub.validate();
  if (sub.family != SubordinatorFamily::StableSubordinator)
    throw UnsupportedOperation("a pure-drift subordinator has no density");
  if (!(x > 0.0)) return 0.0;
  const double sigma = jump_scale(sub, x);
  return std::exp(-sub.killing * x) * unit_positive_density(sub.index, (s - sub.drift * x) / sigma, cfg) /
         sigma;
}

double subordinator_survival(const SubordinatorModel& sub, double x, double t,
                             const QuadratureConfig& cfg) {
  sub.validate();
  const double alive = std::exp(-sub.killing * x);
  if (sub.family == SubordinatorFamily::PureDrift) return (sub.drift * x > t ? alive : 0.0) + 1.0 - alive;
  if (x == 0.0) return t < 0.0 ? 1.0 : 0.0;
  const double sigma = jump_scale(sub, x);
  return 1.0 - alive * unit_positive_cdf(sub.index, (t - sub.drift * x) / sigma, cfg);
}

double inverse_subordinator_density(const SubordinatorModel& sub, double t, double x,
                                    const QuadratureConfig& cfg) {
  sub.validate();
  if (sub.drift > 0.0)
    throw PreconditionError("subordinator has a drift: use drifted_identity_check instead of a density");
  if (!(t > 0.0)) throw DomainError("time must be positive");
  if (!(x > 0.0)) return 0.0;
  auto f = [&](double s, double r) {
    if (s <= 0.0 || r <= 0.0) return 0.0;
    const double p = subordinator_density(sub, x, s, cfg);
    return p == 0.0 ? 0.0 : sub.tail(r) * p;
  };
  return checked(integrate_endpoint_singular(f, 0.0, t, cfg, 8), "inverse subordinator density");
}

DriftedIdentityReport drifted_identity_check(const SubordinatorModel& sub, double x, double t_max,
                                             int points, double tolerance,
                                             const QuadratureConfig& cfg) {
  sub.validate();
  if (!(x > 0.0) || !(t_max > 0.0) || points < 2) throw DomainError("bad drifted identity grid");
  DriftedIdentityReport r;
  r.tolerance = tolerance;
  const double b = sub.drift, k = sub.killing;
  for (int i = 0; i < points; ++i) {
    const double t = t_max * (i + 0.5) / points;
    r.t.push_back(t);
    r.lhs.push_back(subordinator_survival(sub, x, t, cfg));
    double rhs;
    if (sub.family == SubordinatorFamily::PureDrift) {
      // S_y = b y while alive: both dy-integrals are explicit.
      rhs = (1.0 - std::exp(-k * std::min(x, t / b))) + (t < b * x ? std::exp(-k * t / b) : 0.0);
    } else {
      auto jump_part = [&](double y) {
        if (y <= 0.0) return sub.tail(t);
        auto f = [&](double s, double r) {
          if (s <= 0.0 || r <= 0.0) return 0.0;
          const double p = subordinator_density(sub, y, s, cfg);
          return p == 0.0 ? 0.0 : sub.tail(r) * p;
        };
        return checked(integrate_endpoint_singular(f, 0.0, t, cfg, 8), "drifted identity");
      };
      rhs = checked(integrate(jump_part, 0.0, x, cfg), "drifted identity");
      if (b > 0.0) {
        auto drift_part = [&](double y) { return subordinator_density(sub, y, t, cfg); };
        const double ymax = std::min(x, t / b);
        rhs += b * checked(integrate_endpoint_singular(drift_part, 0.0, ymax, cfg, 8), "drifted identity");
      }
    }
    r.rhs.push_back(rhs);
  }
  const double dt = t_max / points;
  for (int i = 0; i < points; ++i) r.tv_distance += std::abs(r.lhs[i] - r.rhs[i]) * dt;
  r.tv_distance *= 0.5;
  r.pass = r.tv_distance <= tolerance;
  return r;
}

}  // namespace levysup
