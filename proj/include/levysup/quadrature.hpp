#pragma once

// Adaptive Gauss-Kronrod quadrature with the variable transforms used across
// the library: semi-infinite ranges and algebraic endpoint singularities.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>
#include <queue>
#include <span>
#include <vector>

#include "levysup/errors.hpp"

namespace levysup {

struct QuadratureConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  // Maximum number of bisections applied to any single panel.
  int max_depth = 48;
  // Global cap on the number of live panels.
  int max_intervals = 4000;
  // Infinite ranges are truncated once a caller-supplied tail bound drops
  // below tail_tol times the running integral.
  double tail_tol = 1e-14;
  // Upper limit on the number of terms summed by series evaluators.
  int series_cap = 1000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw DomainError("quadrature tolerances must be positive");
    if (max_depth < 1) throw DomainError("quadrature depth must be >= 1");
    if (max_intervals < 1) throw DomainError("quadrature interval cap must be >= 1");
    if (!(tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
    if (series_cap < 1) throw DomainError("series cap must be >= 1");
  }

  QuadratureConfig with_tolerance(double abs, double rel) const {
    QuadratureConfig c = *this;
    c.abs_tol = abs;
    c.rel_tol = rel;
    return c;
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067221019, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, err, depth};
}

}  // namespace detail

// Globally adaptive GK21 over [bp[0], bp[n-1]] with the given initial panels.
template <class F>
QuadResult integrate(F&& f, std::span<const double> breakpoints,
                     const QuadratureConfig& cfg = {}) {
  QuadResult out;
  if (breakpoints.size() < 2) return out;
  std::priority_queue<detail::Panel> heap;
  std::vector<detail::Panel> frozen;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    auto p = detail::gk21(f, breakpoints[i], breakpoints[i + 1], 0);
    out.evaluations += 21;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  auto done = [&] {
    return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  };
  while (!heap.empty() && !done()) {
    if (static_cast<int>(heap.size() + frozen.size()) >= cfg.max_intervals) break;
    auto p = heap.top();
    heap.pop();
    if (p.depth >= cfg.max_depth) {
      frozen.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {
      frozen.push_back(p);
      continue;
    }
    auto l = detail::gk21(f, p.a, mid, p.depth + 1);
    auto r = detail::gk21(f, mid, p.b, p.depth + 1);
    out.evaluations += 42;
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum from the panels to limit drift from the running updates.
  double value = 0.0, err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  for (const auto& p : frozen) {
    value += p.value;
    err += p.error;
  }
  out.value = value;
  out.error = err;
  out.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  return out;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  const std::array<double, 2> bp{a, b};
  return integrate(f, std::span<const double>(bp), cfg);
}

// Breakpoints for [a, b] that resolve features near the endpoints: panels
// shrink geometrically by `ratio` towards each end.
inline std::vector<double> geometric_breakpoints(double a, double b, int levels,
                                                 double ratio = 0.1,
                                                 bool left = true, bool right = true) {
  std::vector<double> bp{a};
  const double w = b - a;
  if (left)
    for (int k = levels; k >= 1; --k) bp.push_back(a + 0.5 * w * std::pow(ratio, k));
  bp.push_back(a + 0.5 * w);
  if (right)
    for (int k = 1; k <= levels; ++k) bp.push_back(b - 0.5 * w * std::pow(ratio, k));
  bp.push_back(b);
  return bp;
}

// Integral over [a, b] of a function with integrable algebraic singularities
// at both ends. Uses s = a + (b - a) sin^2(pi v/2), v = sin^2(pi theta/2): each
// end is approached like theta^4, so (s-a)^(p-1) (b-s)^(q-1) becomes
// theta^(4p-1) (1-theta)^(4q-1), bounded for p, q >= 1/4.
// If f takes (s, r) it also gets r = b - s computed without cancellation;
// below one ulp of b that is the only way to see the singularity.
template <class F>
QuadResult integrate_endpoint_singular(F&& f, double a, double b,
                                       const QuadratureConfig& cfg = {},
                                       int levels = 6) {
  const double w = b - a;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  auto g = [&](double theta) {
    const double s1 = std::sin(half_pi * theta), c1 = std::cos(half_pi * theta);
    const double v = s1 * s1, vc = c1 * c1;
    const double s2 = theta <= 0.5 ? std::sin(half_pi * v) : std::cos(half_pi * vc);
    const double c2 = theta <= 0.5 ? std::cos(half_pi * v) : std::sin(half_pi * vc);
    const double r = w * c2 * c2;
    const double s = theta <= 0.5 ? a + w * s2 * s2 : b - r;
    const double jac = w * std::numbers::pi * s2 * c2 * std::numbers::pi * s1 * c1;
    if (jac == 0.0) return 0.0;
    if constexpr (std::is_invocable_v<F, double, double>) {
      return f(s, r) * jac;
    } else {
      if (s <= a || s >= b) return 0.0;  // collapsed onto an endpoint
      return f(s) * jac;
    }
  };
  const auto bp = geometric_breakpoints(0.0, 1.0, levels, 0.1);
  return integrate(g, std::span<const double>(bp), cfg);
}

// Integral over [a, inf) using x = a + scale * u / (1 - u).
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, double scale = 1.0,
                                   const QuadratureConfig& cfg = {},
                                   int levels = 8) {
  auto g = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double om = 1.0 - u;
    const double x = a + scale * u / om;
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * scale / (om * om);
  };
  const auto bp = geometric_breakpoints(0.0, 1.0, levels, 0.1, true, true);
  return integrate(g, std::span<const double>(bp), cfg);
}

// Returns the value or throws when the requested accuracy was not reached.
inline double checked(const QuadResult& r, const char* what) {
  if (!std::isfinite(r.value))
    throw ConvergenceError(std::string(what) + ": non-finite integral");
  return r.value;
}

}  // namespace levysup
