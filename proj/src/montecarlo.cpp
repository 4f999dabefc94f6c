#include "levysup/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "levysup/compound_poisson.hpp"
#include "levysup/errors.hpp"
#include "levysup/rng.hpp"
#include "levysup/stable.hpp"

namespace levysup {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kChunk = 512;
constexpr std::uint32_t kBlock = 256;  // steps generated per batch

// Runs body(path) for every path, spreading fixed chunks over workers.
template <class Body>
void for_each_path(std::uint64_t paths, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::uint64_t lo = next.fetch_add(kChunk);
      if (lo >= paths) return;
      const std::uint64_t hi = std::min(paths, lo + kChunk);
      for (std::uint64_t p = lo; p < hi; ++p) body(p);
    }
  };
  if (workers == 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
}

// Standard Cauchy by the ratio of uniforms on the half disc.
inline double cauchy_draw(PathRng& rng) {
  for (;;) {
    const double u = rng.uniform();
    const double v = 2.0 * rng.uniform() - 1.0;
    if (u * u + v * v <= 1.0) return v / u;
  }
}

struct GridTracker {
  double sup = 0.0;
  double g = 0.0;
  void offer(double x, double time) {
    if (x > sup) {
      sup = x;
      g = time;
    }
  }
};

enum class Kind { Brownian, Cauchy, Stable, CompoundPoisson };

Kind kind_of(const ProcessModel& m) {
  switch (m.family()) {
    case Family::BrownianWithDrift: return Kind::Brownian;
    case Family::SymmetricCauchy: return Kind::Cauchy;
    case Family::Stable:
      return m.index() == 2.0 ? Kind::Brownian : Kind::Stable;
    case Family::SpectrallyNegativeStable: return Kind::Stable;
    case Family::CompoundPoissonWithDrift: return Kind::CompoundPoisson;
  }
  throw UnsupportedOperation("no simulation for this model");
}

// Gaussian parameters: Stable(2, 1/2) has psi = l^2, i.e. variance 2.
double gaussian_sigma(const ProcessModel& m) {
  return m.family() == Family::Stable ? std::numbers::sqrt2 : 1.0;
}

// Increment generator for step k of a path on a grid of width h.
struct Increments {
  Kind kind;
  double h;
  double drift = 0.0, sigma = 1.0, alpha = 1.0, rho = 0.5, scale = 1.0;

  Increments(const ProcessModel& m, double h_) : kind(kind_of(m)), h(h_) {
    switch (kind) {
      case Kind::Brownian:
        drift = m.family() == Family::BrownianWithDrift ? m.drift() : 0.0;
        sigma = gaussian_sigma(m);
        scale = sigma * std::sqrt(h);
        break;
      case Kind::Cauchy:
        scale = h;
        break;
      case Kind::Stable:
        alpha = m.index();
        rho = m.rho();
        scale = std::pow(h, 1.0 / alpha);
        break;
      case Kind::CompoundPoisson:
        break;
    }
  }

  // Increments of steps k0 .. k0 + count - 1 into out. Step k reads only the
  // draws addressed by k, starting with first_pair(k).
  void fill(PathRng& rng, std::uint32_t k0, std::uint32_t count, double* out) const {
    std::array<double, kBlock> u, v;
    rng.first_pairs(k0, count, u.data(), v.data());
    switch (kind) {
      case Kind::Brownian:
        for (std::uint32_t j = 0; j < count; ++j) {
          const double r = std::sqrt(-2.0 * std::log(u[j]));
          out[j] = drift * h + scale * (r * std::cos(2.0 * kPi * v[j]));
        }
        return;
      case Kind::Cauchy:
        for (std::uint32_t j = 0; j < count; ++j) {
          const double a = u[j], b = 2.0 * v[j] - 1.0;
          if (a * a + b * b <= 1.0) {
            out[j] = scale * (b / a);
          } else {
            rng.seek_past_pair(k0 + j);
            out[j] = scale * cauchy_draw(rng);
          }
        }
        return;
      case Kind::Stable:
        for (std::uint32_t j = 0; j < count; ++j)
          out[j] = scale * stable_from_uniforms(alpha, rho, kPi * (u[j] - 0.5), -std::log(v[j]));
        return;
      case Kind::CompoundPoisson:
        break;
    }
    throw UnsupportedOperation("no grid increments for compound Poisson paths");
  }
};

TripleSample simulate_cpp_path(const ProcessModel& m, double horizon, PathRng& rng) {
  const double rate = m.jump_rate(), mean = m.jump_mean(), drift = m.drift();
  const double sign = m.jump_sign() == JumpSign::Positive ? 1.0 : -1.0;
  // Upward jumps: the supremum is reached right after a jump. Downward jumps
  // with upward drift: right before a jump or at the horizon.
  const bool up = sign > 0.0;
  GridTracker tr;
  double t = 0.0, x = 0.0;
  std::uint32_t k = 0;
  for (;; ++k) {
    rng.seek(k);
    const double e = rng.exponential() / rate;
    if (t + e >= horizon) {
      x += drift * (horizon - t);
      if (!up) tr.offer(x, horizon);
      break;
    }
    t += e;
    x += drift * e;
    if (!up) tr.offer(x, t);
    x += sign * mean * rng.exponential();
    if (up) tr.offer(x, t);
  }
  return {tr.g, tr.sup, x, k + 1, false};
}

}  // namespace

void SimulationPlan::validate() const {
  if (paths < 1) throw DomainError("simulation needs at least one path");
  if (steps < 1) throw DomainError("simulation needs at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
}

std::vector<TripleSample> simulate_sup_triple(const SimulationPlan& plan) {
  plan.validate();
  const auto& m = plan.model;
  const Kind kind = kind_of(m);
  std::vector<TripleSample> out(plan.paths);
  if (kind == Kind::CompoundPoisson) {
    for_each_path(plan.paths, plan.workers, [&](std::uint64_t p) {
      PathRng rng(plan.seed, p);
      out[p] = simulate_cpp_path(m, plan.horizon, rng);
    });
    return out;
  }
  const std::uint32_t n = plan.steps;
  const double h = plan.horizon / n;
  const Increments inc(m, h);
  const bool bridge = plan.bridge_correction && kind == Kind::Brownian;
  const double two_var = 2.0 * inc.sigma * inc.sigma * h;
  for_each_path(plan.paths, plan.workers, [&](std::uint64_t p) {
    PathRng rng(plan.seed, p);
    GridTracker grid;
    double sup = 0.0, x = 0.0;
    std::array<double, kBlock> dx;
    for (std::uint32_t k0 = 0; k0 < n; k0 += kBlock) {
      const std::uint32_t cnt = std::min(kBlock, n - k0);
      inc.fill(rng, k0, cnt, dx.data());
      for (std::uint32_t j = 0; j < cnt; ++j) {
        const std::uint32_t k = k0 + j;
        const double xn = x + dx[j];
        grid.offer(xn, (k + 1) * h);
        if (bridge) {
          // Maximum of a Brownian bridge from x to xn over a cell of width h.
          rng.seek_past_pair(k);
          const double d = xn - x;
          const double mx = 0.5 * (x + xn + std::sqrt(d * d - two_var * std::log(rng.uniform())));
          sup = std::max(sup, mx);
        }
        x = xn;
      }
    }
    if (!bridge) sup = grid.sup;
    out[p] = {grid.g, sup, x, n, bridge};
  });
  return out;
}

NestedSamples simulate_nested(const SimulationPlan& plan, const std::vector<std::uint32_t>& levels) {
  plan.validate();
  const auto& m = plan.model;
  if (kind_of(m) == Kind::CompoundPoisson)
    throw UnsupportedOperation("compound Poisson paths are simulated exactly, without grids");
  const std::uint32_t n = plan.steps;
  std::vector<std::uint32_t> strides;
  for (auto l : levels) {
    if (l == 0 || n % l != 0) throw DomainError("grid levels must divide the finest step count");
    strides.push_back(n / l);
  }
  NestedSamples out;
  out.levels = levels;
  out.samples.assign(levels.size(), std::vector<TripleSample>(plan.paths));
  const double h = plan.horizon / n;
  const Increments inc(m, h);
  for_each_path(plan.paths, plan.workers, [&](std::uint64_t p) {
    PathRng rng(plan.seed, p);
    std::vector<GridTracker> tr(levels.size());
    double x = 0.0;
    std::array<double, kBlock> dx, xs;
    for (std::uint32_t k0 = 0; k0 < n; k0 += kBlock) {
      const std::uint32_t cnt = std::min(kBlock, n - k0);
      inc.fill(rng, k0, cnt, dx.data());
      for (std::uint32_t j = 0; j < cnt; ++j) xs[j] = (x += dx[j]);
      // xs[j] is the path at step k0 + j + 1; level l sees multiples of its stride.
      for (std::size_t l = 0; l < strides.size(); ++l) {
        const std::uint32_t st = strides[l];
        for (std::uint32_t j = (st - (k0 + 1) % st) % st; j < cnt; j += st) {
          if (xs[j] > tr[l].sup) {
            tr[l].sup = xs[j];
            tr[l].g = (k0 + j + 1) * h;
          }
        }
      }
    }
    for (std::size_t l = 0; l < levels.size(); ++l)
      out.samples[l][p] = {tr[l].g, tr[l].sup, x, levels[l], false};
  });
  return out;
}

AtomMassEstimate atom_mass_estimate(const ProcessModel& m, double t, const SimulationPlan& plan) {
  if (m.regularity() != Regularity::Type3)
    throw PreconditionError("atom of the supremum at 0 exists only for type 3 models");
  if (!(t > 0.0)) throw DomainError("time must be positive");
  SimulationPlan p = plan;
  p.model = m;
  p.horizon = t;
  p.validate();
  const auto samples = simulate_sup_triple(p);
  const auto zeros = std::count_if(samples.begin(), samples.end(),
                                   [](const TripleSample& s) { return s.sup_hat == 0.0; });

  // Independent stream for the first-passage estimator.
  const std::uint64_t seed2 = plan.seed ^ 0x9E3779B97F4A7C15ULL;
  const auto up = UpwardJumpProcess::irregular_side_of(m);
  std::vector<unsigned char> late(p.paths);
  for_each_path(p.paths, p.workers, [&](std::uint64_t i) {
    PathRng rng(seed2, i);
    late[i] = simulate_first_passage(up, t, rng) > t;
  });
  const auto survivors = std::count(late.begin(), late.end(), 1);

  AtomMassEstimate r;
  const double n = static_cast<double>(p.paths);
  r.paths = p.paths;
  r.sup_zero = zeros / n;
  r.sup_zero_se = std::sqrt(r.sup_zero * (1.0 - r.sup_zero) / n);
  r.first_passage = survivors / n;
  r.first_passage_se = std::sqrt(r.first_passage * (1.0 - r.first_passage) / n);
  const double se = std::hypot(r.sup_zero_se, r.first_passage_se);
  r.z_score = se > 0.0 ? std::abs(r.sup_zero - r.first_passage) / se : 0.0;
  return r;
}

}  // namespace levysup
