#include "levysup/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "levysup/errors.hpp"
#include "levysup/jointlaw.hpp"

namespace levysup {

double project(const TripleSample& s, Coordinate c) {
  switch (c) {
    case Coordinate::GHat: return s.g_hat;
    case Coordinate::SupHat: return s.sup_hat;
    case Coordinate::Terminal: return s.terminal;
    case Coordinate::Gap: return s.sup_hat - s.terminal;
  }
  return 0.0;
}

std::vector<double> Histogram::frequencies() const {
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    f[i] = total ? static_cast<double>(counts[i]) / static_cast<double>(total) : 0.0;
  return f;
}

void Histogram::merge(const Histogram& o) {
  if (o.edges != edges) throw DomainError("cannot merge histograms with different bins");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  atom_count += o.atom_count;
  below += o.below;
  above += o.above;
  total += o.total;
}

Histogram empirical_distribution(std::span<const TripleSample> samples, Coordinate projection,
                                 const std::vector<double>& edges, bool track_atom_at_zero) {
  if (samples.empty()) throw DomainError("empirical distribution of an empty sample");
  if (edges.size() < 2) throw DomainError("need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw DomainError("bin edges must be strictly increasing");
  Histogram h;
  h.edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  for (const auto& s : samples) {
    const double v = project(s, projection);
    ++h.total;
    if (track_atom_at_zero && v == 0.0) {
      ++h.atom_count;
    } else if (v < edges.front()) {
      ++h.below;
    } else if (v > edges.back()) {
      ++h.above;
    } else {
      auto it = std::upper_bound(edges.begin(), edges.end(), v);
      std::size_t i = static_cast<std::size_t>(it - edges.begin());
      i = std::min(i, edges.size() - 1);
      ++h.counts[i - 1];
    }
  }
  return h;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf,
                    double lo, double hi) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  // Left end of the window: F_n(lo-) against F(lo).
  const auto i0 = static_cast<std::size_t>(first - sorted.begin());
  d = std::abs(cdf(lo) - i0 / n);
  for (std::size_t i = i0; i < sorted.size() && sorted[i] <= hi; ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double kolmogorov_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TabulatedCdf::TabulatedCdf(std::vector<double> x, std::vector<double> cdf)
    : x_(std::move(x)), cdf_(std::move(cdf)) {
  if (x_.size() < 2 || x_.size() != cdf_.size()) throw DomainError("bad CDF table");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw DomainError("CDF grid must be strictly increasing");
}

TabulatedCdf TabulatedCdf::from_density(const std::vector<double>& x, const std::vector<double>& f,
                                        double atom, std::optional<double> head) {
  if (x.size() < 3 || x.size() != f.size()) throw DomainError("bad density table");
  if (!(x.front() > 0.0)) throw DomainError("density grid must be positive");
  // f ~ A x^p on (0, x0].
  double p = 0.0;
  if (f[0] > 0.0 && f[1] > 0.0) p = std::log(f[1] / f[0]) / std::log(x[1] / x[0]);
  if (!(p > -1.0)) throw DomainError("density is not integrable at 0");
  // The power law is only the local slope at x0; a known head mass rescales it.
  const double mass0 = head ? *head : x[0] * f[0] / (p + 1.0);
  const int sub = 16;
  std::vector<double> xs{0.0}, cs{atom}, ds{std::nan("")};
  for (int k = 1; k < sub; ++k) {
    const double z = x[0] * k / sub;
    xs.push_back(z);
    cs.push_back(atom + mass0 * std::pow(z / x[0], p + 1.0));
    ds.push_back(mass0 * (p + 1.0) / x[0] * std::pow(z / x[0], p));
  }
  xs.push_back(x[0]);
  cs.push_back(atom + mass0);
  ds.push_back(f[0]);
  // In l = log x the integrand is x f(x). Each step integrates the parabola
  // through three neighbouring nodes: (5 g0 + 8 g1 - g2) h / 12 over [l0, l1],
  // the mirrored weights on the last step.
  const std::size_t n = x.size();
  auto g = [&](std::size_t i) { return x[i] * f[i]; };
  for (std::size_t i = 1; i < n; ++i) {
    const double h = std::log(x[i] / x[i - 1]);
    const double step = i + 1 < n ? (5 * g(i - 1) + 8 * g(i) - g(i + 1)) * h / 12
                                   : (5 * g(i) + 8 * g(i - 1) - g(i - 2)) * h / 12;
    xs.push_back(x[i]);
    cs.push_back(cs.back() + step);
    ds.push_back(f[i]);
  }
  TabulatedCdf out(std::move(xs), std::move(cs));
  out.pdf_ = std::move(ds);
  return out;
}

double TabulatedCdf::operator()(double x) const {
  if (x < x_.front()) return 0.0;
  if (x >= x_.back()) return cdf_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double dx = x_[i + 1] - x_[i];
  const double w = (x - x_[i]) / dx;
  if (pdf_.empty() || std::isnan(pdf_[i])) return cdf_[i] + w * (cdf_[i + 1] - cdf_[i]);
  // cubic Hermite with the density as slope
  const double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * cdf_[i] + (w3 - 2 * w2 + w) * dx * pdf_[i] +
         (3 * w2 - 2 * w3) * cdf_[i + 1] + (w3 - w2) * dx * pdf_[i + 1];
}

TabulatedCdf sup_marginal_cdf(const ProcessModel& m, double t, double x_max, int points,
                              const QuadratureConfig& cfg) {
  if (points < 3) throw DomainError("need at least 3 grid points");
  if (!(x_max > 0.0)) throw DomainError("grid end must be positive");
  // points nodes on the top five decades; the same spacing continues down
  // to x_max 1e-12 so the power law below the first node covers little mass
  const double h = std::log(1e5) / (points - 1);
  const int below = static_cast<int>(std::ceil(std::log(1e7) / h));
  const double lo = x_max * 1e-5 * std::exp(-below * h);
  const int n = points + below;
  std::vector<double> x(n), f(n);
  for (int i = 0; i < n; ++i) {
    x[i] = i + 1 < n ? lo * std::exp(i * h) : x_max;
    f[i] = sup_marginal_density(m, t, x[i], cfg);
  }
  auto head_f = [&](double z) { return z > 0.0 ? sup_marginal_density(m, t, z, cfg) : 0.0; };
  const double head = checked(integrate_endpoint_singular(head_f, 0.0, lo, cfg), "sup marginal head");
  return TabulatedCdf::from_density(x, f, sup_atom_mass(m, t, cfg), head);
}

namespace {

// Row sums a_i = sum_j |x_i - x_j| in O(n log n).
std::vector<long double> row_sums(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  long double total = 0.0L;
  for (double v : x) total += v;
  std::vector<long double> a(n);
  long double before = 0.0L;
  for (std::size_t r = 0; r < n; ++r) {
    const long double v = x[idx[r]];
    const long double after = total - before - v;
    a[idx[r]] = v * r - before + after - v * (n - r - 1);
    before += v;
  }
  return a;
}

// Fenwick tree holding four running sums per y-rank.
struct Fenwick4 {
  std::vector<std::array<long double, 4>> t;
  explicit Fenwick4(std::size_t n) : t(n + 1, {0, 0, 0, 0}) {}
  void add(std::size_t i, const std::array<long double, 4>& v) {
    for (++i; i < t.size(); i += i & (~i + 1))
      for (int k = 0; k < 4; ++k) t[i][k] += v[k];
  }
  // Sum over ranks [0, i).
  std::array<long double, 4> prefix(std::size_t i) const {
    std::array<long double, 4> s{0, 0, 0, 0};
    for (; i > 0; i -= i & (~i + 1))
      for (int k = 0; k < 4; ++k) s[k] += t[i][k];
    return s;
  }
};

// Precomputed pieces of the x-side of the distance covariance.
struct DcovPlan {
  std::vector<std::size_t> x_order;
  std::vector<long double> a;
  long double a_total = 0.0L;

  explicit DcovPlan(std::span<const double> x) {
    x_order.resize(x.size());
    std::iota(x_order.begin(), x_order.end(), 0);
    std::sort(x_order.begin(), x_order.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    a = row_sums(x);
    for (auto v : a) a_total += v;
  }
};

// y_rank: dense ranks of y (equal values share a rank), in [0, m).
long double dcov_core(std::span<const double> x, std::span<const double> y,
                      std::span<const std::size_t> y_rank, std::size_t m, const DcovPlan& px,
                      std::span<const long double> b, long double b_total) {
  const std::size_t n = x.size();
  Fenwick4 bit(m);
  std::array<long double, 4> all{0, 0, 0, 0};
  long double cross = 0.0L;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = px.x_order[r];
    const long double xi = x[i], yi = y[i];
    const auto lt = bit.prefix(y_rank[i]);
    const auto le = bit.prefix(y_rank[i] + 1);
    // A_w = sum_{j before i} sgn(y_i - y_j) w_j
    std::array<long double, 4> A;
    for (int k = 0; k < 4; ++k) A[k] = lt[k] + le[k] - all[k];
    cross += xi * yi * A[0] - xi * A[1] - yi * A[2] + A[3];
    const std::array<long double, 4> w{1.0L, yi, xi, xi * yi};
    bit.add(y_rank[i], w);
    for (int k = 0; k < 4; ++k) all[k] += w[k];
  }
  const long double nn = static_cast<long double>(n);
  long double ab = 0.0L;
  for (std::size_t i = 0; i < n; ++i) ab += px.a[i] * b[i];
  return 2.0L * cross / (nn * nn) + px.a_total * b_total / (nn * nn * nn * nn) -
         2.0L * ab / (nn * nn * nn);
}

std::vector<std::size_t> dense_ranks(std::span<const double> y, std::size_t& m) {
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  m = u.size();
  std::vector<std::size_t> r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    r[i] = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), y[i]) - u.begin());
  return r;
}

double dcov_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw DomainError("distance covariance needs equal nonempty samples");
  const DcovPlan px(x);
  const auto b = row_sums(y);
  long double bt = 0.0L;
  for (auto v : b) bt += v;
  std::size_t m = 0;
  const auto yr = dense_ranks(y, m);
  return static_cast<double>(dcov_core(x, y, yr, m, px, b, bt));
}

// Mid-ranks scaled to (0, 1].
std::vector<double> to_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mid / static_cast<double>(n);
    i = j + 1;
  }
  return r;
}

}  // namespace

double distance_covariance(std::span<const double> x, std::span<const double> y) {
  return dcov_pair(x, y);
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
  const double xy = dcov_pair(x, y), xx = dcov_pair(x, x), yy = dcov_pair(y, y);
  if (!(xx > 0.0 && yy > 0.0)) return 0.0;
  return std::sqrt(std::max(0.0, xy) / std::sqrt(xx * yy));
}

IndependenceResult independence_statistic(std::span<const std::array<double, 3>> triples,
                                          int permutations, std::uint64_t seed) {
  const std::size_t n = triples.size();
  if (n < 1000) throw DomainError("independence test needs at least 1000 triples");
  if (permutations < 1) throw DomainError("need at least one permutation");
  std::array<std::vector<double>, 3> col;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = triples[i][c];
    if (std::all_of(v.begin(), v.end(), [&](double z) { return z == v[0]; }))
      throw DomainError("constant coordinate in independence test");
    col[c] = to_ranks(v);
  }
  IndependenceResult res;
  std::mt19937_64 gen(seed);
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (int p = 0; p < 3; ++p) {
    const auto& x = col[pairs[p][0]];
    const auto& y0 = col[pairs[p][1]];
    const DcovPlan px(x);
    res.dcor[p] = distance_correlation(x, y0);
    auto b0 = row_sums(y0);
    long double bt = 0.0L;
    for (auto v : b0) bt += v;
    std::size_t m = 0;
    const auto r0 = dense_ranks(y0, m);
    const long double observed = dcov_core(x, y0, r0, m, px, b0, bt);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> y(n);
    std::vector<long double> b(n);
    std::vector<std::size_t> r(n);
    int exceed = 0;
    for (int k = 0; k < permutations; ++k) {
      std::shuffle(perm.begin(), perm.end(), gen);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = y0[perm[i]];
        b[i] = b0[perm[i]];
        r[i] = r0[perm[i]];
      }
      const long double v = dcov_core(x, y, r, m, px, b, bt);
      // Relative slack absorbs rounding differences between equal statistics.
      if (v >= observed - 1e-12L * std::abs(observed)) ++exceed;
    }
    res.pair_pvalue[p] = (1.0 + exceed) / (1.0 + permutations);
  }
  const double pmin = *std::min_element(res.pair_pvalue.begin(), res.pair_pvalue.end());
  res.pvalue = std::min(1.0, 3.0 * pmin);
  return res;
}

ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& prob, std::uint64_t total,
                                double min_expected) {
  if (observed.size() != prob.size() || observed.empty()) throw DomainError("chi-square size mismatch");
  if (total == 0) throw DomainError("chi-square needs a positive total");
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> exp(prob.size());
  double psum = 0.0, osum = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    exp[i] = prob[i] * static_cast<double>(total);
    psum += prob[i];
    osum += obs[i];
  }
  const double rest_p = 1.0 - psum;
  const double rest_o = static_cast<double>(total) - osum;
  if (rest_p > 1e-12 || rest_o > 0.0) {
    obs.push_back(rest_o);
    exp.push_back(std::max(rest_p, 0.0) * static_cast<double>(total));
  }
  std::vector<double> go, ge;
  double co = 0.0, ce = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    co += obs[i];
    ce += exp[i];
    if (ce >= min_expected) {
      go.push_back(co);
      ge.push_back(ce);
      co = ce = 0.0;
    }
  }
  if (ce > 0.0 || co > 0.0) {
    if (go.empty()) {
      go.push_back(co);
      ge.push_back(ce);
    } else {
      go.back() += co;
      ge.back() += ce;
    }
  }
  ChiSquareResult r;
  r.cells = static_cast<int>(go.size());
  for (std::size_t i = 0; i < go.size(); ++i) {
    const double d = go[i] - ge[i];
    r.statistic += ge[i] > 0.0 ? d * d / ge[i] : (go[i] > 0.0 ? INFINITY : 0.0);
  }
  r.dof = r.cells - 1;
  r.pvalue = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
  return r;
}

RichardsonResult richardson_extrapolate(double coarse, double mid, double fine, double factor,
                                        double p_min, double p_max) {
  RichardsonResult r;
  r.extrapolated = fine;
  const double d1 = coarse - mid, d2 = mid - fine;
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0) || std::abs(d2) >= std::abs(d1)) return r;
  r.monotone = true;
  r.rate = std::clamp(std::log(d1 / d2) / std::log(factor), p_min, p_max);
  r.extrapolated = fine - d2 / (std::pow(factor, r.rate) - 1.0);
  return r;
}

}  // namespace levysup
