#include "levysup/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "levysup/entrance.hpp"
#include "levysup/errors.hpp"
#include "levysup/fluctuation.hpp"
#include "levysup/io.hpp"
#include "levysup/jointlaw.hpp"
#include "levysup/montecarlo.hpp"
#include "levysup/stable.hpp"
#include "levysup/stats.hpp"

namespace levysup {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// start:stop:count, both ends included.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("grid must look like start:stop:count, got '" + spec + "'");
  auto num = [&](const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
      throw UsageError("bad number in grid '" + spec + "'");
    return v;
  };
  const double a = num(parts[0]), b = num(parts[1]);
  int n = 0;
  auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
  if (ec != std::errc() || p != parts[2].data() + parts[2].size()) throw UsageError("bad grid count in '" + spec + "'");
  if (n < 2) throw UsageError("grid count must be at least 2");
  if (!(b > a)) throw UsageError("grid stop must exceed start");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
  return g;
}

struct Options {
  std::string model = "bm";
  std::string model_file;
  double drift = 0.0, index = 1.5, rho = 0.5, rate = 1.0, jump_mean = 1.0;
  int jump_sign = 1;
  double t = 1.0;
  std::string grid, s_grid, y_grid;
  // Empty: CSV for grids, JSON for reports and simulation summaries.
  std::string format;
  std::string output;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double abs_tol = QuadratureConfig{}.abs_tol, rel_tol = QuadratureConfig{}.rel_tol;
  int max_depth = QuadratureConfig{}.max_depth, series_cap = QuadratureConfig{}.series_cap;
  std::string kind = "entrance", side = "sup", check;
  double alpha = 1.0, beta = 0.0;
  double tol = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t paths = 10000;
  std::uint32_t steps = 1000;
  bool no_bridge = false;
  double sub_index = 0.5, sub_scale = 1.0, sub_drift = 0.0, sub_killing = 0.0;
  double x = 1.0;
  int points = 200;
  // Model flags of every subcommand; only the active one is consulted.
  std::map<const CLI::App*, std::map<std::string, CLI::Option*>> flags;
  const CLI::App* active = nullptr;

  QuadratureConfig quadrature() const {
    QuadratureConfig c;
    c.abs_tol = abs_tol;
    c.rel_tol = rel_tol;
    c.max_depth = max_depth;
    c.series_cap = series_cap;
    c.validate();
    return c;
  }

  ProcessModel build_model() const {
    const auto& model_flags = flags.at(active);
    if (!model_file.empty()) {
      for (const auto& [k, o] : model_flags)
        if (o->count()) throw UsageError("--" + k + " cannot be combined with --model-file");
      std::ifstream in(model_file);
      if (!in) throw UsageError("cannot read model file '" + model_file + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      return model_from_text(buf.str());
    }
    std::map<std::string, std::string> kv{{"family", model}};
    auto put = [&](const std::string& flag, const std::string& key, const std::string& v) {
      if (model_flags.at(flag)->count()) kv[key] = v;
    };
    put("drift", "drift", format_double(drift));
    put("index", "alpha", format_double(index));
    put("rho", "rho", format_double(rho));
    put("rate", "rate", format_double(rate));
    put("jump-mean", "jump_mean", format_double(jump_mean));
    put("jump-sign", "jump_sign", std::to_string(jump_sign));
    return model_from_keys(kv);
  }
};

void add_model_options(CLI::App* app, Options& o) {
  auto& f = o.flags[app];
  app->add_option("--model", o.model, "bm | cauchy | stable | sn-stable | cpp");
  app->add_option("--model-file", o.model_file, "key=value model description");
  f["drift"] = app->add_option("--drift", o.drift, "drift (bm, cpp)");
  f["index"] = app->add_option("--index", o.index, "stable index (stable, sn-stable)");
  f["rho"] = app->add_option("--rho", o.rho, "positivity parameter (stable)");
  f["rate"] = app->add_option("--rate", o.rate, "jump rate (cpp)");
  f["jump-mean"] = app->add_option("--jump-mean", o.jump_mean, "mean jump size (cpp)");
  f["jump-sign"] = app->add_option("--jump-sign", o.jump_sign, "+1 or -1 (cpp)");
  app->add_option("--t", o.t, "time horizon")->capture_default_str();
}

void add_common_options(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--output", o.output, "write to this file instead of stdout");
  app->add_option("--seed", o.seed, "master seed")->envname("LEVYSUP_SEED");
  app->add_option("--workers", o.workers, "worker threads (never changes results)");
  app->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
  app->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
  app->add_option("--max-depth", o.max_depth, "quadrature bisection depth");
  app->add_option("--series-cap", o.series_cap, "maximum series terms");
}

json provenance(const Options& o, const ProcessModel* m, const std::string& command) {
  auto j = provenance_json(m, o.quadrature(), o.seed);
  j["command"] = command;
  return j;
}

void emit_table(const Options& o, const std::string& command, const ProcessModel* m,
                const std::vector<std::string>& cols, const std::vector<std::vector<double>>& rows,
                const json& meta, std::ostream& out) {
  if (o.format != "json") {
    write_csv(out, cols, rows);
    return;
  }
  json j;
  j["provenance"] = provenance(o, m, command);
  j["metadata"] = meta;
  j["columns"] = cols;
  j["rows"] = rows;
  out << j.dump(2) << '\n';
}

// Reports of identity and validation runs: the verdict drives the exit code.
int emit_report(const Options& o, const std::string& command, const std::string& name,
                const ProcessModel* m, const json& params, double residual, double tolerance,
                std::ostream& out) {
  const bool pass = std::isfinite(residual) && std::abs(residual) <= tolerance;
  if (o.format == "csv") {
    out << "identity,residual,tolerance,pass\n"
        << name << ',' << format_double(residual) << ',' << format_double(tolerance) << ','
        << (pass ? "true" : "false") << '\n';
  } else {
    json j;
    j["identity"] = name;
    if (m) j["model"] = model_json(*m);
    j["parameters"] = params;
    j["residual"] = residual;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["provenance"] = provenance(o, m, command);
    out << j.dump(2) << '\n';
  }
  return pass ? 0 : 1;
}

double tol_or(const Options& o, double def) { return std::isnan(o.tol) ? def : o.tol; }

int cmd_density(const Options& o, std::ostream& out) {
  const auto m = o.build_model();
  const auto cfg = o.quadrature();
  if (o.grid.empty()) throw UsageError("density needs --grid");
  const auto xs = parse_grid(o.grid);
  std::vector<std::vector<double>> rows;
  json meta;
  meta["t"] = o.t;
  if (o.kind == "entrance") {
    const Side side = o.side == "sup" ? Side::Supremum : Side::Infimum;
    const EntranceLaw law{m, side, cfg};
    for (double x : xs) rows.push_back({x, entrance_density(law, o.t, x)});
    meta["side"] = o.side;
    meta["lifetime_tail"] = lifetime_tail(law, o.t);
    emit_table(o, "density", &m, {"x", "density"}, rows, meta, out);
    return 0;
  }
  // joint: (s, x, y) on the product grid
  if (o.s_grid.empty() || o.y_grid.empty()) throw UsageError("joint density needs --s-grid and --y-grid");
  const auto ss = parse_grid(o.s_grid), ys = parse_grid(o.y_grid);
  for (double s : ss)
    for (double x : xs)
      for (double y : ys) rows.push_back({s, x, y, joint_density(m, o.t, s, x, y, cfg)});
  const auto atoms = joint_atoms(m, o.t, cfg);
  meta["end_atom_coefficient"] = atoms.end_coefficient;
  meta["end_atom_mass"] = atoms.end_mass;
  meta["start_atom_coefficient"] = atoms.start_coefficient;
  meta["start_atom_mass"] = atoms.start_mass;
  emit_table(o, "density", &m, {"s", "x", "y", "density"}, rows, meta, out);
  return 0;
}

int cmd_marginal(const Options& o, std::ostream& out) {
  const auto m = o.build_model();
  const auto cfg = o.quadrature();
  if (o.grid.empty()) throw UsageError("marginal needs --grid");
  std::vector<std::vector<double>> rows;
  for (double x : parse_grid(o.grid))
    rows.push_back({x, sup_marginal_density(m, o.t, x, cfg)});
  json meta;
  meta["t"] = o.t;
  meta["atom_at_zero"] = sup_atom_mass(m, o.t, cfg);
  emit_table(o, "marginal", &m, {"x", "density"}, rows, meta, out);
  return 0;
}

int cmd_arcsine(const Options& o, std::ostream& out) {
  const auto m = o.build_model();
  const auto cfg = o.quadrature();
  if (o.grid.empty()) throw UsageError("arcsine needs --grid");
  std::vector<std::vector<double>> rows;
  for (double s : parse_grid(o.grid)) {
    const bool inside = s > 0.0 && s < o.t;
    rows.push_back({s, inside ? gt_density(m, o.t, s, cfg) : 0.0});
  }
  json meta;
  meta["t"] = o.t;
  emit_table(o, "arcsine", &m, {"s", "density"}, rows, meta, out);
  return 0;
}

// kappa(a, b) by the closed form when available.
double reference_kappa(const ProcessModel& m, double a, double b, const QuadratureConfig& cfg) {
  try {
    return closed_form_kappa(m, a, b);
  } catch (const UnsupportedOperation&) {
    return fristedt_kappa(m, a, b, cfg);
  }
}

SubordinatorModel subordinator_of(const Options& o) {
  return stable_subordinator(o.sub_index, o.sub_scale, o.sub_drift, o.sub_killing);
}

int cmd_identity(const Options& o, std::ostream& out) {
  const auto cfg = o.quadrature();
  const double tol = tol_or(o, 1e-4);
  json params;
  if (o.check == "wiener-hopf" || o.check == "normalization" || o.check == "fristedt" ||
      o.check == "excursion") {
    const auto m = o.build_model();
    params["alpha"] = o.alpha;
    double r = 0.0;
    if (o.check == "wiener-hopf") {
      r = wiener_hopf_residual(m, o.alpha, cfg);
    } else if (o.check == "normalization") {
      params.erase("alpha");
      r = fristedt_kappa(m, 1.0, 0.0, cfg) - 1.0;
    } else if (o.check == "fristedt") {
      params["beta"] = o.beta;
      r = fristedt_kappa(m, o.alpha, o.beta, cfg) / closed_form_kappa(m, o.alpha, o.beta) - 1.0;
    } else {
      r = excursion_kappa(m, o.alpha, cfg) / reference_kappa(m, o.alpha, 0.0, cfg) - 1.0;
    }
    return emit_report(o, "identity", o.check, &m, params, r, tol, out);
  }
  if (o.check == "semigroup") {
    const auto m = o.build_model();
    if (o.grid.empty()) throw UsageError("semigroup check needs --grid");
    const auto g = parse_grid(o.grid);
    const auto rec = semigroup_reconstruct(m, o.t, g, cfg);
    // L1 distance on the grid by the trapezoid rule
    double l1 = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double e0 = std::abs(rec[i - 1] - marginal_density(m, o.t, g[i - 1], cfg));
      const double e1 = std::abs(rec[i] - marginal_density(m, o.t, g[i], cfg));
      l1 += 0.5 * (e0 + e1) * (g[i] - g[i - 1]);
    }
    params["t"] = o.t;
    params["grid"] = o.grid;
    return emit_report(o, "identity", "semigroup", &m, params, l1, tol_or(o, 1e-3), out);
  }
  if (o.check == "inverse-subordinator") {
    const auto sub = subordinator_of(o);
    if (o.grid.empty()) throw UsageError("inverse-subordinator check needs --grid");
    // L_t <= x iff S_x > t, and S_x = x^{1/a} S_1 in law: the density of L_t at
    // x is t p_{S_x}(t) / (a x).
    double worst = 0.0;
    for (double x : parse_grid(o.grid)) {
      if (!(x > 0.0)) continue;
      const double lhs = inverse_subordinator_density(sub, o.t, x, cfg);
      const double rhs = o.t * subordinator_density(sub, x, o.t, cfg) / (sub.index * x);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    params["index"] = sub.index;
    params["tail_constant"] = sub.tail_constant;
    params["killing"] = sub.killing;
    params["t"] = o.t;
    params["grid"] = o.grid;
    return emit_report(o, "identity", "inverse-subordinator", nullptr, params, worst, tol_or(o, 1e-6), out);
  }
  if (o.check == "drifted-subordinator") {
    const auto sub = subordinator_of(o);
    const auto rep = drifted_identity_check(sub, o.x, o.t, o.points, tol_or(o, 1e-3), cfg);
    params["index"] = sub.index;
    params["tail_constant"] = sub.tail_constant;
    params["drift"] = sub.drift;
    params["killing"] = sub.killing;
    params["x"] = o.x;
    params["t_max"] = o.t;
    params["points"] = o.points;
    return emit_report(o, "identity", "drifted-subordinator", nullptr, params, rep.tv_distance,
                       rep.tolerance, out);
  }
  throw UsageError("unknown identity check '" + o.check + "'");
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto m = o.build_model();
  const auto cfg = o.quadrature();
  SimulationPlan plan{m, o.t, o.paths, o.steps, o.seed, o.workers, !o.no_bridge};
  json params;
  params["t"] = o.t;
  params["paths"] = o.paths;
  params["steps"] = o.steps;
  if (o.check == "atom") {
    const auto est = atom_mass_estimate(m, o.t, plan);
    params["sup_zero"] = est.sup_zero;
    params["first_passage"] = est.first_passage;
    params["analytic"] = sup_atom_mass(m, o.t, cfg);
    return emit_report(o, "validate", "atom", &m, params, est.z_score, tol_or(o, 3.0), out);
  }
  auto samples = simulate_sup_triple(plan);
  std::vector<double> v;
  v.reserve(samples.size());
  if (o.check == "marginal") {
    for (const auto& s : samples) v.push_back(s.sup_hat);
    std::sort(v.begin(), v.end());
    // Heavy-tailed laws are compared up to the empirical 0.99-quantile.
    const double hi = v[static_cast<std::size_t>(0.99 * (v.size() - 1))];
    const double top = v[static_cast<std::size_t>(0.999 * (v.size() - 1))];
    const auto cdf = sup_marginal_cdf(m, o.t, std::max(top, 1e-3), 160, cfg);
    const double d = ks_statistic(v, [&](double x) { return cdf(x); }, 0.0, hi);
    params["upper"] = hi;
    params["bridge_correction"] = plan.bridge_correction;
    return emit_report(o, "validate", "marginal", &m, params, d, tol_or(o, 0.01), out);
  }
  if (o.check == "arcsine") {
    for (const auto& s : samples) v.push_back(s.g_hat);
    std::sort(v.begin(), v.end());
    const double rho = positivity_param(m);
    const double d = ks_statistic(v, [&](double s) { return generalized_arcsine_cdf(rho, o.t, s); });
    params["rho"] = rho;
    return emit_report(o, "validate", "arcsine", &m, params, d, tol_or(o, 0.015), out);
  }
  throw UsageError("unknown validation '" + o.check + "'");
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto m = o.build_model();
  SimulationPlan plan{m, o.t, o.paths, o.steps, o.seed, o.workers, !o.no_bridge};
  const auto samples = simulate_sup_triple(plan);
  if (o.format == "csv") {
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples)
      rows.push_back({s.g_hat, s.sup_hat, s.terminal, static_cast<double>(s.n_steps),
                      s.bridge_corrected ? 1.0 : 0.0});
    write_csv(out, {"g_hat", "sup_hat", "terminal", "n_steps", "bridge_corrected"}, rows);
    return 0;
  }
  double mg = 0.0, ms = 0.0, mx = 0.0;
  std::uint64_t zeros = 0;
  for (const auto& s : samples) {
    mg += s.g_hat;
    ms += s.sup_hat;
    mx += s.terminal;
    zeros += s.sup_hat == 0.0;
  }
  const double n = static_cast<double>(samples.size());
  json j;
  j["provenance"] = provenance(o, &m, "simulate");
  j["paths"] = o.paths;
  j["steps"] = o.steps;
  j["t"] = o.t;
  j["bridge_correction"] = plan.bridge_correction;
  j["mean_g_hat"] = mg / n;
  j["mean_sup_hat"] = ms / n;
  j["mean_terminal"] = mx / n;
  j["sup_zero_frequency"] = zeros / n;
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laws of the supremum of Levy processes"};
  app.require_subcommand(1, 1);
  Options o;

  auto* density = app.add_subcommand("density", "entrance or joint densities on a grid");
  add_model_options(density, o);
  add_common_options(density, o);
  density->add_option("--kind", o.kind, "entrance | joint")->check(CLI::IsMember({"entrance", "joint"}));
  density->add_option("--side", o.side, "sup | inf (entrance laws)")->check(CLI::IsMember({"sup", "inf"}));
  density->add_option("--grid", o.grid, "x grid start:stop:count");
  density->add_option("--s-grid", o.s_grid, "g_t grid (joint)");
  density->add_option("--y-grid", o.y_grid, "sup - X_t grid (joint)");

  auto* marginal = app.add_subcommand("marginal", "density of the supremum on a grid");
  add_model_options(marginal, o);
  add_common_options(marginal, o);
  marginal->add_option("--grid", o.grid, "x grid start:stop:count");

  auto* arcsine = app.add_subcommand("arcsine", "density of g_t on a grid");
  add_model_options(arcsine, o);
  add_common_options(arcsine, o);
  arcsine->add_option("--grid", o.grid, "s grid start:stop:count");

  auto* identity = app.add_subcommand("identity", "fluctuation identity checks");
  add_model_options(identity, o);
  add_common_options(identity, o);
  identity->add_option("--check", o.check,
                       "wiener-hopf | normalization | fristedt | excursion | semigroup | "
                       "inverse-subordinator | drifted-subordinator")
      ->required();
  identity->add_option("--alpha", o.alpha, "time Laplace variable");
  identity->add_option("--beta", o.beta, "space Laplace variable");
  identity->add_option("--tol", o.tol, "pass threshold on the residual");
  identity->add_option("--grid", o.grid, "grid start:stop:count");
  identity->add_option("--sub-index", o.sub_index, "stable subordinator index");
  identity->add_option("--sub-scale", o.sub_scale, "tail constant C in C t^{-index}");
  identity->add_option("--sub-drift", o.sub_drift, "subordinator drift");
  identity->add_option("--sub-killing", o.sub_killing, "subordinator killing rate");
  identity->add_option("--x", o.x, "subordinator time x");
  identity->add_option("--points", o.points, "grid points");

  auto* validate = app.add_subcommand("validate", "analytic laws against Monte Carlo");
  add_model_options(validate, o);
  add_common_options(validate, o);
  validate->add_option("--check", o.check, "marginal | arcsine | atom")->required();
  validate->add_option("--tol", o.tol, "pass threshold (KS distance, or z-score for atom)");
  validate->add_option("--paths", o.paths, "simulated paths");
  validate->add_option("--steps", o.steps, "grid steps per path");
  validate->add_flag("--no-bridge", o.no_bridge, "disable the Brownian bridge correction");

  auto* simulate = app.add_subcommand("simulate", "dump simulated (g, sup, X_t) triples");
  add_model_options(simulate, o);
  add_common_options(simulate, o);
  simulate->add_option("--paths", o.paths, "simulated paths");
  simulate->add_option("--steps", o.steps, "grid steps per path");
  simulate->add_flag("--no-bridge", o.no_bridge, "disable the Brownian bridge correction");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << o.output << '\n';
      return 2;
    }
  }
  std::ostream& sink = o.output.empty() ? out : file;
  for (auto* sub : {density, marginal, arcsine, identity, validate, simulate})
    if (*sub) o.active = sub;
  try {
    if (*density) return cmd_density(o, sink);
    if (*marginal) return cmd_marginal(o, sink);
    if (*arcsine) return cmd_arcsine(o, sink);
    if (*identity) return cmd_identity(o, sink);
    if (*validate) return cmd_validate(o, sink);
    if (*simulate) return cmd_simulate(o, sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace levysup
