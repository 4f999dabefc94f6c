#include "levysup/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "levysup/errors.hpp"

namespace levysup {

namespace {

double to_number(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw DomainError("bad number for '" + key + "': " + v);
  return out;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw DomainError("bad integer for '" + key + "': " + v);
  return out;
}

std::set<std::string> allowed_keys(Family f) {
  switch (f) {
    case Family::BrownianWithDrift: return {"family", "drift"};
    case Family::SymmetricCauchy: return {"family"};
    case Family::Stable: return {"family", "alpha", "rho"};
    case Family::SpectrallyNegativeStable: return {"family", "alpha"};
    case Family::CompoundPoissonWithDrift:
      return {"family", "drift", "rate", "jump_mean", "jump_sign", "gamma_seed", "gamma_samples"};
  }
  return {};
}

}  // namespace

std::string family_key(Family f) {
  switch (f) {
    case Family::BrownianWithDrift: return "bm";
    case Family::SymmetricCauchy: return "cauchy";
    case Family::Stable: return "stable";
    case Family::SpectrallyNegativeStable: return "sn-stable";
    case Family::CompoundPoissonWithDrift: return "cpp";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::BrownianWithDrift, Family::SymmetricCauchy, Family::Stable,
                 Family::SpectrallyNegativeStable, Family::CompoundPoissonWithDrift})
    if (family_key(f) == name) return f;
  throw DomainError("unknown model family '" + std::string(name) + "'");
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::getline(in, tok);
      continue;
    }
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw DomainError("expected key=value, got '" + tok + "'");
    const auto key = tok.substr(0, eq);
    if (!kv.emplace(key, tok.substr(eq + 1)).second) throw DomainError("duplicate key '" + key + "'");
  }
  return kv;
}

ProcessModel model_from_keys(const std::map<std::string, std::string>& kv) {
  const auto fam = kv.find("family");
  if (fam == kv.end()) throw DomainError("model description has no family");
  const Family f = parse_family(fam->second);
  const auto allowed = allowed_keys(f);
  for (const auto& [k, v] : kv)
    if (!allowed.count(k)) throw DomainError("key '" + k + "' does not apply to family " + fam->second);
  auto num = [&](const char* k, double def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : to_number(k, it->second);
  };
  switch (f) {
    case Family::BrownianWithDrift: return brownian(num("drift", 0.0));
    case Family::SymmetricCauchy: return cauchy();
    case Family::Stable: return stable(num("alpha", 2.0), num("rho", 0.5));
    case Family::SpectrallyNegativeStable: return spectrally_negative_stable(num("alpha", 1.5));
    case Family::CompoundPoissonWithDrift: {
      ModelParams p;
      p.family = f;
      p.jump_rate = num("rate", 1.0);
      p.jump_mean = num("jump_mean", 1.0);
      const double sign = num("jump_sign", 1.0);
      if (sign != 1.0 && sign != -1.0) throw DomainError("jump_sign must be +1 or -1");
      p.jump_sign = sign > 0 ? JumpSign::Positive : JumpSign::Negative;
      p.drift = num("drift", -sign);
      if (auto it = kv.find("gamma_seed"); it != kv.end()) p.gamma_seed = to_count("gamma_seed", it->second);
      if (auto it = kv.find("gamma_samples"); it != kv.end())
        p.gamma_samples = to_count("gamma_samples", it->second);
      return classify_model(p);
    }
  }
  throw DomainError("unknown model family");
}

ProcessModel model_from_text(std::string_view text) { return model_from_keys(parse_key_values(text)); }

std::string model_to_text(const ProcessModel& m) {
  std::string s = "family=" + family_key(m.family()) + "\n";
  auto put = [&](const char* k, const std::string& v) { s += std::string(k) + "=" + v + "\n"; };
  switch (m.family()) {
    case Family::BrownianWithDrift: put("drift", format_double(m.drift())); break;
    case Family::SymmetricCauchy: break;
    case Family::Stable:
      put("alpha", format_double(m.index()));
      put("rho", format_double(m.rho()));
      break;
    case Family::SpectrallyNegativeStable: put("alpha", format_double(m.index())); break;
    case Family::CompoundPoissonWithDrift: {
      const auto p = m.params();
      put("drift", format_double(m.drift()));
      put("rate", format_double(m.jump_rate()));
      put("jump_mean", format_double(m.jump_mean()));
      put("jump_sign", m.jump_sign() == JumpSign::Positive ? "1" : "-1");
      put("gamma_seed", std::to_string(p.gamma_seed));
      put("gamma_samples", std::to_string(p.gamma_samples));
      break;
    }
  }
  return s;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw DomainError("CSV row width does not match header");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

nlohmann::ordered_json model_json(const ProcessModel& m) {
  nlohmann::ordered_json j;
  j["family"] = family_key(m.family());
  switch (m.family()) {
    case Family::BrownianWithDrift: j["drift"] = m.drift(); break;
    case Family::SymmetricCauchy: break;
    case Family::Stable:
      j["alpha"] = m.index();
      j["rho"] = m.rho();
      break;
    case Family::SpectrallyNegativeStable: j["alpha"] = m.index(); break;
    case Family::CompoundPoissonWithDrift:
      j["drift"] = m.drift();
      j["rate"] = m.jump_rate();
      j["jump_mean"] = m.jump_mean();
      j["jump_sign"] = m.jump_sign() == JumpSign::Positive ? 1 : -1;
      if (const auto& g = m.ladder_gamma()) {
        j["gamma"] = g->value;
        j["gamma_se"] = g->std_error;
        j["gamma_seed"] = g->seed;
        j["gamma_samples"] = g->samples;
      }
      break;
  }
  j["regularity"] = to_string(m.regularity());
  return j;
}

nlohmann::ordered_json quadrature_json(const QuadratureConfig& cfg) {
  nlohmann::ordered_json j;
  j["abs_tol"] = cfg.abs_tol;
  j["rel_tol"] = cfg.rel_tol;
  j["max_depth"] = cfg.max_depth;
  j["max_intervals"] = cfg.max_intervals;
  j["tail_tol"] = cfg.tail_tol;
  j["series_cap"] = cfg.series_cap;
  return j;
}

nlohmann::ordered_json provenance_json(const ProcessModel* m, const QuadratureConfig& cfg,
                                       std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["tool"] = "levysup";
  j["version"] = std::string(kToolVersion);
  if (m) j["model"] = model_json(*m);
  j["quadrature"] = quadrature_json(cfg);
  j["seed"] = seed;
  return j;
}

}  // namespace levysup
