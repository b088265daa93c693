#include "ceq/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ceq {

using nlohmann::json;

Convention convention_from_string(const std::string& s) {
  if (s == "theorem1") return Convention::kTheorem1;
  if (s == "lemma2") return Convention::kLemma2;
  if (s == "proof") return Convention::kProof;
  throw std::invalid_argument("unknown convention '" + s + "' (expected theorem1|lemma2|proof)");
}

std::string to_string(Convention c) {
  switch (c) {
    case Convention::kTheorem1: return "theorem1";
    case Convention::kLemma2: return "lemma2";
    case Convention::kProof: return "proof";
  }
  return "?";
}

double convention_kappa_exponent(Convention c) {
  switch (c) {
    case Convention::kTheorem1: return 0.0;
    case Convention::kLemma2: return 0.5;
    case Convention::kProof: return 1.0;
  }
  return 1.0;
}

IntensityTable IntensityTable::constant(double rate) {
  return IntensityTable{{0.0, 1.0}, {rate}};
}

double IntensityTable::at(double t) const {
  if (t <= breaks.front()) return rates.front();
  if (t >= breaks.back()) return rates.back();
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  return rates[static_cast<size_t>(it - breaks.begin()) - 1];
}

double IntensityTable::max_rate() const {
  return *std::max_element(rates.begin(), rates.end());
}

double IntensityTable::integral(double a, double b) const {
  if (b <= a) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < rates.size(); ++i) {
    const double lo = std::max(a, breaks[i]);
    const double hi = std::min(b, breaks[i + 1]);
    if (hi > lo) acc += rates[i] * (hi - lo);
  }
  return acc;
}

void IntensityTable::validate(const std::string& where) const {
  if (breaks.size() < 2 || rates.size() != breaks.size() - 1)
    throw std::invalid_argument(where + ": breaks/rates size mismatch");
  if (breaks.front() != 0.0 || breaks.back() != 1.0)
    throw std::invalid_argument(where + ": breaks must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1]))
      throw std::invalid_argument(where + ": breaks must be strictly increasing");
  for (size_t i = 0; i < rates.size(); ++i)
    if (!std::isfinite(rates[i]) || rates[i] < 0.0)
      throw std::invalid_argument(where + ".rates[" + std::to_string(i) + "]: must be finite and >= 0");
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_len(size_t got, size_t want, const std::string& field) {
  if (got != want)
    throw std::invalid_argument(field + ": expected length " + std::to_string(want) +
                                ", got " + std::to_string(got));
}

}  // namespace

void ModelSpec::validate() const {
  require(m >= 1, "m: must be a positive integer");
  require(std::isfinite(sigma0) && sigma0 > 0.0,
          "sigma0: must be finite and > 0 (finite precisions require strict positivity)");
  const size_t mm = static_cast<size_t>(m);
  check_len(sigmaM.size(), mm, "sigmaM");
  check_len(alpha.size(), mm, "alpha");
  check_len(f.size(), mm, "f");
  check_len(lambda.size(), mm, "lambda");
  check_len(m0.size(), mm, "m0");
  require(std::isfinite(x0) && x0 > 0.0, "x0: must be finite and > 0");
  for (int i = 0; i < m; ++i) {
    const std::string sfx = "[" + std::to_string(i) + "]";
    require(std::isfinite(sigmaM[i]) && sigmaM[i] >= 0.0, "sigmaM" + sfx + ": must be finite and >= 0");
    require(std::isfinite(alpha[i]) && alpha[i] > 0.0, "alpha" + sfx + ": must be finite and > 0");
    require(std::isfinite(f[i]) && f[i] > 0.0, "f" + sfx + ": must be finite and > 0");
    require(std::isfinite(m0[i]) && m0[i] > 0.0, "m0" + sfx + ": must be finite and > 0");
    lambda[i].validate("lambda" + sfx);
  }
}

namespace {

IntensityTable intensity_from_json(const json& j, const std::string& field) {
  if (j.is_number()) {
    const double r = j.get<double>();
    if (!std::isfinite(r) || r < 0.0)
      throw std::invalid_argument(field + ": constant rate must be finite and >= 0");
    return IntensityTable::constant(r);
  }
  if (!j.is_object() || !j.contains("breaks") || !j.contains("rates"))
    throw std::invalid_argument(field + ": expected a number or {breaks, rates}");
  IntensityTable t;
  t.breaks = j.at("breaks").get<std::vector<double>>();
  t.rates = j.at("rates").get<std::vector<double>>();
  t.validate(field);
  return t;
}

}  // namespace

ModelSpec model_spec_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ModelSpec s;
  try {
    s.m = j.at("m").get<int>();
    s.sigma0 = j.at("sigma0").get<double>();
    s.sigmaM = j.at("sigmaM").get<std::vector<double>>();
    s.alpha = j.at("alpha").get<std::vector<double>>();
    s.f = j.at("f").get<std::vector<double>>();
    s.x0 = j.value("x0", 1.0);
    if (j.contains("m0"))
      s.m0 = j.at("m0").get<std::vector<double>>();
    else
      s.m0.assign(static_cast<size_t>(std::max(s.m, 0)), 1.0);  // unit-mean noise default
    const json& lam = j.at("lambda");
    if (lam.is_number()) {
      s.lambda.assign(static_cast<size_t>(std::max(s.m, 0)),
                      intensity_from_json(lam, "lambda"));
    } else if (lam.is_array()) {
      for (size_t i = 0; i < lam.size(); ++i)
        s.lambda.push_back(intensity_from_json(lam[i], "lambda[" + std::to_string(i) + "]"));
    } else {
      throw std::invalid_argument("lambda: expected a number or an array of tables");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config field error: ") + e.what());
  }
  s.validate();
  return s;
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return model_spec_from_json(ss.str());
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string model_spec_to_json(const ModelSpec& spec) {
  json j;
  j["m"] = spec.m;
  j["sigma0"] = spec.sigma0;
  j["sigmaM"] = spec.sigmaM;
  j["alpha"] = spec.alpha;
  j["f"] = spec.f;
  j["x0"] = spec.x0;
  j["m0"] = spec.m0;
  json lams = json::array();
  for (const auto& t : spec.lambda)
    lams.push_back({{"breaks", t.breaks}, {"rates", t.rates}});
  j["lambda"] = lams;
  return j.dump(2);
}

DerivedParams derive(const ModelSpec& spec) {
  spec.validate();
  DerivedParams d;
  d.m = spec.m;
  d.sigma0 = spec.sigma0;
  d.alpha = spec.alpha;
  d.f = spec.f;
  d.sigma_i.resize(spec.m);
  d.p.resize(spec.m + 1);
  d.p[0] = 1.0 / (spec.sigma0 * spec.sigma0);
  for (int i = 0; i < spec.m; ++i) {
    if (spec.sigmaM[i] == 0.0)
      throw std::invalid_argument("sigmaM[" + std::to_string(i) +
                                  "]: infinite precision unsupported (sigmaM must be > 0)");
    d.sigma_i[i] = spec.sigmaM[i] / spec.alpha[i];
    d.p[i + 1] = 1.0 / (d.sigma_i[i] * d.sigma_i[i]);
  }
  d.p_agg = 0.0;
  for (double pi : d.p) d.p_agg += pi;
  d.kappa.resize(spec.m + 1);
  for (int i = 0; i <= spec.m; ++i) d.kappa[i] = d.p[i] / d.p_agg;
  d.kappa_minus.resize(spec.m);
  d.kappa1.resize(spec.m);
  d.k_single.resize(spec.m);
  for (int i = 0; i < spec.m; ++i) {
    d.kappa_minus[i] = d.p[i + 1] / (d.p_agg - d.p[i + 1]);
    d.kappa1[i] = d.p[i + 1] / (d.p[0] + d.p[i + 1]);
    d.k_single[i] = std::pow(spec.f[i], 1.0 - d.kappa1[i]);
  }
  // k_m^i = f_i * prod_j f_j^{-kappa_j}; evaluated in log space.
  double logprod = 0.0;
  for (int j = 0; j < spec.m; ++j) logprod -= d.kappa[j + 1] * std::log(spec.f[j]);
  d.k_multi.resize(spec.m);
  for (int i = 0; i < spec.m; ++i)
    d.k_multi[i] = std::exp(std::log(spec.f[i]) + logprod);
  return d;
}

double DerivedParams::sigma0i_sq(int i) const {
  const double si = sigma_i[static_cast<size_t>(i - 1)];
  return sigma0 * sigma0 + si * si;
}

TildeParams tilde_at(const DerivedParams& derived, double t) {
  if (!(t >= 0.0 && t < 1.0))
    throw std::invalid_argument("tilde_at: degenerate horizon (need 0 <= t < 1)");
  TildeParams out;
  out.t = t;
  const double w = 1.0 - t;
  out.sigma0i_sq.resize(derived.m);
  for (int i = 1; i <= derived.m; ++i)
    out.sigma0i_sq[i - 1] = w * derived.sigma0i_sq(i);
  out.p_tilde.resize(derived.m + 1);
  out.p_tilde_agg = 0.0;
  for (int i = 0; i <= derived.m; ++i) {
    out.p_tilde[i] = derived.p[i] / w;
    out.p_tilde_agg += out.p_tilde[i];
  }
  return out;
}

}  // namespace ceq
