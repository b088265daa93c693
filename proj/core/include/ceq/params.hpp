// Model specification, validation, and the derived regression/precision
// parameters used by every other module. All types are immutable value
// types; derive() is a pure function of its input.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ceq {

// Variance convention for the log-normal multiplier Z-hat (and hence for the
// decay volatility sighat). The paper displays three inconsistent variants;
// PROOF (kappa^2 * alpha^2 * sigma0i^2 * (1-t)) is the one confirmed by the
// Monte Carlo oracles and is the default.
enum class Convention { kTheorem1, kLemma2, kProof };

Convention convention_from_string(const std::string& s);
std::string to_string(Convention c);

// Exponent e such that sighat = kappa^e * alpha * sigma0i * sqrt(1-t).
double convention_kappa_exponent(Convention c);

// Piecewise-constant intensity on [0,1]: rate[i] on [breaks[i], breaks[i+1]).
struct IntensityTable {
  std::vector<double> breaks;  // 0 = breaks.front() < ... < breaks.back() = 1
  std::vector<double> rates;   // size breaks.size()-1, all >= 0

  static IntensityTable constant(double rate);
  double at(double t) const;
  double max_rate() const;
  // Exact integral of the table over [a,b].
  double integral(double a, double b) const;
  void validate(const std::string& where) const;
};

struct ModelSpec {
  int m = 1;                        // agent count
  double sigma0 = 0.0;              // common-effect volatility (> 0)
  std::vector<double> sigmaM;       // per-agent noise volatilities (>= 0)
  std::vector<double> alpha;        // loading exponents (> 0)
  std::vector<double> f;            // size constants (> 0)
  std::vector<IntensityTable> lambda;  // per-agent arrival intensities
  double x0 = 1.0;                  // initial state (> 0)
  std::vector<double> m0;           // initial noise values (> 0), default 1

  void validate() const;  // throws std::invalid_argument with a field path
};

// Parse a ModelSpec from a JSON document. Field names mirror the struct;
// errors carry the JSON field path (and byte offset for parse errors).
ModelSpec model_spec_from_json(const std::string& json_text);
ModelSpec load_model_spec(const std::string& path);
std::string model_spec_to_json(const ModelSpec& spec);

struct DerivedParams {
  int m = 1;
  double sigma0 = 0.0;
  std::vector<double> sigma_i;      // sigma_i = sigmaM_i / alpha_i
  std::vector<double> p;            // precisions p_0..p_m (index 0 = common)
  double p_agg = 0.0;               // sum of precisions
  std::vector<double> kappa;        // kappa_0..kappa_m = p_i / p
  std::vector<double> kappa_minus;  // kappa_{-i} = p_i/(p-p_i), i = 1..m
  std::vector<double> kappa1;       // kappa_1^i = p_i/(p0+p_i), i = 1..m
  std::vector<double> k_single;     // k_1^i = f_i^(1-kappa1_i)
  std::vector<double> k_multi;      // k_m^i = f_i * <(1/f)^kappa>
  std::vector<double> alpha;        // copied loadings
  std::vector<double> f;            // copied size constants

  double sigma0i_sq(int i) const;   // sigma0^2 + sigma_i^2, i = 1..m (1-based)
};

DerivedParams derive(const ModelSpec& spec);

// Tilde quantities at time t < 1: the 2.1.4 parameters of the model
// re-started at t, with remaining-window variances (1-t)*sigma^2.
struct TildeParams {
  double t = 0.0;
  std::vector<double> sigma0i_sq;   // (1-t)*(sigma0^2+sigma_i^2), i = 1..m
  std::vector<double> p_tilde;      // p_i / (1-t), i = 0..m
  double p_tilde_agg = 0.0;
};

TildeParams tilde_at(const DerivedParams& derived, double t);

}  // namespace ceq
