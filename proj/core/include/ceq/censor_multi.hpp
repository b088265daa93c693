// Multi-agent (Theorem 1_m / Theorem M) machinery: partial covariances via
// Schur complement, amended means, hypothetical cutoffs, log-cutoff linear
// aggregation, and the aggregated decay intensity. MultiDynamics bundles the
// deterministic inter-disclosure schedule shared by market and oracle.
#pragma once

#include <map>
#include <vector>

#include "ceq/params.hpp"
#include "ceq/regression.hpp"

namespace ceq {

// Form of the hypothetical decay intensity. Theorem 1_m displays the literal
// Phi(sigma/2) factor, which does not vanish with sigma and breaks the m=1
// reduction; the thinned 2*Phi(sigma/2)-1 form is the default.
enum class NuForm { kThinned, kLiteralPhi };

struct CovStructure {
  std::vector<std::vector<double>> cov;  // (1-t)-scaled covariance of w~_i
  std::vector<double> rho;               // partial correlations rho~_i (t-free)
};

struct HypotheticalAgent {
  double sigma_hyp = 0.0;  // kappa_i^e * alpha_i * sigma~_0i * sqrt(1-rho~_i^2)
  double L = 1.0;          // amended mean L_{-i}(t)
  double g = 1.0;          // hypothetical cutoff gamma_LN(lambda_i, sigma_hyp) * L
  double nu_hyp = 0.0;     // hypothetical decay intensity
};

struct MultiCensorPoint {
  double t = 0.0;
  std::vector<double> y_cut;        // per-agent observation cutoffs
  std::vector<double> gamma_tilde;  // per-agent valuation cutoffs
  double nu_agg = 0.0;
};

// Partial covariances of w~_i = sigma0*W~0 + sigma_i*W~i on the others.
// Throws "degenerate correlation" if the covariance matrix is singular.
CovStructure partial_covariances(const DerivedParams& derived, double t);

// Theorem M amended mean; p~ taken as p/(1-t) (precision of the remaining
// window), so L_{-i} -> 1 as t -> 1.
double amended_mean(const DerivedParams& derived, int agent, double t);

HypotheticalAgent hypothetical_cutoff(const DerivedParams& derived, int agent,
                                      double t, double lambda_t,
                                      Convention conv = Convention::kProof,
                                      NuForm form = NuForm::kThinned);

// Static Theorem M aggregation: log y~_i from the hypothetical cutoffs g_j;
// returns log of the per-agent observation cutoffs, log y_i = alpha_i log y~_i.
std::vector<double> aggregate_cutoffs(const std::vector<double>& g,
                                      const DerivedParams& derived);

// nu_agg = sum_j (kappa_j/kappa_{-j}) (1 + sum_h (alpha_h kappa_h)/(alpha_j kappa_0)) nu_jhyp.
double aggregated_intensity(const std::vector<double>& nu_hyp,
                            const DerivedParams& derived);

// Deterministic inter-disclosure dynamics for a fixed model.
class MultiDynamics {
 public:
  MultiDynamics(const DerivedParams& derived, std::vector<IntensityTable> lambda,
                Convention conv = Convention::kProof, NuForm form = NuForm::kThinned);

  const DerivedParams& derived() const { return derived_; }
  Convention convention() const { return conv_; }
  const std::vector<double>& rho() const { return rho_; }

  double sigma_hyp(int agent, double t) const;
  double nu_hyp(int agent, double t) const;
  double int_nu_hyp(int agent, double a, double b, double tol = 1e-12) const;
  double nu_agg(double t) const;
  double int_nu_agg(double a, double b, double tol = 1e-12) const;

  // Weight of int nu_jhyp in the log-cutoff decay of agent i (Theorem 1_m(iii)).
  double cutoff_weight(int i, int j) const;
  // Coefficient of nu_jhyp in nu_agg.
  double agg_coeff(int j) const;

  double log_beta_m(double t) const;  // log of the Lemma 2_m beta factor

  // Valuation during silence: anchor g*_i(theta) decayed by exp(-int nu_agg).
  double valuation(double anchor_value, double theta, double t) const;

  // Observation cutoff of agent i at t, anchored at the carried observation
  // value at theta: log y_t^i = log carried_i - I_i(theta,t) - dlog(beta_m)/(1-kappa_0).
  double cutoff(int agent, double carried_i, double theta, double t) const;

  // Re-initialized valuation of agent i at an event: k_m^i beta_m(t) <values^kappa>,
  // where values are disclosed observations for disclosers and current cutoffs
  // for the silent agents.
  double reinitialize(int agent, double t, const std::map<int, double>& disclosed,
                      const std::vector<double>& carried) const;

  MultiCensorPoint censor_point(double theta, const std::vector<double>& carried,
                                double t) const;

 private:
  DerivedParams derived_;
  std::vector<IntensityTable> lambda_;
  Convention conv_;
  NuForm form_;
  std::vector<double> rho_;
  std::vector<double> sig_hyp0_;  // sigma_hyp at t=0 (scales with sqrt(1-t))
  std::vector<double> agg_coeff_;
  std::vector<std::vector<double>> w_;  // cutoff weights
  double kappa_bar_ = 1.0;              // 1 - kappa_0
};

// Spec-level wrappers over MultiDynamics.
double multi_valuation(const MultiDynamics& dyn, int agent, double anchor_value,
                       double theta, double t);
double multi_reinitialize(const MultiDynamics& dyn, int agent, double t,
                          const std::map<int, double>& disclosed,
                          const std::vector<double>& carried);

}  // namespace ceq
