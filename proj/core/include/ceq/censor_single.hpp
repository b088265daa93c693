// Single-agent (Theorem 1) machinery: thinned decay intensity, closed-form
// valuation decay between disclosures, re-initialization at a disclosure,
// and the inversion between valuation and observation cutoffs. The agent is
// treated in isolation: only the precisions p_0 and p_i enter.
#pragma once

#include <vector>

#include "ceq/params.hpp"

namespace ceq {

struct DecaySegment {
  double start = 0.0;                // last disclosure time
  double anchor = 1.0;               // re-initialized valuation g*(start)
  double end = 1.0;                  // segment end
  std::vector<double> times;         // start .. end
  std::vector<double> nu_integral;   // int_start^times[k] nu ds (zero at start)

  double valuation_at(size_t k) const;   // anchor * exp(-nu_integral[k])
  // Rescaled-cutoff bond factor B(times[a], times[b]) = gamma_hat_b / gamma_hat_a.
  double bond(size_t a, size_t b) const;
};

struct CensorPoint {
  double t = 0.0;
  double gamma_tilde = 1.0;  // valuation cutoff
  double gamma_obs = 1.0;    // observation cutoff
  double nu = 0.0;           // decay intensity
};

// Solitary-agent beta factor of Lemma 2 at time t (exact compensator form).
double single_beta(const DerivedParams& derived, int agent, double t);

// Decay volatility sighat(t) under the given variance convention.
double single_sighat(const DerivedParams& derived, int agent, double t,
                     Convention conv = Convention::kProof);

// nu_t = lambda_t * (2*Phi(sighat_t/2) - 1).
double decay_intensity(const DerivedParams& derived, int agent, double t,
                       double lambda_t, Convention conv = Convention::kProof);

// Exact integral of nu over [a,b] (adaptive Simpson per intensity piece).
double integrate_nu(const DerivedParams& derived, int agent,
                    const IntensityTable& lambda, double a, double b,
                    Convention conv = Convention::kProof, double tol = 1e-12);

// Tabulated decay over [anchor_time, end_time] on n_steps+1 uniform times.
DecaySegment decay_segment(const DerivedParams& derived, int agent,
                           double anchor_time, double anchor_value, double end_time,
                           const IntensityTable& lambda, int n_steps = 1000,
                           Convention conv = Convention::kProof);

// Time-t conditional-mean image of a disclosed observation:
// k_1^i * beta_t * y^kappa_1^i.
double reinitialize(const DerivedParams& derived, int agent, double t, double y_disclosed);

// gamma = (gamma_tilde / (k * beta_t))^(1/kappa); inverse of reinitialize.
double invert_cutoff(const DerivedParams& derived, int agent, double t, double gamma_tilde);

// Point on the censor schedule for an anchor at (anchor_time, anchor_value).
CensorPoint censor_point(const DerivedParams& derived, int agent,
                         double anchor_time, double anchor_value, double t,
                         const IntensityTable& lambda,
                         Convention conv = Convention::kProof);

}  // namespace ceq
