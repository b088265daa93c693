// Closed-form valuation (regression) maps: terminal-observation valuation,
// time-t conditional law of the terminal valuation, and the beta/mu factor
// bookkeeping they share.
#pragma once

#include <vector>

#include "ceq/params.hpp"

namespace ceq {

// Time-t conditional law of the terminal valuation, seen from observation
// level y: the valuation is k * beta_indiv * beta_agg * <y^kappa> * Zhat with
// Zhat unit-mean log-normal of log-variance zhat_logvar.
struct RegressionLaw {
  double k = 1.0;                  // k_1^i for m=1, k_m^i otherwise
  std::vector<double> kappa_vec;   // exponent per agent coordinate
  double beta_indiv = 1.0;
  double beta_agg = 1.0;
  double zhat_logvar = 0.0;

  double beta() const { return beta_indiv * beta_agg; }
};

// E[Z_1^i | Y_1 = y]: k * prod_j y_j^{kappa_j} (single agent: k_1 y^kappa_1).
// Evaluated in log space; throws on non-positive observations.
double terminal_valuation(const DerivedParams& derived, int agent,
                          const std::vector<double>& y);

// Lemma 2 / Lemma 2_m law at time t for agent i (0-based). The beta factors
// carry the exact compensators of the shared common-effect Brownian; the
// convention switch rescales the Zhat variance (PROOF is exact).
RegressionLaw law_at(const DerivedParams& derived, int agent, double t,
                     Convention conv = Convention::kProof);

// Product form k * beta * <y^kappa> for the law above.
double conditional_mean(const RegressionLaw& law, const std::vector<double>& y);

// Aggregate loading A = sum_j kappa_j alpha_j (enters the common-effect
// compensator and the exact Zhat variance).
double aggregate_loading(const DerivedParams& derived);

}  // namespace ceq
