#include "ceq/regression.hpp"

#include <cmath>
#include <stdexcept>

#include "ceq/mathkit.hpp"

namespace ceq {

double aggregate_loading(const DerivedParams& derived) {
  double a = 0.0;
  for (int j = 1; j <= derived.m; ++j) a += derived.kappa[j] * derived.alpha[j - 1];
  return a;
}

double terminal_valuation(const DerivedParams& derived, int agent,
                          const std::vector<double>& y) {
  if (agent < 0 || agent >= derived.m) throw std::invalid_argument("terminal_valuation: bad agent");
  if (y.size() != static_cast<size_t>(derived.m))
    throw std::invalid_argument("terminal_valuation: observation length mismatch");
  double acc = std::log(derived.k_multi[agent]);
  for (int j = 0; j < derived.m; ++j) {
    if (!(y[j] > 0.0)) throw std::invalid_argument("terminal_valuation: non-positive observation");
    acc += derived.kappa[j + 1] * std::log(y[j]);
  }
  return std::exp(acc);
}

RegressionLaw law_at(const DerivedParams& derived, int agent, double t, Convention conv) {
  if (agent < 0 || agent >= derived.m) throw std::invalid_argument("law_at: bad agent");
  if (!(t >= 0.0 && t < 1.0) && t != 1.0)
    throw std::invalid_argument("law_at: need 0 <= t <= 1");
  RegressionLaw law;
  law.k = derived.k_multi[agent];
  law.kappa_vec.resize(derived.m);
  for (int j = 0; j < derived.m; ++j) law.kappa_vec[j] = derived.kappa[j + 1];

  const double w = 1.0 - t;
  const double s0 = w * derived.sigma0 * derived.sigma0;  // tilde sigma_0^2
  const double A = aggregate_loading(derived);

  // beta_agg = prod_j mu(kappa_j, alpha_j^2 * tilde sigma_0j^2);
  // beta_indiv carries the cross-covariance of the shared W^0 so that
  // beta_indiv * beta_agg = mu(A, s0) * prod_j mu(kappa_j, alpha_j^2 * tilde sigma_j^2)
  // (the exact conditional-mean factor; reduces to Lemma 2 at m = 1).
  double log_agg = 0.0;
  double diag = 0.0;  // sum_j kappa_j (kappa_j - 1) alpha_j^2
  for (int j = 1; j <= derived.m; ++j) {
    const double kj = derived.kappa[j];
    const double aj = derived.alpha[j - 1];
    log_agg += 0.5 * kj * (kj - 1.0) * aj * aj * w * derived.sigma0i_sq(j);
    diag += kj * (kj - 1.0) * aj * aj;
  }
  law.beta_agg = std::exp(log_agg);
  law.beta_indiv = std::exp(0.5 * s0 * (A * (A - 1.0) - diag));

  const double e = convention_kappa_exponent(conv);
  double common = 0.0, idio = 0.0;
  for (int j = 1; j <= derived.m; ++j) {
    const double kje = std::pow(derived.kappa[j], e);
    const double aj = derived.alpha[j - 1];
    const double sj = derived.sigma_i[j - 1];
    common += kje * aj;
    idio += kje * kje * aj * aj * sj * sj * w;
  }
  law.zhat_logvar = common * common * s0 + idio;
  return law;
}

double conditional_mean(const RegressionLaw& law, const std::vector<double>& y) {
  if (y.size() != law.kappa_vec.size())
    throw std::invalid_argument("conditional_mean: observation length mismatch");
  double acc = std::log(law.k) + std::log(law.beta_indiv) + std::log(law.beta_agg);
  for (size_t j = 0; j < y.size(); ++j) {
    if (!(y[j] > 0.0)) throw std::invalid_argument("conditional_mean: non-positive observation");
    acc += law.kappa_vec[j] * std::log(y[j]);
  }
  return std::exp(acc);
}

}  // namespace ceq
