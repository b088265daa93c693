#include "ceq/censor_single.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ceq/mathkit.hpp"

namespace ceq {

double DecaySegment::valuation_at(size_t k) const {
  return anchor * std::exp(-nu_integral[k]);
}

double DecaySegment::bond(size_t a, size_t b) const {
  return std::exp(-(nu_integral[b] - nu_integral[a]));
}

double single_beta(const DerivedParams& derived, int agent, double t) {
  const double w = 1.0 - t;
  const double a = derived.alpha[agent];
  const double kap = derived.kappa1[agent];
  const double s0 = w * derived.sigma0 * derived.sigma0;
  const double s0i = w * derived.sigma0i_sq(agent + 1);
  // (mu(alpha, s0))^kappa * mu(kappa, alpha^2 s0i): exact conditional-mean factor.
  return std::exp(kap * 0.5 * a * (a - 1.0) * s0) * mu_factor(kap, a * a * s0i);
}

double single_sighat(const DerivedParams& derived, int agent, double t, Convention conv) {
  if (t >= 1.0) return 0.0;
  const double e = convention_kappa_exponent(conv);
  const double kap = derived.kappa1[agent];
  return std::pow(kap, e) * derived.alpha[agent] *
         std::sqrt((1.0 - t) * derived.sigma0i_sq(agent + 1));
}

double decay_intensity(const DerivedParams& derived, int agent, double t,
                       double lambda_t, Convention conv) {
  return lambda_t * thinning_factor(single_sighat(derived, agent, t, conv));
}

double integrate_nu(const DerivedParams& derived, int agent,
                    const IntensityTable& lambda, double a, double b,
                    Convention conv, double tol) {
  if (b <= a) return 0.0;
  auto thin = [&](double s) { return thinning_factor(single_sighat(derived, agent, s, conv)); };
  double acc = 0.0;
  for (size_t p = 0; p < lambda.rates.size(); ++p) {
    const double lo = std::max(a, lambda.breaks[p]);
    const double hi = std::min(b, lambda.breaks[p + 1]);
    if (hi > lo && lambda.rates[p] > 0.0)
      acc += lambda.rates[p] * integrate_adaptive(thin, lo, hi, tol);
  }
  return acc;
}

DecaySegment decay_segment(const DerivedParams& derived, int agent,
                           double anchor_time, double anchor_value, double end_time,
                           const IntensityTable& lambda, int n_steps, Convention conv) {
  if (!(anchor_time < end_time && end_time <= 1.0))
    throw std::invalid_argument("decay_segment: inverted interval");
  if (!(anchor_value > 0.0))
    throw std::invalid_argument("decay_segment: anchor must be positive");
  DecaySegment seg;
  seg.start = anchor_time;
  seg.anchor = anchor_value;
  seg.end = end_time;
  seg.times.resize(n_steps + 1);
  seg.nu_integral.resize(n_steps + 1);
  const double h = (end_time - anchor_time) / n_steps;
  seg.times[0] = anchor_time;
  seg.nu_integral[0] = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    seg.times[k] = (k == n_steps) ? end_time : anchor_time + k * h;
    seg.nu_integral[k] = seg.nu_integral[k - 1] +
        integrate_nu(derived, agent, lambda, seg.times[k - 1], seg.times[k], conv);
  }
  return seg;
}

double reinitialize(const DerivedParams& derived, int agent, double t, double y_disclosed) {
  if (!(y_disclosed > 0.0))
    throw std::invalid_argument("reinitialize: non-positive observation");
  const double kap = derived.kappa1[agent];
  return derived.k_single[agent] * single_beta(derived, agent, t) *
         std::pow(y_disclosed, kap);
}

double invert_cutoff(const DerivedParams& derived, int agent, double t, double gamma_tilde) {
  if (!(gamma_tilde > 0.0))
    throw std::invalid_argument("invert_cutoff: non-positive valuation");
  const double kap = derived.kappa1[agent];
  const double kb = derived.k_single[agent] * single_beta(derived, agent, t);
  return std::pow(gamma_tilde / kb, 1.0 / kap);
}

CensorPoint censor_point(const DerivedParams& derived, int agent,
                         double anchor_time, double anchor_value, double t,
                         const IntensityTable& lambda, Convention conv) {
  CensorPoint pt;
  pt.t = t;
  pt.gamma_tilde = anchor_value *
      std::exp(-integrate_nu(derived, agent, lambda, anchor_time, t, conv));
  pt.gamma_obs = invert_cutoff(derived, agent, t, pt.gamma_tilde);
  pt.nu = decay_intensity(derived, agent, t, lambda.at(t), conv);
  return pt;
}

}  // namespace ceq
