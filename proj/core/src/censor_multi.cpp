#include "ceq/censor_multi.hpp"

#include <cmath>
#include <stdexcept>

#include "ceq/mathkit.hpp"

namespace ceq {

namespace {

// Cholesky solve of the (m-1)x(m-1) system for the Schur residual variance.
// Returns false on a non-positive pivot (singular covariance).
bool cholesky_solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
      if (i == j) {
        if (s <= 0.0) return false;
        a[i][i] = std::sqrt(s);
      } else {
        a[i][j] = s / a[j][j];
      }
    }
  }
  for (size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (size_t k = 0; k < i; ++k) s -= a[i][k] * b[k];
    b[i] = s / a[i][i];
  }
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= a[k][i] * b[k];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

CovStructure partial_covariances(const DerivedParams& derived, double t) {
  if (!(t < 1.0)) throw std::invalid_argument("partial_covariances: need t < 1");
  const int m = derived.m;
  const double w = 1.0 - t;
  CovStructure out;
  out.cov.assign(m, std::vector<double>(m));
  const double s0 = derived.sigma0 * derived.sigma0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.cov[i][j] = w * (i == j ? derived.sigma0i_sq(i + 1) : s0);
  out.rho.assign(m, 0.0);
  if (m == 1) return out;
  for (int i = 0; i < m; ++i) {
    // residual variance of w~_i given the others, via the Schur complement
    std::vector<std::vector<double>> a(m - 1, std::vector<double>(m - 1));
    std::vector<double> b(m - 1);
    int r = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      int c = 0;
      for (int k = 0; k < m; ++k) {
        if (k == i) continue;
        a[r][c++] = out.cov[j][k];
      }
      b[r++] = out.cov[i][j];
    }
    std::vector<double> rhs = b;
    if (!cholesky_solve(a, rhs))
      throw std::invalid_argument("partial_covariances: degenerate correlation");
    double expl = 0.0;
    for (int j = 0; j < m - 1; ++j) expl += b[j] * rhs[j];
    const double rho_sq = expl / out.cov[i][i];
    if (!(rho_sq >= 0.0 && rho_sq < 1.0))
      throw std::invalid_argument("partial_covariances: degenerate correlation");
    out.rho[i] = std::sqrt(rho_sq);
  }
  return out;
}

double amended_mean(const DerivedParams& derived, int agent, double t) {
  if (!(t < 1.0)) throw std::invalid_argument("amended_mean: need t < 1");
  const double w = 1.0 - t;
  const double a = derived.alpha[agent];
  const double m = static_cast<double>(derived.m);
  const double pt = derived.p_agg / w;
  const double pti = derived.p[agent + 1] / w;
  const double e1 = (a * (m - 1.0) + a * (a - 1.0)) / (2.0 * (pt - pti));
  const double e2 = (m * a + a * (a - 1.0)) / (2.0 * pt);
  return std::exp(e1 - e2);
}

HypotheticalAgent hypothetical_cutoff(const DerivedParams& derived, int agent,
                                      double t, double lambda_t,
                                      Convention conv, NuForm form) {
  if (!(t < 1.0)) throw std::invalid_argument("hypothetical_cutoff: need t < 1");
  const CovStructure cs = partial_covariances(derived, t);
  HypotheticalAgent h;
  const double e = convention_kappa_exponent(conv);
  h.sigma_hyp = std::pow(derived.kappa[agent + 1], e) * derived.alpha[agent] *
                std::sqrt((1.0 - t) * derived.sigma0i_sq(agent + 1)) *
                std::sqrt(1.0 - cs.rho[agent] * cs.rho[agent]);
  h.L = amended_mean(derived, agent, t);
  h.g = solve_cutoff(lambda_t, h.sigma_hyp).y * h.L;
  h.nu_hyp = lambda_t * (form == NuForm::kThinned
                             ? thinning_factor(h.sigma_hyp)
                             : normal_cdf(h.sigma_hyp / 2.0));
  return h;
}

std::vector<double> aggregate_cutoffs(const std::vector<double>& g,
                                      const DerivedParams& derived) {
  const int m = derived.m;
  if (static_cast<int>(g.size()) != m)
    throw std::invalid_argument("aggregate_cutoffs: size mismatch");
  if (derived.kappa[0] <= 0.0)
    throw std::invalid_argument("aggregate_cutoffs: kappa_0 must be positive");
  double shared = 0.0;
  for (int j = 0; j < m; ++j) {
    if (!(g[j] > 0.0)) throw std::invalid_argument("aggregate_cutoffs: non-positive g");
    shared += derived.kappa[j + 1] / (derived.alpha[j] * derived.kappa_minus[j]) *
              std::log(g[j]);
  }
  shared /= derived.kappa[0];
  std::vector<double> logy(m);
  for (int i = 0; i < m; ++i) {
    const double log_ytilde =
        std::log(g[i]) / (derived.alpha[i] * derived.kappa_minus[i]) + shared;
    logy[i] = derived.alpha[i] * log_ytilde;
  }
  return logy;
}

double aggregated_intensity(const std::vector<double>& nu_hyp,
                            const DerivedParams& derived) {
  const int m = derived.m;
  if (static_cast<int>(nu_hyp.size()) != m)
    throw std::invalid_argument("aggregated_intensity: size mismatch");
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    double inner = 0.0;
    for (int h = 0; h < m; ++h)
      inner += derived.alpha[h] * derived.kappa[h + 1] /
               (derived.alpha[j] * derived.kappa[0]);
    acc += derived.kappa[j + 1] / derived.kappa_minus[j] * (1.0 + inner) * nu_hyp[j];
  }
  return acc;
}

MultiDynamics::MultiDynamics(const DerivedParams& derived,
                             std::vector<IntensityTable> lambda,
                             Convention conv, NuForm form)
    : derived_(derived), lambda_(std::move(lambda)), conv_(conv), form_(form) {
  if (static_cast<int>(lambda_.size()) != derived_.m)
    throw std::invalid_argument("MultiDynamics: lambda table count mismatch");
  rho_ = partial_covariances(derived_, 0.0).rho;
  const double e = convention_kappa_exponent(conv_);
  sig_hyp0_.resize(derived_.m);
  for (int i = 0; i < derived_.m; ++i)
    sig_hyp0_[i] = std::pow(derived_.kappa[i + 1], e) * derived_.alpha[i] *
                   std::sqrt(derived_.sigma0i_sq(i + 1)) *
                   std::sqrt(1.0 - rho_[i] * rho_[i]);
  agg_coeff_.resize(derived_.m);
  double loading = 0.0;
  for (int h = 0; h < derived_.m; ++h)
    loading += derived_.alpha[h] * derived_.kappa[h + 1];
  for (int j = 0; j < derived_.m; ++j)
    agg_coeff_[j] = derived_.kappa[j + 1] / derived_.kappa_minus[j] *
                    (1.0 + loading / (derived_.alpha[j] * derived_.kappa[0]));
  w_.assign(derived_.m, std::vector<double>(derived_.m));
  for (int i = 0; i < derived_.m; ++i)
    for (int j = 0; j < derived_.m; ++j) {
      double v = (i == j) ? 1.0 / derived_.kappa_minus[i] : 0.0;
      v += derived_.alpha[i] * derived_.kappa[j + 1] /
           (derived_.kappa[0] * derived_.alpha[j] * derived_.kappa_minus[j]);
      w_[i][j] = v;
    }
  kappa_bar_ = 1.0 - derived_.kappa[0];
}

double MultiDynamics::sigma_hyp(int agent, double t) const {
  return sig_hyp0_[agent] * std::sqrt(std::max(0.0, 1.0 - t));
}

double MultiDynamics::nu_hyp(int agent, double t) const {
  const double s = sigma_hyp(agent, t);
  const double thin = form_ == NuForm::kThinned ? thinning_factor(s)
                                                : normal_cdf(s / 2.0);
  return lambda_[agent].at(t) * thin;
}

double MultiDynamics::int_nu_hyp(int agent, double a, double b, double tol) const {
  if (b <= a) return 0.0;
  auto thin = [&](double s) {
    const double sh = sigma_hyp(agent, s);
    return form_ == NuForm::kThinned ? thinning_factor(sh) : normal_cdf(sh / 2.0);
  };
  const IntensityTable& lam = lambda_[agent];
  double acc = 0.0;
  for (size_t p = 0; p < lam.rates.size(); ++p) {
    const double lo = std::max(a, lam.breaks[p]);
    const double hi = std::min(b, lam.breaks[p + 1]);
    if (hi > lo && lam.rates[p] > 0.0)
      acc += lam.rates[p] * integrate_adaptive(thin, lo, hi, tol);
  }
  return acc;
}

double MultiDynamics::nu_agg(double t) const {
  double acc = 0.0;
  for (int j = 0; j < derived_.m; ++j) acc += agg_coeff_[j] * nu_hyp(j, t);
  return acc;
}

double MultiDynamics::int_nu_agg(double a, double b, double tol) const {
  double acc = 0.0;
  for (int j = 0; j < derived_.m; ++j)
    acc += agg_coeff_[j] * int_nu_hyp(j, a, b, tol);
  return acc;
}

double MultiDynamics::cutoff_weight(int i, int j) const { return w_[i][j]; }
double MultiDynamics::agg_coeff(int j) const { return agg_coeff_[j]; }

double MultiDynamics::log_beta_m(double t) const {
  const RegressionLaw law = law_at(derived_, 0, t, conv_);
  return std::log(law.beta_indiv) + std::log(law.beta_agg);
}

double MultiDynamics::valuation(double anchor_value, double theta, double t) const {
  if (!(anchor_value > 0.0))
    throw std::invalid_argument("valuation: anchor must be positive");
  if (t < theta) throw std::invalid_argument("valuation: t before anchor");
  return anchor_value * std::exp(-int_nu_agg(theta, t));
}

double MultiDynamics::cutoff(int agent, double carried_i, double theta, double t) const {
  double decay = 0.0;
  for (int j = 0; j < derived_.m; ++j)
    decay += w_[agent][j] * int_nu_hyp(j, theta, t);
  const double beta_drift = (log_beta_m(t) - log_beta_m(theta)) / kappa_bar_;
  return std::exp(std::log(carried_i) - decay - beta_drift);
}

double MultiDynamics::reinitialize(int agent, double t,
                                   const std::map<int, double>& disclosed,
                                   const std::vector<double>& carried) const {
  if (disclosed.empty())
    throw std::invalid_argument("reinitialize: empty disclosure set");
  const RegressionLaw law = law_at(derived_, agent, t, conv_);
  std::vector<double> values = carried;
  for (const auto& [j, v] : disclosed) {
    if (j < 0 || j >= derived_.m) throw std::invalid_argument("reinitialize: bad agent id");
    if (!(v > 0.0)) throw std::invalid_argument("reinitialize: non-positive observation");
    values[j] = v;
  }
  return conditional_mean(law, values);
}

MultiCensorPoint MultiDynamics::censor_point(double theta,
                                             const std::vector<double>& carried,
                                             double t) const {
  MultiCensorPoint pt;
  pt.t = t;
  pt.nu_agg = nu_agg(t);
  pt.y_cut.resize(derived_.m);
  pt.gamma_tilde.resize(derived_.m);
  for (int i = 0; i < derived_.m; ++i)
    pt.y_cut[i] = cutoff(i, carried[i], theta, t);
  // Valuation cutoff from the regression map at the all-at-cutoff vector.
  const double lbm = log_beta_m(t);
  double lg = 0.0;
  for (int j = 0; j < derived_.m; ++j)
    lg += derived_.kappa[j + 1] * std::log(pt.y_cut[j]);
  for (int i = 0; i < derived_.m; ++i)
    pt.gamma_tilde[i] = std::exp(std::log(derived_.k_multi[i]) + lbm + lg);
  return pt;
}

double multi_valuation(const MultiDynamics& dyn, int agent, double anchor_value,
                       double theta, double t) {
  (void)agent;
  return dyn.valuation(anchor_value, theta, t);
}

double multi_reinitialize(const MultiDynamics& dyn, int agent, double t,
                          const std::map<int, double>& disclosed,
                          const std::vector<double>& carried) {
  return dyn.reinitialize(agent, t, disclosed, carried);
}

}  // namespace ceq
