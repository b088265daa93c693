#include "ceq/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ceq {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double mu_factor(double kappa, double sigma_sq) {
  return std::exp(0.5 * kappa * (kappa - 1.0) * sigma_sq);
}

double thinning_factor(double sighat) {
  if (sighat <= 0.0) return 0.0;
  // 2*Phi(s/2) - 1 = erf(s / (2*sqrt(2))), exact and cancellation-free.
  return std::erf(sighat * 0.5 * M_SQRT1_2);
}

double hemi_mean(double strike, double anchor, double sigma) {
  if (strike <= 0.0) return 0.0;
  if (sigma <= 0.0) return std::max(strike - anchor, 0.0);
  const double lg = std::log(strike / anchor);
  const double dp = (lg + 0.5 * sigma * sigma) / sigma;
  const double dm = (lg - 0.5 * sigma * sigma) / sigma;
  const double v = strike * normal_cdf(dp) - anchor * normal_cdf(dm);
  return std::clamp(v, 0.0, strike);
}

CutoffSolution solve_cutoff(double lambda, double sigma) {
  if (!(lambda >= 0.0) || !(sigma >= 0.0))
    throw std::invalid_argument("solve_cutoff: lambda and sigma must be finite and non-negative");
  CutoffSolution out;
  if (lambda == 0.0 || sigma == 0.0) {
    out.y = 1.0;
    out.residual = 0.0;
    return out;
  }
  auto F = [&](double y) { return (1.0 - y) - lambda * hemi_mean(y, 1.0, sigma); };
  // F(0+) = 1 > 0, F(1) = -lambda*(2*Phi(sigma/2)-1) <= 0, F strictly decreasing.
  double lo = 0.0, hi = 1.0;
  double y = 1.0 / (1.0 + lambda * thinning_factor(sigma));  // decent first guess
  int it = 0;
  for (; it < 200; ++it) {
    const double f = F(y);
    if (f > 0.0) lo = y; else hi = y;
    if (std::abs(f) < 1e-15 || hi - lo < 1e-16) break;
    // Newton step; derivative of F is -1 - lambda*Phi(d_plus).
    const double dp = (std::log(y) + 0.5 * sigma * sigma) / sigma;
    const double dF = -1.0 - lambda * normal_cdf(dp);
    double yn = y - f / dF;
    if (!(yn > lo && yn < hi)) yn = 0.5 * (lo + hi);
    y = yn;
  }
  out.y = y;
  out.residual = std::abs(F(y));
  out.iterations = it;
  return out;
}

double lpm_quadrature(double strike, double anchor, double sigma, int n) {
  if (n < 1000) throw std::invalid_argument("lpm_quadrature: n must be >= 1000");
  if (strike <= 0.0) return 0.0;
  if (sigma <= 0.0) return std::max(strike - anchor, 0.0);
  auto cdf = [&](double x) {
    if (x <= 0.0) return 0.0;
    return normal_cdf((std::log(x / anchor) + 0.5 * sigma * sigma) / sigma);
  };
  const double h = strike / n;
  double acc = 0.5 * (cdf(0.0) + cdf(strike));
  for (int i = 1; i < n; ++i) acc += cdf(i * h);
  return acc * h;
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return (fa + 4.0 * fm + fb) * h / 6.0;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol || depth >= 48)
    return left + right + err;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adapt(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0);
}

}  // namespace ceq
