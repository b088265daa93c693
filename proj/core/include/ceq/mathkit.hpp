// Scalar numerical kernel: normal CDF, log-normal hemi-mean (Black-Scholes
// put in strike form), the mu moment factor, the implicit cutoff equation
// solver, and small quadrature/ODE helpers shared by the censor modules.
#pragma once

#include <cstdint>
#include <functional>

namespace ceq {

// Standard normal CDF via erfc; absolute error well below 1e-12.
double normal_cdf(double x);

// mu(kappa, s2) = exp(kappa*(kappa-1)*s2/2). Equals E[L^kappa] for a
// unit-mean log-normal L whose underlying normal has variance s2.
double mu_factor(double kappa, double sigma_sq);

// Suppression weight 2*Phi(s/2)-1 of an at-the-money log-normal put with
// total volatility s. Zero at s=0, increasing.
double thinning_factor(double sighat);

// Hemi-mean E[(strike - F)^+] for F log-normal with mean `anchor` and total
// log volatility `sigma` (already time-scaled by the caller). sigma = 0
// degenerates to (strike - anchor)^+.
double hemi_mean(double strike, double anchor, double sigma);

struct CutoffSolution {
  double y = 1.0;          // root of 1 - y = lambda * H_LN(y; sigma), y in (0,1]
  double residual = 0.0;   // |(1-y) - lambda*H(y)|
  int iterations = 0;
};

// Unique solution of 1 - y = lambda * hemi_mean(y, 1, sigma) on (0,1].
// lambda is the odds weight multiplying H; callers own any odds conversion.
CutoffSolution solve_cutoff(double lambda, double sigma);

// Trapezoid quadrature of the integrated-by-parts hemi-mean
// int_{x<=strike} Q(F<=x) dx; independent cross-check for hemi_mean.
double lpm_quadrature(double strike, double anchor, double sigma, int n);

// Adaptive Simpson on [a,b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol = 1e-12);

}  // namespace ceq
