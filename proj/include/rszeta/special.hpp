#pragma once
// Complex special functions and the analytic kernel objects of the evaluator:
// log-gamma and digamma (Stirling series with recurrence shift), the gamma
// quotient X(s) of the functional equation Z(s) = X(s) Z(1-s), its leading
// asymptotic form, the AFE length parameter tau(t), the kernel
// Phi(w; s, tau) = tau^{w-s} X(w) - X(s), and the smooth cutoff rho.
//
// Branch policy: every gamma quotient is assembled from log_gamma values and
// exponentiated once. log_gamma itself tracks the continuous branch through
// the recurrence shift (log Gamma(s) = log Gamma(s+m) - sum log(s+j) with
// principal logs), so log X is continuous along vertical lines and no raw
// arg() of an oscillating exponential ever enters a phase. This matters
// because the phase 4t log(t/2pi) of X on the critical line exceeds 2pi by
// orders of magnitude; a naive arg would alias.

#include <complex>

#include "rszeta/common.hpp"

namespace rszeta {

// log Gamma(s), continuous branch (principal on the positive axis). K is the
// number of Bernoulli correction terms of the Stirling series (clamped to 12);
// arguments with |s| < 10 or Re s < 1 are first shifted by the recurrence.
cplx log_gamma(cplx s, int K = 8);

// psi(s) = Gamma'(s)/Gamma(s), same shift strategy, 8 correction terms.
cplx digamma(cplx s);

// log X(s) = (4s-2) log 2pi + lg(kappa-s) + lg(1-s) - lg(s+kappa-1) - lg(s).
// Vanishes identically at s = 1/2, which anchors the square-root branch used
// by the Hardy-type function.
cplx log_x_factor(cplx s, int kappa);

// X(s) = (2pi)^{4s-2} Gamma(kappa-s) Gamma(1-s) / (Gamma(s+kappa-1) Gamma(s)).
cplx x_factor(cplx s, int kappa);

// Leading asymptotic term on vertical lines, t >= 3:
//   (t/2pi)^{2-4sigma} exp(i(4t - 4t log(t/2pi) + (1-kappa)pi)).
// Exact modulus by construction; relative error of the whole O(1/t).
cplx x_factor_asymptotic(cplx s, int kappa);

// tau(t) = exp(-X'/X(1/2+it)) evaluated through the digamma identity
//   -X'/X(1/2+it) = -4 log 2pi + psi(kappa-1/2-it) + psi(1/2-it)
//                 + psi(kappa-1/2+it) + psi(1/2+it).
// The sum is conjugate-paired, hence exactly real analytically; the imaginary
// residue is asserted <= 1e-12 and discarded. Grows like (t/2pi)^4.
double tau_of_t(double t, int kappa);

// Phi(w; s, tau) = tau^{w-s} X(w) - X(s). Vanishes to second order at w = s
// when tau = tau(t) (the derivative log tau X(s) + X'(s) is zero by the very
// definition of tau).
cplx phi_kernel(cplx w, cplx s, double tau, int kappa);

// Smooth cutoff: rho(x) = 1 for x <= 1/b, 0 for x >= b, rho(x)+rho(1/x) = 1.
// Profile is the fixed C-infinity unit step built from g(v) = exp(-1/v):
// rho(x) = 1 - H(u), u = log x / log b, H(u) = g(1+u) / (g(1+u) + g(1-u)).
struct SmoothWeight {
  double b = 2.0;
};
double rho_weight(double x, const SmoothWeight& w);

}  // namespace rszeta
