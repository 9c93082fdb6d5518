#pragma once
// Evaluation of the convolution series Z(s) = sum c_n n^{-s} inside the
// critical strip, three ways:
//
//   z_direct        absolutely convergent tail-corrected partial sum, valid
//                   for sigma >= 0.7; the independent oracle.
//   z_afe           sharp approximate functional equation: two Dirichlet
//                   polynomials of lengths x and y with x y = tau(t), plus
//                   two correction terms, plus an explicit error budget that
//                   stands in for the discarded contour-integral remainder.
//   z_afe_smoothed  smoothly weighted variant on the critical line, with the
//                   cutoff rho, budget O(t^eps).
//
// plus the Hardy-type real function Zh(t) = Z(1/2+it) X^{-1/2}(1/2+it), its
// cosine form, and the calibration of the numerical constants C (mean value
// of c_n), K (error-term envelope) and C1 = C2 (correction-term constants).
//
// Summation policy: ascending n with Kahan-compensated accumulation. Phases
// t*log n are formed from split-precision log n (extended-precision product
// and reduction) once t*log n exceeds 2^26, keeping the phase error well
// under 1e-8 for t up to 10^6.

#include <complex>
#include <cstdint>
#include <vector>

#include "rszeta/coeffs.hpp"
#include "rszeta/common.hpp"
#include "rszeta/special.hpp"

namespace rszeta {

// Split configuration of the sharp AFE. The constraint x*y = tau(t) is
// validated to 1e-12 relative. Accuracy is only meaningful for x, y >= 1
// (the theorem regime 1 << x, y << tau); smaller positive values are legal
// inputs that empty the corresponding sum, and the error budget inflates
// accordingly (x^{-sigma} term), so degraded accuracy is reported honestly.
struct AfeConfig {
  double x = 1.0;
  double y = 1.0;
  double h = 1.0;  // in (0, 1]
  double C1 = 0.0;
  double C2 = 0.0;
  int kappa = 12;
};

// The four main terms of the sharp AFE, reported separately:
//   sum_x  = sum_{n<=x} c_n n^{-s}
//   sum_y  = X(s) * sum_{n<=y} c_n n^{s-1}
//   corr_x = C1 * x^{1-s} / (1-s)
//   corr_y = C2 * X(s) * y^s / s
// value is their sum, exactly as stored (additivity is bit-reproducible).
struct AfeBreakdown {
  cplx sum_x{};
  cplx sum_y{};
  cplx corr_x{};
  cplx corr_y{};
  cplx value{};
  double error_budget = 0.0;
};

// Lindelof-type exponent for the critical line; 32/205 unconditionally,
// 0 under the Lindelof hypothesis.
struct MuExponent {
  double mu_half = 32.0 / 205.0;
};

struct ErrorBudget {
  double afe_part = 0.0;  // t^{eps-11/16} (x^{1/2} + t^2 x^{-1/2})^{3/4}
  double mu_part = 0.0;   // t^{1/2 + mu(1/2) + eps}
  double total() const { return afe_part + mu_part; }
};

struct ZDirectResult {
  cplx value{};
  double tail_bound = 0.0;  // |s| K N^{3/5-sigma}/(sigma-3/5) + K N^{3/5-sigma}
};

struct HardyResult {
  double value = 0.0;       // Re(Z(1/2+it) X^{-1/2})
  double im_residue = 0.0;  // |Im(...)|, asserted <= budget
  double budget = 0.0;
};

struct Calibration {
  double C_hat = 0.0;
  double K_hat = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double residual_zero = 0.0;  // fit residual with C1 = C2 = 0
  double residual_fit = 0.0;   // fit residual at the returned constants
  bool fallback = false;       // true if the fit did not reduce the residual 2x
  double budget_inflation = 0.0;  // residual_zero when fallback is in effect
};

// epsilon of all O(t^eps) budgets; any fixed small positive value is faithful
// to the asymptotic statements, and a concrete one makes budgets numbers.
inline constexpr double kBudgetEpsilon = 0.05;

// h = t^{-11/16} (x^{1/2} + t^2 x^{-1/2})^{-1/4}, clamped to (0, 1].
double choose_h(double t, double x);

// Both budget addends, separately.
ErrorBudget error_budget(double t, double x, MuExponent mu = {});

// Symmetric split x = y = sqrt(tau(t)) with h = choose_h.
AfeConfig make_symmetric_config(double t, int kappa, double C1, double C2);

// Asymmetric split x = ratio * y under x y = tau(t).
AfeConfig make_split_config(double t, double ratio, int kappa, double C1, double C2);

// Tail-corrected direct sum, sigma >= 0.7:
//   sum_{n<=N} c_n n^{-s} + C_hat N^{1-s}/(s-1),
// with the partial-summation tail bound derived from |Delta(x)| <= K x^{3/5}.
ZDirectResult z_direct(cplx s, const CoefficientTable& table, std::int64_t N, double C_hat,
                       double K_hat);

// Sharp AFE, 1/2 <= sigma <= 1, t >= 3. Cutoffs are inclusive at integers
// (n <= x includes n = floor(x), and integral x includes n = x). The budget is
//   t^eps (x^{-sigma} + h x^{1-sigma})
// + t^{2+eps-4sigma} (y^{sigma-1} + h y^{sigma})
// + error_budget(t, x).total().
AfeBreakdown z_afe(cplx s, const AfeConfig& cfg, const CoefficientTable& table);

// Left half-strip 0 <= sigma <= 1/2 via the functional equation:
// Z(s) = X(s) Z(1-s), with Z(1-s) evaluated by z_afe at the reflected point
// (conjugated back to t >= 3; c_n are real, so Z(conj w) = conj Z(w)) and the
// split lengths x, y interchanged. Every breakdown term is scaled by X(s).
AfeBreakdown reflect_afe(cplx s, const AfeConfig& cfg, const CoefficientTable& table);

// Smoothed AFE on the critical line s = 1/2 + it:
//   sum_{n<=bx} rho(n/x) c_n n^{-s} + X(s) sum_{n<=by} rho(n/y) c_n n^{s-1}.
cplx z_afe_smoothed(double t, double x, double y, const SmoothWeight& w,
                    const CoefficientTable& table);

// Hardy-type function at the symmetric split with C1 = C2 = c. The branch of
// X^{-1/2} = exp(-log X / 2) is continuous in t and anchored by log X(1/2)=0.
// Throws consistency_error if the imaginary residue exceeds the budget.
HardyResult hardy_z(double t, const CoefficientTable& table, double c = 0.0);

// Cosine form at the split x = (t/2pi)^2 (empty sum, hence 0, for t < 2pi):
//   2 sum_{n<=x} c_n n^{-1/2} cos(t log(x/n) - 2t + (kappa-1) pi),
// phases reduced mod 2pi in extended precision before the cosine.
double hardy_z_cos(double t, const CoefficientTable& table);

// Correction-term units u = x^{1-s}/(1-s) and v = X(s) y^s / s, shared by
// z_afe and the calibration fit so the fitted constants multiply exactly the
// terms the evaluator adds.
std::pair<cplx, cplx> afe_correction_units(cplx s, double x, double y, int kappa);

// Least squares for the shared constant C1 = C2 = c over residuals r_i
// against model c * uv_i: c = sum Re(r conj(uv)) / sum |uv|^2.
double fit_shared_constant(const std::vector<cplx>& r, const std::vector<cplx>& uv);

// C_hat from the dyadic window mean, K_hat from the full Delta pass, then
// (C1, C2) by least squares of z_afe against z_direct on sigma_cal + i t_grid.
// The prior C1 = C2 is enforced unless free_constants is set. If the fit does
// not reduce the residual at least 2x versus C1 = C2 = 0, the constants fall
// back to 0 and budget_inflation records the unexplained residual.
Calibration calibrate_constants(const CoefficientTable& table,
                                const std::vector<double>& t_grid = {10, 15, 20, 25, 30},
                                double sigma_cal = 0.9, bool free_constants = false);

// Exact differencing identity used in the derivation of the correction terms:
// sum_{nu=0}^{m} (-1)^nu binom(m,nu) nu^p is 0 for 0 <= p < m and (-1)^m m!
// at p = m. Exposed for the integer-exact property test.
bigint difference_power_sum(int m, int p);

}  // namespace rszeta
