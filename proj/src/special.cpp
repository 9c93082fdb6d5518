#include "rszeta/special.hpp"

#include <algorithm>
#include <cmath>

namespace rszeta {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2 pi)

// B_2, B_4, ..., B_24.
constexpr double kBernoulli[12] = {
    1.0 / 6,       -1.0 / 30,       1.0 / 42,      -1.0 / 30,
    5.0 / 66,      -691.0 / 2730,   7.0 / 6,       -3617.0 / 510,
    43867.0 / 798, -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730};

bool is_nonpositive_integer(cplx s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// Stirling series in the asymptotic regime (Re z >= 1 and |z| >= 10):
//   log Gamma(z) = (z - 1/2) log z - z + log(2pi)/2
//                + sum_{k=1..K} B_{2k} / ((2k)(2k-1) z^{2k-1}).
cplx stirling_log_gamma(cplx z, int K) {
  cplx lz = std::log(z);
  cplx out = (z - 0.5) * lz - z + 0.5 * kLog2Pi;
  cplx zinv2 = 1.0 / (z * z);
  cplx zpow = 1.0 / z;  // z^{-(2k-1)}
  for (int k = 1; k <= K; ++k) {
    out += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * zpow;
    zpow *= zinv2;
  }
  return out;
}

// psi(z) = log z - 1/(2z) - sum_{k=1..K} B_{2k} / (2k z^{2k}).
cplx stirling_digamma(cplx z, int K) {
  cplx out = std::log(z) - 0.5 / z;
  cplx zinv2 = 1.0 / (z * z);
  cplx zpow = zinv2;
  for (int k = 1; k <= K; ++k) {
    out -= kBernoulli[k - 1] / (2.0 * k) * zpow;
    zpow *= zinv2;
  }
  return out;
}

}  // namespace

cplx log_gamma(cplx s, int K) {
  if (is_nonpositive_integer(s)) throw std::domain_error("log_gamma: pole at nonpositive integer");
  K = std::clamp(K, 1, 12);
  // Shift with the recurrence until the Stirling series is in its sweet spot.
  // Requiring Re z >= 1 as well keeps the series off the branch cut even for
  // inputs with large modulus but negative real part.
  cplx z = s;
  cplx shift = 0.0;
  while (std::abs(z) < 10.0 || z.real() < 1.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return stirling_log_gamma(z, K) - shift;
}

cplx digamma(cplx s) {
  if (is_nonpositive_integer(s)) throw std::domain_error("digamma: pole at nonpositive integer");
  cplx z = s;
  cplx shift = 0.0;
  while (std::abs(z) < 10.0 || z.real() < 1.0) {
    shift += 1.0 / z;
    z += 1.0;
  }
  return stirling_digamma(z, 8) - shift;
}

cplx log_x_factor(cplx s, int kappa) {
  // paired differences cancel exactly at s = 1/2, where each gamma argument
  // coincides with its partner; this anchors log X(1/2) = 0 to the bit and
  // with it the branch of X^{-1/2} used by the Hardy-type function
  double k = static_cast<double>(kappa);
  return (4.0 * s - 2.0) * kLog2Pi + (log_gamma(k - s) - log_gamma(s + (k - 1.0))) +
         (log_gamma(1.0 - s) - log_gamma(s));
}

cplx x_factor(cplx s, int kappa) { return std::exp(log_x_factor(s, kappa)); }

cplx x_factor_asymptotic(cplx s, int kappa) {
  double t = s.imag();
  if (t < 3.0) throw std::domain_error("x_factor_asymptotic: requires t >= 3");
  double sigma = s.real();
  double mod = std::pow(t / kTwoPi, 2.0 - 4.0 * sigma);
  double phase = 4.0 * t - 4.0 * t * std::log(t / kTwoPi) +
                 (1.0 - static_cast<double>(kappa)) * 3.14159265358979323846;
  return std::polar(mod, phase);
}

double tau_of_t(double t, int kappa) {
  if (t < 3.0) throw std::domain_error("tau_of_t: requires t >= 3");
  double k = static_cast<double>(kappa);
  cplx sum = -4.0 * kLog2Pi + digamma(cplx(k - 0.5, -t)) + digamma(cplx(0.5, -t)) +
             digamma(cplx(k - 0.5, t)) + digamma(cplx(0.5, t));
  if (std::abs(sum.imag()) > 1e-12)
    throw consistency_error("tau_of_t: log tau has nonreal residue beyond tolerance");
  return std::exp(sum.real());
}

cplx phi_kernel(cplx w, cplx s, double tau, int kappa) {
  if (tau <= 0.0) throw std::domain_error("phi_kernel: tau must be positive");
  cplx tau_pow = std::exp((w - s) * std::log(tau));
  return tau_pow * x_factor(w, kappa) - x_factor(s, kappa);
}

double rho_weight(double x, const SmoothWeight& w) {
  if (x <= 0.0) throw std::domain_error("rho_weight: x must be positive");
  if (w.b <= 1.0) throw validation_error("rho_weight: cutoff edge b must exceed 1");
  double u = std::log(x) / std::log(w.b);
  if (u <= -1.0) return 1.0;
  if (u >= 1.0) return 0.0;
  double gp = std::exp(-1.0 / (1.0 + u));
  double gm = std::exp(-1.0 / (1.0 - u));
  // H(u) = gp/(gp+gm) rises from 0 at u=-1 to 1 at u=1 with all derivatives
  // vanishing at the ends; H(u)+H(-u)=1 gives rho(x)+rho(1/x)=1 exactly.
  return 1.0 - gp / (gp + gm);
}

}  // namespace rszeta
