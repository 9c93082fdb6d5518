#include "rszeta/eval.hpp"

#include <algorithm>
#include <cmath>

namespace rszeta {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
constexpr double kPi = 3.14159265358979323846;

// Phase t*log n reduced mod 2pi. Plain double keeps the phase error near
// t*log(n)*2^-53; once the product passes 2^26 that error approaches 1e-8,
// so the product and reduction switch to extended precision (64-bit mantissa
// on x86), which keeps the error below ~1e-12 for t up to 10^6.
double phase_mod_2pi(double t, std::int64_t n, double log_n) {
  double raw = t * log_n;
  if (std::abs(raw) <= 67108864.0) return raw;  // 2^26
  long double ln = std::log(static_cast<long double>(n));
  long double ph = std::fmod(static_cast<long double>(t) * ln, kTwoPiL);
  return static_cast<double>(ph);
}

// sum_{n=1}^{m} coeff[n] * n^{alpha} * exp(i dir t log n), Kahan-compensated,
// ascending n. dir is +1 or -1. Empty for m < 1.
cplx dirichlet_sum(const std::vector<double>& coeff, std::int64_t m, double alpha, double t,
                   double dir) {
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  for (std::int64_t n = 1; n <= m; ++n) {
    double ln = std::log(static_cast<double>(n));
    double amp = coeff[static_cast<std::size_t>(n)] * std::exp(alpha * ln);
    double ph = dir * phase_mod_2pi(t, n, ln);
    double re = amp * std::cos(ph);
    double im = amp * std::sin(ph);
    double yr = re - cr, tr = sr + yr;
    cr = (tr - sr) - yr;
    sr = tr;
    double yi = im - ci, ti = si + yi;
    ci = (ti - si) - yi;
    si = ti;
  }
  return {sr, si};
}

std::int64_t cutoff_inclusive(double x) {
  // n <= x with n = floor(x) included; exactly integral x includes n = x.
  return static_cast<std::int64_t>(std::floor(x));
}

cplx cpow(double base, cplx e) { return std::exp(e * std::log(base)); }

void validate_afe_domain(double t, const AfeConfig& cfg, const CoefficientTable& table) {
  if (t < 3.0) throw validation_error("z_afe: requires t >= 3");
  if (cfg.x <= 0.0 || cfg.y <= 0.0) throw validation_error("z_afe: x and y must be positive");
  if (!(cfg.h > 0.0 && cfg.h <= 1.0)) throw validation_error("z_afe: h must lie in (0, 1]");
  double tau = tau_of_t(t, cfg.kappa);
  if (std::abs(cfg.x * cfg.y - tau) > 1e-12 * tau)
    throw validation_error("z_afe: split violates x*y = tau(t)");
  if (cutoff_inclusive(cfg.x) > table.size() || cutoff_inclusive(cfg.y) > table.size())
    throw std::length_error("z_afe: split exceeds the coefficient table");
}

}  // namespace

double choose_h(double t, double x) {
  if (t < 3.0) throw validation_error("choose_h: requires t >= 3");
  if (x < 1.0) throw validation_error("choose_h: requires x >= 1");
  double inner = std::sqrt(x) + t * t / std::sqrt(x);
  double h = std::pow(t, -11.0 / 16.0) * std::pow(inner, -0.25);
  return std::min(h, 1.0);
}

ErrorBudget error_budget(double t, double x, MuExponent mu) {
  if (t < 3.0) throw validation_error("error_budget: requires t >= 3");
  if (!(mu.mu_half >= 0.0 && mu.mu_half <= 0.25))
    throw validation_error("error_budget: mu_half must lie in [0, 1/4]");
  ErrorBudget b;
  double inner = std::sqrt(x) + t * t / std::sqrt(x);
  b.afe_part = std::pow(t, kBudgetEpsilon - 11.0 / 16.0) * std::pow(inner, 0.75);
  b.mu_part = std::pow(t, 0.5 + mu.mu_half + kBudgetEpsilon);
  return b;
}

AfeConfig make_symmetric_config(double t, int kappa, double C1, double C2) {
  double tau = tau_of_t(t, kappa);
  double r = std::sqrt(tau);
  AfeConfig cfg;
  cfg.x = r;
  cfg.y = r;
  cfg.h = choose_h(t, std::max(r, 1.0));
  cfg.C1 = C1;
  cfg.C2 = C2;
  cfg.kappa = kappa;
  return cfg;
}

AfeConfig make_split_config(double t, double ratio, int kappa, double C1, double C2) {
  if (ratio <= 0.0) throw validation_error("make_split_config: ratio must be positive");
  double tau = tau_of_t(t, kappa);
  AfeConfig cfg;
  cfg.y = std::sqrt(tau / ratio);
  cfg.x = ratio * cfg.y;
  cfg.h = choose_h(t, std::max(cfg.x, 1.0));
  cfg.C1 = C1;
  cfg.C2 = C2;
  cfg.kappa = kappa;
  return cfg;
}

ZDirectResult z_direct(cplx s, const CoefficientTable& table, std::int64_t N, double C_hat,
                       double K_hat) {
  double sigma = s.real();
  if (sigma < 0.7)
    throw validation_error("z_direct: out of validity (requires sigma >= 0.7)");
  if (N < 1 || N > table.size()) throw std::length_error("z_direct: N exceeds the table");
  ZDirectResult r;
  cplx tail = C_hat * cpow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
  r.value = dirichlet_sum(table.c_d, N, -sigma, s.imag(), -1.0) + tail;
  double np = std::pow(static_cast<double>(N), 0.6 - sigma);
  r.tail_bound = std::abs(s) * K_hat * np / (sigma - 0.6) + K_hat * np;
  return r;
}

std::pair<cplx, cplx> afe_correction_units(cplx s, double x, double y, int kappa) {
  cplx X = x_factor(s, kappa);
  cplx u = cpow(x, 1.0 - s) / (1.0 - s);
  cplx v = X * cpow(y, s) / s;
  return {u, v};
}

AfeBreakdown z_afe(cplx s, const AfeConfig& cfg, const CoefficientTable& table) {
  double sigma = s.real(), t = s.imag();
  if (sigma < 0.5 || sigma > 1.0)
    throw validation_error("z_afe: sigma outside [1/2, 1]; use reflect_afe on the left strip");
  validate_afe_domain(t, cfg, table);

  cplx X = x_factor(s, cfg.kappa);
  AfeBreakdown out;
  out.sum_x = dirichlet_sum(table.c_d, cutoff_inclusive(cfg.x), -sigma, t, -1.0);
  out.sum_y = X * dirichlet_sum(table.c_d, cutoff_inclusive(cfg.y), sigma - 1.0, t, +1.0);
  auto [u, v] = afe_correction_units(s, cfg.x, cfg.y, cfg.kappa);
  out.corr_x = cfg.C1 * u;
  out.corr_y = cfg.C2 * v;
  out.value = out.sum_x + out.sum_y + out.corr_x + out.corr_y;

  double te = std::pow(t, kBudgetEpsilon);
  out.error_budget = te * (std::pow(cfg.x, -sigma) + cfg.h * std::pow(cfg.x, 1.0 - sigma)) +
                     std::pow(t, 2.0 + kBudgetEpsilon - 4.0 * sigma) *
                         (std::pow(cfg.y, sigma - 1.0) + cfg.h * std::pow(cfg.y, sigma)) +
                     error_budget(t, cfg.x).total();
  return out;
}

AfeBreakdown reflect_afe(cplx s, const AfeConfig& cfg, const CoefficientTable& table) {
  double sigma = s.real(), t = s.imag();
  if (sigma < 0.0 || sigma > 0.5)
    throw validation_error("reflect_afe: sigma outside [0, 1/2]");
  if (t < 3.0) throw validation_error("reflect_afe: requires t >= 3");
  // Z(s) = X(s) Z(1-s). The reflected point 1-s has negative imaginary part;
  // realness of the c_n gives Z(1-s) = conj Z(conj(1-s)), and conj(1-s)
  // = (1-sigma) + it sits back in the right half-strip with t >= 3.
  AfeConfig swapped = cfg;
  std::swap(swapped.x, swapped.y);
  AfeBreakdown inner = z_afe(cplx(1.0 - sigma, t), swapped, table);
  cplx X = x_factor(s, cfg.kappa);
  AfeBreakdown out;
  out.sum_x = X * std::conj(inner.sum_x);
  out.sum_y = X * std::conj(inner.sum_y);
  out.corr_x = X * std::conj(inner.corr_x);
  out.corr_y = X * std::conj(inner.corr_y);
  out.value = out.sum_x + out.sum_y + out.corr_x + out.corr_y;
  out.error_budget = std::abs(X) * inner.error_budget;
  return out;
}

cplx z_afe_smoothed(double t, double x, double y, const SmoothWeight& w,
                    const CoefficientTable& table) {
  if (t < 3.0) throw validation_error("z_afe_smoothed: requires t >= 3");
  if (w.b <= 1.0) throw validation_error("z_afe_smoothed: cutoff edge b must exceed 1");
  if (x <= 0.0 || y <= 0.0) throw validation_error("z_afe_smoothed: x and y must be positive");
  double tau = tau_of_t(t, table.spec.kappa);
  if (std::abs(x * y - tau) > 1e-12 * tau)
    throw validation_error("z_afe_smoothed: split violates x*y = tau(t)");
  std::int64_t mx = cutoff_inclusive(w.b * x);
  std::int64_t my = cutoff_inclusive(w.b * y);
  if (mx > table.size() || my > table.size())
    throw std::length_error("z_afe_smoothed: table too short for b*max(x,y)");

  cplx s(0.5, t);
  cplx X = x_factor(s, table.spec.kappa);
  // Weighted coefficient views; rho vanishes beyond b*x so the cutoff at
  // floor(b*x) loses nothing.
  std::vector<double> wx(static_cast<std::size_t>(mx + 1), 0.0);
  for (std::int64_t n = 1; n <= mx; ++n)
    wx[static_cast<std::size_t>(n)] =
        rho_weight(static_cast<double>(n) / x, w) * table.c_d[static_cast<std::size_t>(n)];
  std::vector<double> wy(static_cast<std::size_t>(my + 1), 0.0);
  for (std::int64_t n = 1; n <= my; ++n)
    wy[static_cast<std::size_t>(n)] =
        rho_weight(static_cast<double>(n) / y, w) * table.c_d[static_cast<std::size_t>(n)];
  return dirichlet_sum(wx, mx, -0.5, t, -1.0) + X * dirichlet_sum(wy, my, -0.5, t, +1.0);
}

HardyResult hardy_z(double t, const CoefficientTable& table, double c) {
  AfeConfig cfg = make_symmetric_config(t, table.spec.kappa, c, c);
  cplx s(0.5, t);
  AfeBreakdown z = z_afe(s, cfg, table);
  cplx xm12 = std::exp(-0.5 * log_x_factor(s, table.spec.kappa));
  cplx v = xm12 * z.value;
  HardyResult r;
  r.value = v.real();
  r.im_residue = std::abs(v.imag());
  r.budget = z.error_budget;
  if (r.im_residue > r.budget)
    throw consistency_error("hardy_z: imaginary residue exceeds the error budget");
  return r;
}

double hardy_z_cos(double t, const CoefficientTable& table) {
  if (t < 3.0) throw validation_error("hardy_z_cos: requires t >= 3");
  double x = (t / kTwoPi) * (t / kTwoPi);
  std::int64_t m = cutoff_inclusive(x);
  if (m > table.size()) throw std::length_error("hardy_z_cos: table too short for (t/2pi)^2");
  double offset = (static_cast<double>(table.spec.kappa) - 1.0) * kPi;
  long double tl = static_cast<long double>(t);
  long double lx = 2.0L * std::log(static_cast<long double>(t) / kTwoPiL);
  double sum = 0.0, comp = 0.0;
  for (std::int64_t n = 1; n <= m; ++n) {
    // Full phase in extended precision: t log(x/n) - 2t + (kappa-1) pi.
    long double ph = tl * (lx - std::log(static_cast<long double>(n))) - 2.0L * tl +
                     static_cast<long double>(offset);
    double phd = static_cast<double>(std::fmod(ph, kTwoPiL));
    double term = 2.0 * table.c_d[static_cast<std::size_t>(n)] /
                  std::sqrt(static_cast<double>(n)) * std::cos(phd);
    double yv = term - comp, tv = sum + yv;
    comp = (tv - sum) - yv;
    sum = tv;
  }
  return sum;
}

double fit_shared_constant(const std::vector<cplx>& r, const std::vector<cplx>& uv) {
  if (r.size() != uv.size() || r.empty())
    throw validation_error("fit_shared_constant: mismatched or empty samples");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    num += (r[i] * std::conj(uv[i])).real();
    den += std::norm(uv[i]);
  }
  if (den == 0.0) throw validation_error("fit_shared_constant: degenerate design");
  return num / den;
}

Calibration calibrate_constants(const CoefficientTable& table, const std::vector<double>& t_grid,
                                double sigma_cal, bool free_constants) {
  if (t_grid.empty()) throw validation_error("calibrate_constants: empty t grid");
  std::int64_t N = table.size();
  Calibration cal;
  cal.C_hat = c_hat_estimate(table, N);
  cal.K_hat = delta_statistics(table, cal.C_hat, N).k_hat;

  std::vector<cplx> resid, us, vs, uvs;
  for (double t : t_grid) {
    cplx s(sigma_cal, t);
    AfeConfig cfg = make_symmetric_config(t, table.spec.kappa, 0.0, 0.0);
    AfeBreakdown base = z_afe(s, cfg, table);
    auto [u, v] = afe_correction_units(s, cfg.x, cfg.y, cfg.kappa);
    cplx target = z_direct(s, table, N, cal.C_hat, cal.K_hat).value;
    resid.push_back(target - base.value);
    us.push_back(u);
    vs.push_back(v);
    uvs.push_back(u + v);
  }

  auto rms = [](const std::vector<cplx>& v) {
    double s2 = 0.0;
    for (const cplx& z : v) s2 += std::norm(z);
    return std::sqrt(s2 / static_cast<double>(v.size()));
  };
  cal.residual_zero = rms(resid);

  double c1, c2;
  if (!free_constants) {
    c1 = c2 = fit_shared_constant(resid, uvs);
  } else {
    // 2x2 real normal equations for independent real C1, C2.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < resid.size(); ++i) {
      a11 += std::norm(us[i]);
      a22 += std::norm(vs[i]);
      a12 += (us[i] * std::conj(vs[i])).real();
      g1 += (resid[i] * std::conj(us[i])).real();
      g2 += (resid[i] * std::conj(vs[i])).real();
    }
    double det = a11 * a22 - a12 * a12;
    if (det == 0.0) throw validation_error("calibrate_constants: singular normal equations");
    c1 = (g1 * a22 - g2 * a12) / det;
    c2 = (g2 * a11 - g1 * a12) / det;
  }

  std::vector<cplx> post(resid.size());
  for (std::size_t i = 0; i < resid.size(); ++i) post[i] = resid[i] - c1 * us[i] - c2 * vs[i];
  cal.residual_fit = rms(post);

  if (cal.residual_zero < 2.0 * cal.residual_fit) {
    // Ill-conditioned fit: constants are not identifiable from these samples.
    cal.C1 = 0.0;
    cal.C2 = 0.0;
    cal.fallback = true;
    cal.budget_inflation = cal.residual_zero;
    cal.residual_fit = cal.residual_zero;
  } else {
    cal.C1 = c1;
    cal.C2 = c2;
  }
  return cal;
}

bigint difference_power_sum(int m, int p) {
  if (m < 0 || p < 0) throw validation_error("difference_power_sum: negative arguments");
  bigint total = 0;
  bigint binom = 1;  // binom(m, nu), updated incrementally
  for (int nu = 0; nu <= m; ++nu) {
    bigint term = binom;
    // nu^p with 0^0 = 1 (the nu = 0 term only contributes at p = 0).
    bigint np = 1;
    for (int i = 0; i < p; ++i) np *= nu;
    term *= np;
    if (nu % 2 == 1) term = -term;
    total += term;
    binom = binom * (m - nu) / (nu + 1);
  }
  return total;
}

}  // namespace rszeta
