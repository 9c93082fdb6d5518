// Evaluator tests. The independent reference is z_direct (absolutely
// convergent, tail bounded by partial summation against the Delta envelope);
// the sharp AFE, the reflection, the smoothed variant, and the Hardy-type
// function are validated against it, against each other, and against their
// own stated budgets and exact structural identities.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "rszeta/eval.hpp"
#include "rszeta/special.hpp"
#include "test_util.hpp"

using namespace rszeta;

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

const CoefficientTable& shared_table() {
  static CoefficientTable t = build_table(12, 20000);
  return t;
}

}  // namespace

TEST_CASE("z_direct at s = 2 against zeta(2) times the inverted series") {
  // Z(s) = zeta(s) B(s) with B(s) = sum b_n n^{-s}. zeta(2) = pi^2/6 is
  // analytic input; B(2) is summed from the exact b_n with a crude tail bound
  // max|b_n| * sum_{n>N} n^{-2} <= max|b_n| / N.
  const auto& t = shared_table();
  const std::int64_t N = t.size();
  double b_sum = 0.0, b_max = 0.0, comp = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    double term = t.b_d[static_cast<std::size_t>(n)] / (static_cast<double>(n) * n);
    double y = term - comp, s = b_sum + y;
    comp = (s - b_sum) - y;
    b_sum = s;
    b_max = std::max(b_max, std::abs(t.b_d[static_cast<std::size_t>(n)]));
  }
  double zeta2 = kPi * kPi / 6.0;
  double b_tail = b_max / static_cast<double>(N);
  auto r = z_direct(cplx(2.0, 0.0), t, N, 0.63, 0.38);
  CHECK(std::abs(r.value.imag()) < 1e-12);
  CHECK(std::abs(r.value.real() - zeta2 * b_sum) <= r.tail_bound + zeta2 * b_tail + 1e-10);
}

TEST_CASE("z_direct: doubling N moves the value less than the tail bounds") {
  const auto& t = shared_table();
  for (cplx s : {cplx(2.0, 0.0), cplx(0.9, 10.0), cplx(0.75, 33.0)}) {
    auto a = z_direct(s, t, t.size() / 2, 0.63, 0.38);
    auto b = z_direct(s, t, t.size(), 0.63, 0.38);
    CAPTURE(s.real());
    CAPTURE(s.imag());
    CHECK(std::abs(a.value - b.value) <= a.tail_bound + b.tail_bound);
    CHECK(b.tail_bound < a.tail_bound);
  }
}

TEST_CASE("z_direct rejects the conditionally convergent range") {
  CHECK_THROWS_AS(z_direct(cplx(0.65, 5.0), shared_table(), 1000, 0.63, 0.38),
                  validation_error);
}

TEST_CASE("sharp AFE: breakdown adds up exactly as stored") {
  const auto& t = shared_table();
  AfeConfig cfg = make_symmetric_config(50.0, 12, -0.6, -0.6);
  auto r = z_afe(cplx(0.6, 50.0), cfg, t);
  cplx re_added = r.sum_x + r.sum_y + r.corr_x + r.corr_y;
  CHECK(r.value == re_added);  // bitwise: same order of addition
  CHECK(r.error_budget > 0.0);
}

TEST_CASE("sharp AFE: inclusive cutoff at integral x") {
  const auto& t = shared_table();
  const double tt = 50.0;
  double tau = tau_of_t(tt, 12);
  cplx s(0.5, tt);
  AfeConfig c5{5.0, tau / 5.0, choose_h(tt, 5.0), 0.0, 0.0, 12};
  AfeConfig c45{4.5, tau / 4.5, choose_h(tt, 4.5), 0.0, 0.0, 12};
  auto r5 = z_afe(s, c5, t);
  auto r45 = z_afe(s, c45, t);
  // manual 5-term and 4-term sums
  cplx m5 = 0.0, m4 = 0.0;
  for (int n = 1; n <= 5; ++n) {
    cplx term = t.c_d[static_cast<std::size_t>(n)] *
                std::exp(-s * std::log(static_cast<double>(n)));
    m5 += term;
    if (n <= 4) m4 += term;
  }
  CHECK(std::abs(r5.sum_x - m5) < 1e-13 * std::abs(m5));
  CHECK(std::abs(r45.sum_x - m4) < 1e-13 * std::abs(m4));
  CHECK(std::abs((r5.sum_x - r45.sum_x) -
                 (m5 - m4)) < 1e-12 * std::abs(m5 - m4));
}

TEST_CASE("sharp AFE: y below 1 empties the second sum") {
  const auto& t = shared_table();
  const double tt = 50.0;
  AfeConfig cfg = make_split_config(tt, 6000.0, 12, 0.0, 0.0);
  REQUIRE(cfg.y < 1.0);
  REQUIRE(cfg.x * cfg.y == doctest::Approx(tau_of_t(tt, 12)).epsilon(1e-12));
  auto r = z_afe(cplx(0.5, tt), cfg, t);
  CHECK(r.sum_y == cplx(0.0, 0.0));
  // the y^{sigma-1} budget term must register the short side: the budget
  // exceeds what the same formula would give with y at the symmetric value
  CHECK(r.error_budget > std::pow(tt, 2.0 + kBudgetEpsilon - 2.0) * std::pow(cfg.y, -0.5));
  CHECK(std::isfinite(r.error_budget));
}

TEST_CASE("sharp AFE: split constructors satisfy their contracts") {
  for (double tt : {10.0, 100.0, 450.0}) {
    double tau = tau_of_t(tt, 12);
    auto sym = make_symmetric_config(tt, 12, -1.0, -2.0);
    CAPTURE(tt);
    CHECK(sym.x == sym.y);
    CHECK(sym.x * sym.y == doctest::Approx(tau).epsilon(1e-12));
    CHECK(sym.h == choose_h(tt, std::max(sym.x, 1.0)));
    CHECK(sym.C1 == -1.0);
    CHECK(sym.C2 == -2.0);
    auto spl = make_split_config(tt, 4.0, 12, 0.0, 0.0);
    CHECK(spl.x == doctest::Approx(4.0 * spl.y).epsilon(1e-12));
    CHECK(spl.x * spl.y == doctest::Approx(tau).epsilon(1e-12));
    CHECK(spl.h > 0.0);
    CHECK(spl.h <= 1.0);
  }
}

TEST_CASE("sharp AFE: domain validation") {
  const auto& t = shared_table();
  AfeConfig ok = make_symmetric_config(50.0, 12, 0.0, 0.0);
  CHECK_THROWS_AS(z_afe(cplx(1.2, 50.0), ok, t), validation_error);   // sigma > 1
  CHECK_THROWS_AS(z_afe(cplx(0.4, 50.0), ok, t), validation_error);   // sigma < 1/2
  CHECK_THROWS_AS(z_afe(cplx(0.5, 2.0), ok, t), validation_error);    // t < 3
  AfeConfig badh = ok;
  badh.h = 0.0;
  CHECK_THROWS_AS(z_afe(cplx(0.5, 50.0), badh, t), validation_error);
  badh.h = 1.5;
  CHECK_THROWS_AS(z_afe(cplx(0.5, 50.0), badh, t), validation_error);
  AfeConfig badxy = ok;
  badxy.x *= 1.001;  // x*y no longer tau(t)
  CHECK_THROWS_AS(z_afe(cplx(0.5, 50.0), badxy, t), validation_error);
  // cutoff beyond the table
  AfeConfig huge = make_symmetric_config(3000.0, 12, 0.0, 0.0);
  CHECK_THROWS_AS(z_afe(cplx(0.5, 3000.0), huge, t), std::length_error);
}

TEST_CASE("choose_h: frozen reference and clamp") {
  double t = 1000.0;
  double x = std::pow(t / (2 * kPi), 2.0);
  CHECK(choose_h(t, x) == doctest::Approx(9.665828504995191513808e-4).epsilon(1e-12));
  // tiny t and x make the raw formula exceed 1; it must clamp
  CHECK(choose_h(3.0, 1.0) <= 1.0);
  CHECK(choose_h(3.0, 1.0) > 0.0);
}

TEST_CASE("error budget: separable addends, x-shape, t-monotonicity") {
  auto eb = error_budget(100.0, 1000.0);
  CHECK(eb.afe_part > 0.0);
  CHECK(eb.mu_part > 0.0);
  CHECK(eb.total() == eb.afe_part + eb.mu_part);
  // afe part is minimized at x = t^2 (the sqrt(x) + t^2/sqrt(x) trough)
  double t = 100.0;
  double at_min = error_budget(t, t * t).afe_part;
  CHECK(at_min < error_budget(t, t * t / 4.0).afe_part);
  CHECK(at_min < error_budget(t, 4.0 * t * t).afe_part);
  // mu part does not depend on x
  CHECK(error_budget(t, 10.0).mu_part == error_budget(t, 1e6).mu_part);
  // both parts grow with t at fixed split geometry x = t^2
  auto low = error_budget(50.0, 2500.0);
  auto high = error_budget(500.0, 250000.0);
  CHECK(high.mu_part > low.mu_part);
  // Lindelof override shrinks only the mu part
  MuExponent lindelof{0.0};
  auto cond = error_budget(t, t * t, lindelof);
  CHECK(cond.mu_part < eb.mu_part);
  CHECK(cond.afe_part == error_budget(t, t * t).afe_part);
}

TEST_CASE("sharp AFE vs direct sum across the overlap strip") {
  const auto& t = shared_table();
  Calibration cal = calibrate_constants(t);
  for (double tt : {10.0, 20.0, 30.0}) {
    cplx s(0.9, tt);
    auto afe = z_afe(s, make_symmetric_config(tt, 12, cal.C1, cal.C2), t);
    auto dir = z_direct(s, t, t.size(), cal.C_hat, cal.K_hat);
    CAPTURE(tt);
    CHECK(std::abs(afe.value - dir.value) <= afe.error_budget + dir.tail_bound);
    // the measured deviation is far below the unconditioned budget; record
    // the sharper factual bound so regressions are visible
    CHECK(std::abs(afe.value - dir.value) < 0.25);
  }
}

TEST_CASE("reflection at the center line matches the direct sharp AFE") {
  const auto& t = shared_table();
  // at sigma = 1/2 with a symmetric split and shared constant the reflected
  // value equals the direct one analytically; the code paths are disjoint
  for (double tt : {50.0, 120.0}) {
    cplx s(0.5, tt);
    AfeConfig cfg = make_symmetric_config(tt, 12, -0.6, -0.6);
    auto direct = z_afe(s, cfg, t);
    auto refl = reflect_afe(s, cfg, t);
    CAPTURE(tt);
    CHECK(std::abs(refl.value - direct.value) < 1e-9 * std::max(1.0, std::abs(direct.value)));
  }
}

TEST_CASE("reflection agrees with the functional equation against z_direct") {
  const auto& t = shared_table();
  Calibration cal = calibrate_constants(t);
  // Z(s) for sigma = 0.25 via reflection; X(s) Z(1-s) with Z(1-s) from the
  // absolutely convergent sum at sigma = 0.75 (negative t is fine there)
  for (double tt : {20.0, 35.0}) {
    cplx s(0.25, tt);
    AfeConfig cfg = make_symmetric_config(tt, 12, cal.C1, cal.C2);
    auto refl = reflect_afe(s, cfg, t);
    cplx x = x_factor(s, 12);
    auto dir = z_direct(1.0 - s, t, t.size(), cal.C_hat, cal.K_hat);
    CAPTURE(tt);
    CHECK(std::abs(refl.value - x * dir.value) <=
          refl.error_budget + std::abs(x) * dir.tail_bound);
  }
  // the reflected breakdown also adds up exactly
  cplx s(0.3, 40.0);
  auto r = reflect_afe(s, make_symmetric_config(40.0, 12, cal.C1, cal.C2), t);
  CHECK(r.value == r.sum_x + r.sum_y + r.corr_x + r.corr_y);
}

TEST_CASE("smoothed AFE stays within the sharp budget and degenerates to sharp") {
  const auto& t = shared_table();
  for (double tt : {50.0, 100.0, 200.0}) {
    cplx s(0.5, tt);
    AfeConfig cfg = make_symmetric_config(tt, 12, 0.0, 0.0);
    auto sharp = z_afe(s, cfg, t);
    cplx smooth = z_afe_smoothed(tt, cfg.x, cfg.y, SmoothWeight{2.0}, t);
    CAPTURE(tt);
    CHECK(std::abs(smooth - sharp.value) <= sharp.error_budget);
  }
  // b -> 1+ collapses rho to the hard cutoff; without correction terms the
  // smoothed value reproduces the two bare sums of the sharp breakdown
  const double tt = 77.0;
  cplx s(0.5, tt);
  AfeConfig cfg = make_symmetric_config(tt, 12, 0.0, 0.0);
  REQUIRE(cfg.x != std::floor(cfg.x));
  auto sharp = z_afe(s, cfg, t);
  cplx hard = z_afe_smoothed(tt, cfg.x, cfg.y, SmoothWeight{1.0 + 1e-9}, t);
  cplx bare = sharp.sum_x + sharp.sum_y;
  CHECK(std::abs(hard - bare) < 1e-12 * std::abs(bare));
}

TEST_CASE("perturbing x by 1e-9 without crossing a cutoff is harmless") {
  const auto& t = shared_table();
  const double tt = 60.0;
  double tau = tau_of_t(tt, 12);
  cplx s(0.5, tt);
  double x = 150.5;  // mid-gap, no integer within 1e-7 relative
  AfeConfig a{x, tau / x, choose_h(tt, x), 0.0, 0.0, 12};
  double xp = x * (1.0 + 1e-9);
  AfeConfig b{xp, tau / xp, choose_h(tt, xp), 0.0, 0.0, 12};
  auto ra = z_afe(s, a, t);
  auto rb = z_afe(s, b, t);
  CHECK(std::abs(ra.value - rb.value) <= 1e-6 * std::max(1.0, std::abs(ra.value)));
}

TEST_CASE("Hardy-type function: structural realness and modulus identity") {
  const auto& t = shared_table();
  for (double tt : {50.0, 100.0, 200.0}) {
    auto h = hardy_z(tt, t, -0.6);
    CAPTURE(tt);
    // symmetric split: the two sums are exact conjugates after the rotation,
    // so the residue is pure rounding, far below the analytic budget
    CHECK(h.im_residue < 1e-10);
    CHECK(h.budget > 0.0);
    // |Zh| equals |Z_afe| because |X^{-1/2}| = 1 on the line
    auto v = z_afe(cplx(0.5, tt), make_symmetric_config(tt, 12, -0.6, -0.6), t);
    CHECK(h.value * h.value + h.im_residue * h.im_residue ==
          doctest::Approx(std::norm(v.value)).epsilon(1e-12));
  }
}

TEST_CASE("Hardy-type function: asymmetric split is real within the budget") {
  const auto& t = shared_table();
  for (double tt : {50.0, 100.0, 200.0}) {
    AfeConfig cfg = make_split_config(tt, 2.0, 12, -0.6, -0.6);
    auto v = z_afe(cplx(0.5, tt), cfg, t);
    cplx rotated = std::exp(-0.5 * log_x_factor(cplx(0.5, tt), 12)) * v.value;
    CAPTURE(tt);
    CHECK(std::abs(rotated.imag()) <= v.error_budget);
  }
}

TEST_CASE("Hardy-type function changes sign inside [14, 14.5]") {
  const auto& t = shared_table();
  // a sign change of Zh certifies a zero of Z on the critical line segment
  double lo = hardy_z(14.0, t, -0.6).value;
  double hi = hardy_z(14.5, t, -0.6).value;
  CHECK(lo * hi < 0.0);
}

TEST_CASE("cosine form tracks hardy_z within the stated budget") {
  const auto& t = shared_table();
  for (double tt : {50.0, 100.0, 200.0}) {
    double x = std::pow(tt / (2 * kPi), 2.0);
    double cosv = hardy_z_cos(tt, t);
    double hv = hardy_z(tt, t, 0.0).value;
    CAPTURE(tt);
    CHECK(std::abs(cosv - hv) <= error_budget(tt, x).total());
  }
  // below 2 pi the cutoff (t/2pi)^2 < 1 empties the sum
  CHECK(hardy_z_cos(3.0, t) == 0.0);
}

TEST_CASE("shared-constant least squares recovers a synthetic constant") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c_star = -0.637;
  std::vector<cplx> uv, r;
  for (int i = 0; i < 12; ++i) {
    cplx z(u(rng), u(rng));
    uv.push_back(z);
    r.push_back(c_star * z);
  }
  CHECK(fit_shared_constant(r, uv) == doctest::Approx(c_star).epsilon(1e-12));
  // with added orthogonal-ish noise the estimate stays close
  std::vector<cplx> rn = r;
  for (auto& v : rn) v += cplx(1e-3 * u(rng), 1e-3 * u(rng));
  CHECK(fit_shared_constant(rn, uv) == doctest::Approx(c_star).epsilon(1e-2));
}

TEST_CASE("calibration on the real table") {
  const auto& t = shared_table();
  Calibration cal = calibrate_constants(t);
  // the mean of c_n is near 0.63 on any window this size
  CHECK(cal.C_hat > 0.58);
  CHECK(cal.C_hat < 0.68);
  CHECK(cal.K_hat > 0.0);
  CHECK(cal.C1 == cal.C2);
  CHECK(cal.residual_fit <= cal.residual_zero);
  CHECK_FALSE(cal.fallback);
  CHECK(cal.budget_inflation == 0.0);
  // freeing the constants can only lower the least-squares residual
  Calibration fr = calibrate_constants(t, {10, 15, 20, 25, 30}, 0.9, true);
  CHECK(fr.residual_fit <= cal.residual_fit + 1e-12);
}

TEST_CASE("difference identity: binomial alternating sums of powers") {
  for (int m = 0; m <= 8; ++m) {
    bigint want_top = (m % 2 == 0) ? 1 : -1;
    for (int i = 2; i <= m; ++i) want_top *= i;
    for (int p = 0; p <= m; ++p) {
      CAPTURE(m);
      CAPTURE(p);
      if (p < m)
        REQUIRE(difference_power_sum(m, p) == 0);
      else
        REQUIRE(difference_power_sum(m, p) == want_top);
    }
  }
}
