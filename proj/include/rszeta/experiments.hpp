#pragma once
// Desk-scale numerical studies of the bounds the evaluator relies on:
//
//   delta_scan       Delta(x) = sum_{n<=x} c_n - C_hat x against the x^{3/5}
//                    envelope (the classical error-term exponent).
//   mean_value_scan  int_0^X |Z(1/2+it)| dt against the X^{5/4} envelope; the
//                    mean-value bound predicts a decreasing ratio.
//   zero_scan        sign changes of the Hardy-type function on the critical
//                    line, refined by bisection. Reports brackets only; makes
//                    no exhaustiveness claim.
//
// Reports serialize to CSV: "# rszeta-report <name> <params>", optional
// "# <metadata>" comment lines, a column header, then one
// "abscissa,measured,envelope,ratio" row per grid point, all %.15g.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rszeta/coeffs.hpp"
#include "rszeta/common.hpp"

namespace rszeta {

struct ReportRow {
  double abscissa = 0.0;
  double measured = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;  // measured / envelope
};

struct ExperimentReport {
  std::string name;
  std::string params;
  std::vector<std::string> metadata;
  std::vector<ReportRow> rows;
};

// Rows (x, Delta(x), x^{3/5}, ratio) over a strictly increasing integer grid.
// Prefix sums are accumulated once, in a single compensated pass.
ExperimentReport delta_scan(const CoefficientTable& table, const std::vector<std::int64_t>& x_grid,
                            double C_hat);

// Rows (X, int_0^X |Z(1/2+it)| dt, X^{5/4}, ratio) by composite Simpson with
// step dt <= 0.05. The AFE needs t >= 3, so the integrand on [0,3) is frozen
// at its t = 3 value; the size of that fixed contribution is recorded in the
// metadata. c is the shared correction constant C1 = C2 for hardy_z.
ExperimentReport mean_value_scan(const CoefficientTable& table, const std::vector<double>& X_grid,
                                 double dt, double c = 0.0, double t_cap = 500.0);

struct ZeroBracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Sign changes of hardy_z on the grid t_min, t_min+step, ..., refined by
// plain bisection to width 1e-6 (no Newton: the sharp sums are only
// piecewise-smooth in t through the x = sqrt(tau(t)) cutoffs). Brackets come
// back in increasing order and pairwise disjoint; an empty list is a valid
// result.
std::vector<ZeroBracket> zero_scan(const CoefficientTable& table, double t_min, double t_max,
                                   double step, double c = 0.0);

void write_report_csv(const ExperimentReport& rep, std::ostream& out);

}  // namespace rszeta
