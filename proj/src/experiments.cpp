#include "rszeta/experiments.hpp"

#include <cmath>
#include <ostream>

#include "rszeta/eval.hpp"

namespace rszeta {

namespace {

void require_increasing(const std::vector<double>& v, const char* who) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw validation_error(std::string(who) + ": grid must be strictly increasing");
}

}  // namespace

ExperimentReport delta_scan(const CoefficientTable& table, const std::vector<std::int64_t>& x_grid,
                            double C_hat) {
  if (x_grid.empty()) throw validation_error("delta_scan: empty grid");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (x_grid[i] <= x_grid[i - 1])
      throw validation_error("delta_scan: grid must be strictly increasing");
  if (x_grid.front() < 1 || x_grid.back() > table.size())
    throw std::length_error("delta_scan: grid exceeds the table");

  ExperimentReport rep;
  rep.name = "delta";
  rep.params = "C_hat=" + fmt15(C_hat) + " x_max=" + std::to_string(x_grid.back());
  rep.metadata.push_back("table N=" + std::to_string(table.size()) +
                         " kappa=" + std::to_string(table.spec.kappa));
  double sum = 0.0, comp = 0.0;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= x_grid.back() && next < x_grid.size(); ++n) {
    double yv = table.c_d[static_cast<std::size_t>(n)] - comp;
    double tv = sum + yv;
    comp = (tv - sum) - yv;
    sum = tv;
    if (n == x_grid[next]) {
      double x = static_cast<double>(n);
      ReportRow row;
      row.abscissa = x;
      row.measured = sum - C_hat * x;
      row.envelope = std::pow(x, 0.6);
      row.ratio = row.measured / row.envelope;
      rep.rows.push_back(row);
      ++next;
    }
  }
  return rep;
}

ExperimentReport mean_value_scan(const CoefficientTable& table, const std::vector<double>& X_grid,
                                 double dt, double c, double t_cap) {
  if (X_grid.empty()) throw validation_error("mean_value_scan: empty grid");
  require_increasing(X_grid, "mean_value_scan");
  if (X_grid.front() <= 0.0) throw validation_error("mean_value_scan: X must be positive");
  if (X_grid.back() > t_cap)
    throw validation_error("mean_value_scan: X exceeds the configured t cap");
  if (!(dt > 0.0) || dt > 0.05)
    throw validation_error("mean_value_scan: quadrature step must lie in (0, 0.05]");

  // Every X must sit on the quadrature grid with an even interval count, or
  // composite Simpson does not apply.
  std::vector<std::int64_t> steps;
  for (double X : X_grid) {
    double m = X / dt;
    auto mi = static_cast<std::int64_t>(std::llround(m));
    if (std::abs(m - static_cast<double>(mi)) > 1e-9 * std::max(1.0, m) || mi % 2 != 0)
      throw validation_error("mean_value_scan: X/dt must be an even integer for Simpson");
    steps.push_back(mi);
  }

  // |Z| = |Zh| on the critical line (the X^{-1/2} factor is unimodular), so
  // the integrand is |hardy_z|, frozen at its t = 3 value below t = 3.
  double f3 = std::abs(hardy_z(3.0, table, c).value);
  std::int64_t m_max = steps.back();
  std::vector<double> f(static_cast<std::size_t>(m_max + 1));
  for (std::int64_t i = 0; i <= m_max; ++i) {
    double t = static_cast<double>(i) * dt;
    f[static_cast<std::size_t>(i)] = (t < 3.0) ? f3 : std::abs(hardy_z(t, table, c).value);
  }

  ExperimentReport rep;
  rep.name = "meanvalue";
  rep.params = "dt=" + fmt15(dt) + " C1=C2=" + fmt15(c);
  rep.metadata.push_back("table N=" + std::to_string(table.size()) +
                         " kappa=" + std::to_string(table.spec.kappa));
  rep.metadata.push_back("integrand frozen at |Zh(3)|=" + fmt15(f3) +
                         " on [0,3); fixed contribution approx " + fmt15(3.0 * f3));
  for (std::size_t k = 0; k < X_grid.size(); ++k) {
    std::int64_t m = steps[k];
    double odd = 0.0, even = 0.0;
    for (std::int64_t i = 1; i < m; i += 2) odd += f[static_cast<std::size_t>(i)];
    for (std::int64_t i = 2; i < m; i += 2) even += f[static_cast<std::size_t>(i)];
    double integral =
        dt / 3.0 * (f[0] + f[static_cast<std::size_t>(m)] + 4.0 * odd + 2.0 * even);
    ReportRow row;
    row.abscissa = X_grid[k];
    row.measured = integral;
    row.envelope = std::pow(X_grid[k], 1.25);
    row.ratio = row.measured / row.envelope;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<ZeroBracket> zero_scan(const CoefficientTable& table, double t_min, double t_max,
                                   double step, double c) {
  if (!(t_min >= 3.0) || !(t_min < t_max))
    throw validation_error("zero_scan: requires 3 <= t_min < t_max");
  if (!(step > 0.0) || step > 0.05)
    throw validation_error("zero_scan: step must lie in (0, 0.05]");

  std::vector<ZeroBracket> out;
  double prev_t = t_min;
  double prev_f = hardy_z(prev_t, table, c).value;
  for (double t = t_min + step; prev_t < t_max; t += step) {
    if (t > t_max) t = t_max;
    double ft = hardy_z(t, table, c).value;
    if ((prev_f < 0.0 && ft >= 0.0) || (prev_f >= 0.0 && ft < 0.0)) {
      double lo = prev_t, hi = t, flo = prev_f;
      while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        double fm = hardy_z(mid, table, c).value;
        if ((flo < 0.0 && fm >= 0.0) || (flo >= 0.0 && fm < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      out.push_back(ZeroBracket{lo, hi});
    }
    prev_t = t;
    prev_f = ft;
    if (t == t_max) break;
  }
  return out;
}

void write_report_csv(const ExperimentReport& rep, std::ostream& out) {
  out << "# rszeta-report " << rep.name << " " << rep.params << "\n";
  for (const std::string& m : rep.metadata) out << "# " << m << "\n";
  out << "abscissa,measured,envelope,ratio\n";
  for (const ReportRow& r : rep.rows)
    out << fmt15(r.abscissa) << "," << fmt15(r.measured) << "," << fmt15(r.envelope) << ","
        << fmt15(r.ratio) << "\n";
}

}  // namespace rszeta
