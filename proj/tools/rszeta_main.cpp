// rszeta: command-line surface over the coefficient tables, the strip
// evaluators, the Hardy-type function, and the numerical experiments.
//
// Conventions shared by every subcommand:
//   - numbers print with 15 significant digits, '.' decimal separator,
//     independent of locale;
//   - every run emits a RunManifest (command, full parameter set, table
//     checksum, library version, wall time); file-writing commands put it in
//     a "<out>.manifest.json" sidecar, eval embeds it in its own output. The
//     wall-time field is informational and is the only non-reproducible entry;
//     primary output files are byte-identical across reruns with identical
//     inputs and table;
//   - calibration constants come from a "<table>.calib.json" sidecar when
//     present; otherwise they are computed once, cached there, and re-read, so
//     the first run and every later run print exactly the same parsed values;
//   - the environment variable RSZETA_TABLE overrides --table;
//   - exit codes: 0 success, 1 I/O failure, 2 validation failure.

#include <chrono>
#include <clocale>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rszeta/coeffs.hpp"
#include "rszeta/common.hpp"
#include "rszeta/eval.hpp"
#include "rszeta/experiments.hpp"
#include "rszeta/special.hpp"

using nlohmann::json;
using namespace rszeta;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

json complex_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw io_error("write failure on " + path);
}

json make_manifest(const std::string& command, const json& parameters, const json& table_checksum,
                   double wall_time_s) {
  return json{{"command", command},
              {"parameters", parameters},
              {"table_checksum", table_checksum},
              {"version", kVersion},
              {"wall_time_s", wall_time_s}};
}

void write_manifest_sidecar(const std::string& out_path, const json& manifest) {
  write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

std::string resolve_table_path(const std::string& cli_value) {
  if (const char* env = std::getenv("RSZETA_TABLE"); env && *env) return env;
  return cli_value;
}

CoefficientTable load_required_table(const std::string& cli_value) {
  std::string path = resolve_table_path(cli_value);
  if (path.empty())
    throw validation_error("a coefficient table is required (--table or RSZETA_TABLE)");
  return load_table(path);
}

// Calibration sidecar: read if present, else compute, cache, and re-read, so
// every consumer sees the post-serialization values.
Calibration load_or_compute_calibration(const CoefficientTable& table,
                                        const std::string& table_path) {
  std::string side = table_path + ".calib.json";
  auto parse = [&](std::istream& in) {
    json j;
    in >> j;
    Calibration c;
    c.C_hat = j.at("C_hat").get<double>();
    c.K_hat = j.at("K_hat").get<double>();
    c.C1 = j.at("C1").get<double>();
    c.C2 = j.at("C2").get<double>();
    c.residual_zero = j.at("residual_zero").get<double>();
    c.residual_fit = j.at("residual_fit").get<double>();
    c.fallback = j.at("fallback").get<bool>();
    c.budget_inflation = j.at("budget_inflation").get<double>();
    return c;
  };
  {
    std::ifstream in(side);
    if (in) return parse(in);
  }
  Calibration c = calibrate_constants(table);
  json j{{"C_hat", c.C_hat},
         {"K_hat", c.K_hat},
         {"C1", c.C1},
         {"C2", c.C2},
         {"residual_zero", c.residual_zero},
         {"residual_fit", c.residual_fit},
         {"fallback", c.fallback},
         {"budget_inflation", c.budget_inflation},
         {"sigma_cal", 0.9},
         {"t_grid", json::array({10, 15, 20, 25, 30})}};
  write_text_file(side, j.dump(2) + "\n");
  std::ifstream in(side);
  if (!in) throw io_error("cannot re-read calibration sidecar " + side);
  return parse(in);
}

// ---- coeffs ----------------------------------------------------------------

struct CoeffsArgs {
  std::int64_t max_n = 0;
  int weight = 12;
  std::string coeff_file;
  std::string out;
};

int run_coeffs(const CoeffsArgs& a) {
  Timer timer;
  CoefficientTable table;
  std::vector<std::string> warnings;
  if (!a.coeff_file.empty()) {
    table = ingest_coefficients(a.coeff_file, a.weight, &warnings, a.max_n);
  } else {
    if (a.weight != 12)
      throw validation_error("built-in coefficients exist only for weight 12; "
                             "supply --coeff-file for other weights");
    table = build_table(a.weight, a.max_n);
  }
  save_table(table, a.out);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "kappa=" << table.spec.kappa << " N=" << table.size()
            << " checksum=" << table.checksum() << "\n";
  std::cout << "diagnostic max c_n/n^0.1 = " << fmt15(max_c_over_n01(table, table.size()))
            << "\n";
  std::cout << "diagnostic mean b_n^2 = " << fmt15(b_mean_square(table, table.size())) << "\n";
  json params{{"max_n", a.max_n},
              {"weight", a.weight},
              {"coeff_file", a.coeff_file},
              {"out", a.out}};
  write_manifest_sidecar(a.out, make_manifest("coeffs", params, table.checksum(), timer.seconds()));
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  double t = 0.0;
  double sigma = 0.0;
  std::string method;
  double x = 0.0;           // 0 means unset
  double split_ratio = 0.0; // 0 means unset
  double b = 2.0;
  std::string table;
  bool as_json = false;
};

int run_eval(const EvalArgs& a) {
  Timer timer;
  CoefficientTable table = load_required_table(a.table);
  Calibration cal = load_or_compute_calibration(table, resolve_table_path(a.table));
  if (a.x > 0.0 && a.split_ratio > 0.0)
    throw validation_error("--x and --split-ratio are mutually exclusive");

  cplx s(a.sigma, a.t);
  json out;
  out["method"] = a.method;
  out["sigma"] = a.sigma;
  out["t"] = a.t;
  std::ostringstream text;

  if (a.method == "direct") {
    if (a.sigma < 0.7)
      throw validation_error("method/range mismatch: direct requires sigma >= 0.7");
    ZDirectResult r = z_direct(s, table, table.size(), cal.C_hat, cal.K_hat);
    out["value"] = complex_json(r.value);
    out["error_budget"] = r.tail_bound;
    text << "value = " << fmt15(r.value.real()) << " + " << fmt15(r.value.imag()) << "i\n"
         << "error_budget = " << fmt15(r.tail_bound) << "\n";
  } else if (a.method == "sharp") {
    if (a.sigma < 0.0 || a.sigma > 1.0)
      throw validation_error("method/range mismatch: sharp requires 0 <= sigma <= 1");
    double tau = tau_of_t(a.t, table.spec.kappa);
    AfeConfig cfg;
    if (a.x > 0.0) {
      cfg = make_symmetric_config(a.t, table.spec.kappa, cal.C1, cal.C2);
      cfg.x = a.x;
      cfg.y = tau / a.x;
      cfg.h = choose_h(a.t, std::max(cfg.x, 1.0));
    } else if (a.split_ratio > 0.0) {
      cfg = make_split_config(a.t, a.split_ratio, table.spec.kappa, cal.C1, cal.C2);
    } else {
      cfg = make_symmetric_config(a.t, table.spec.kappa, cal.C1, cal.C2);
    }
    AfeBreakdown r =
        (a.sigma < 0.5) ? reflect_afe(s, cfg, table) : z_afe(s, cfg, table);
    out["x"] = cfg.x;
    out["y"] = cfg.y;
    out["h"] = cfg.h;
    out["C1"] = cfg.C1;
    out["C2"] = cfg.C2;
    out["sum_x"] = complex_json(r.sum_x);
    out["sum_y"] = complex_json(r.sum_y);
    out["corr_x"] = complex_json(r.corr_x);
    out["corr_y"] = complex_json(r.corr_y);
    out["value"] = complex_json(r.value);
    out["error_budget"] = r.error_budget;
    text << "x = " << fmt15(cfg.x) << "  y = " << fmt15(cfg.y) << "  h = " << fmt15(cfg.h)
         << "\n"
         << "sum_x  = " << fmt15(r.sum_x.real()) << " + " << fmt15(r.sum_x.imag()) << "i\n"
         << "sum_y  = " << fmt15(r.sum_y.real()) << " + " << fmt15(r.sum_y.imag()) << "i\n"
         << "corr_x = " << fmt15(r.corr_x.real()) << " + " << fmt15(r.corr_x.imag()) << "i\n"
         << "corr_y = " << fmt15(r.corr_y.real()) << " + " << fmt15(r.corr_y.imag()) << "i\n"
         << "value  = " << fmt15(r.value.real()) << " + " << fmt15(r.value.imag()) << "i\n"
         << "error_budget = " << fmt15(r.error_budget) << "\n";
  } else if (a.method == "smoothed") {
    if (a.sigma != 0.5)
      throw validation_error("method/range mismatch: smoothed is defined on sigma = 0.5 only");
    AfeConfig cfg = make_symmetric_config(a.t, table.spec.kappa, cal.C1, cal.C2);
    if (a.x > 0.0) {
      double tau = tau_of_t(a.t, table.spec.kappa);
      cfg.x = a.x;
      cfg.y = tau / a.x;
      cfg.h = choose_h(a.t, std::max(cfg.x, 1.0));
    } else if (a.split_ratio > 0.0) {
      cfg = make_split_config(a.t, a.split_ratio, table.spec.kappa, cal.C1, cal.C2);
    }
    SmoothWeight w{a.b};
    cplx v = z_afe_smoothed(a.t, cfg.x, cfg.y, w, table);
    // The printed budget is the sharp-AFE budget at the same split; the
    // smoothed and sharp evaluations agree within it.
    double budget = z_afe(s, cfg, table).error_budget;
    out["x"] = cfg.x;
    out["y"] = cfg.y;
    out["b"] = a.b;
    out["value"] = complex_json(v);
    out["error_budget"] = budget;
    text << "x = " << fmt15(cfg.x) << "  y = " << fmt15(cfg.y) << "  b = " << fmt15(a.b) << "\n"
         << "value = " << fmt15(v.real()) << " + " << fmt15(v.imag()) << "i\n"
         << "error_budget = " << fmt15(budget) << "\n";
  } else {
    throw validation_error("unknown method '" + a.method + "' (sharp|smoothed|direct)");
  }

  json params{{"t", a.t},         {"sigma", a.sigma}, {"method", a.method},
              {"x", a.x},         {"split_ratio", a.split_ratio},
              {"b", a.b},         {"table", resolve_table_path(a.table)},
              {"json", a.as_json}};
  json manifest = make_manifest("eval", params, table.checksum(), timer.seconds());
  if (a.as_json) {
    out["manifest"] = manifest;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << text.str();
    std::cout << "manifest: command=eval version=" << kVersion
              << " table_checksum=" << table.checksum()
              << " wall_time_s=" << fmt15(timer.seconds()) << "\n";
  }
  return 0;
}

// ---- hardy -----------------------------------------------------------------

struct HardyArgs {
  double t_min = 0.0;
  double t_max = 0.0;
  double step = 0.05;
  bool scan_zeros = false;
  std::string table;
  std::string out;
};

int run_hardy(const HardyArgs& a) {
  Timer timer;
  if (a.t_min < 3.0) throw validation_error("hardy: t-min must be >= 3");
  if (!(a.t_min < a.t_max)) throw validation_error("hardy: t-min must be < t-max");
  if (!(a.step > 0.0)) throw validation_error("hardy: step must be positive");
  CoefficientTable table = load_required_table(a.table);
  Calibration cal = load_or_compute_calibration(table, resolve_table_path(a.table));

  double zero_step = a.step;
  if (a.scan_zeros && a.step > 0.05) {
    std::cerr << "warning: step " << fmt15(a.step)
              << " is too coarse for zero scanning; the scan uses 0.05\n";
    zero_step = 0.05;
  }

  std::ostringstream csv;
  csv << "t,z,im_residue,budget\n";
  for (double t = a.t_min; t <= a.t_max + 1e-12; t += a.step) {
    HardyResult r = hardy_z(t, table, cal.C1);
    csv << fmt15(t) << "," << fmt15(r.value) << "," << fmt15(r.im_residue) << ","
        << fmt15(r.budget) << "\n";
  }
  if (a.scan_zeros) {
    for (const ZeroBracket& z : zero_scan(table, a.t_min, a.t_max, zero_step, cal.C1))
      csv << "# zero-bracket " << fmt15(z.lo) << " " << fmt15(z.hi) << "\n";
  }
  write_text_file(a.out, csv.str());

  json params{{"t_min", a.t_min}, {"t_max", a.t_max},
              {"step", a.step},   {"scan_zeros", a.scan_zeros},
              {"table", resolve_table_path(a.table)}, {"out", a.out}};
  write_manifest_sidecar(a.out, make_manifest("hardy", params, table.checksum(), timer.seconds()));
  return 0;
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::string kind;
  std::int64_t x_max = 0;  // delta; 0 = table size capped at 10^6
  int points = 160;        // delta grid size
  std::vector<double> x_grid = {100.0, 200.0, 400.0};  // meanvalue
  double dt = 0.05;
  double t_cap = 500.0;
  std::string table;
  std::string out;
};

int run_experiment(const ExperimentArgs& a) {
  Timer timer;
  CoefficientTable table = load_required_table(a.table);
  Calibration cal = load_or_compute_calibration(table, resolve_table_path(a.table));
  ExperimentReport rep;
  if (a.kind == "delta") {
    std::int64_t x_max = a.x_max > 0 ? a.x_max : std::min<std::int64_t>(table.size(), 1000000);
    if (x_max > table.size()) throw std::length_error("experiment delta: grid exceeds the table");
    if (a.points < 2) throw validation_error("experiment delta: need at least 2 grid points");
    std::vector<std::int64_t> grid;
    double lmax = std::log(static_cast<double>(x_max));
    for (int k = 0; k < a.points; ++k) {
      auto x = static_cast<std::int64_t>(
          std::llround(std::exp(lmax * static_cast<double>(k) / (a.points - 1))));
      x = std::max<std::int64_t>(1, std::min(x, x_max));
      if (grid.empty() || x > grid.back()) grid.push_back(x);
    }
    rep = delta_scan(table, grid, cal.C_hat);
  } else if (a.kind == "meanvalue") {
    rep = mean_value_scan(table, a.x_grid, a.dt, cal.C1, a.t_cap);
  } else {
    throw validation_error("unknown experiment '" + a.kind + "' (delta|meanvalue)");
  }
  std::ostringstream csv;
  write_report_csv(rep, csv);
  write_text_file(a.out, csv.str());

  json params{{"kind", a.kind}, {"x_max", a.x_max},   {"points", a.points},
              {"x_grid", a.x_grid}, {"dt", a.dt},     {"t_cap", a.t_cap},
              {"table", resolve_table_path(a.table)}, {"out", a.out}};
  write_manifest_sidecar(a.out,
                         make_manifest("experiment", params, table.checksum(), timer.seconds()));
  return 0;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  double sigma = 0.9;
  std::vector<double> t_grid = {10, 15, 20, 25, 30};
  bool free_constants = false;
  std::string table;
  std::string out;
};

int run_calibrate(const CalibrateArgs& a) {
  Timer timer;
  CoefficientTable table = load_required_table(a.table);
  Calibration c = calibrate_constants(table, a.t_grid, a.sigma, a.free_constants);
  json j{{"C_hat", c.C_hat},
         {"K_hat", c.K_hat},
         {"C1", c.C1},
         {"C2", c.C2},
         {"residual_zero", c.residual_zero},
         {"residual_fit", c.residual_fit},
         {"fallback", c.fallback},
         {"budget_inflation", c.budget_inflation},
         {"sigma_cal", a.sigma},
         {"t_grid", a.t_grid}};
  write_text_file(a.out, j.dump(2) + "\n");
  // Refresh the sidecar cache so subsequent eval runs use these constants.
  write_text_file(resolve_table_path(a.table) + ".calib.json", j.dump(2) + "\n");
  if (c.fallback)
    std::cerr << "warning: calibration fit did not reduce the residual 2x; "
                 "constants fall back to 0 and the unexplained residual "
              << fmt15(c.budget_inflation) << " should be added to budgets\n";
  std::cout << "C_hat=" << fmt15(c.C_hat) << " K_hat=" << fmt15(c.K_hat)
            << " C1=" << fmt15(c.C1) << " C2=" << fmt15(c.C2) << "\n";

  json params{{"sigma", a.sigma},
              {"t_grid", a.t_grid},
              {"free_constants", a.free_constants},
              {"table", resolve_table_path(a.table)},
              {"out", a.out}};
  write_manifest_sidecar(a.out,
                         make_manifest("calibrate", params, table.checksum(), timer.seconds()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"rszeta: Rankin-Selberg zeta evaluation in the critical strip"};
  app.require_subcommand(1);

  CoeffsArgs ca;
  CLI::App* coeffs = app.add_subcommand("coeffs", "build or ingest a coefficient table");
  coeffs->add_option("--max-n", ca.max_n, "table length N")->required()->check(CLI::PositiveNumber);
  coeffs->add_option("--weight", ca.weight, "eigenform weight kappa (even, >= 12)")
      ->check(CLI::Range(12, 100));
  coeffs->add_option("--coeff-file", ca.coeff_file, "external 'n a(n)' coefficient file");
  coeffs->add_option("--out", ca.out, "cache file to write")->required();

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "evaluate Z(s) at one point");
  eval->add_option("--t", ea.t, "imaginary part")->required();
  eval->add_option("--sigma", ea.sigma, "real part")->required();
  eval->add_option("--method", ea.method, "sharp|smoothed|direct")->required();
  eval->add_option("--x", ea.x, "first split length (y = tau/x)");
  eval->add_option("--split-ratio", ea.split_ratio, "x = r*y under x*y = tau");
  eval->add_option("--b", ea.b, "smoothed cutoff edge (default 2)");
  eval->add_option("--table", ea.table, "coefficient cache file");
  eval->add_flag("--json", ea.as_json, "emit JSON");

  HardyArgs ha;
  CLI::App* hardy = app.add_subcommand("hardy", "tabulate the Hardy-type function");
  hardy->add_option("--t-min", ha.t_min, "grid start (>= 3)")->required();
  hardy->add_option("--t-max", ha.t_max, "grid end")->required();
  hardy->add_option("--step", ha.step, "grid step (default 0.05)");
  hardy->add_flag("--scan-zeros", ha.scan_zeros, "append bisection-refined zero brackets");
  hardy->add_option("--table", ha.table, "coefficient cache file");
  hardy->add_option("--out", ha.out, "CSV output file")->required();

  ExperimentArgs xa;
  CLI::App* experiment = app.add_subcommand("experiment", "run a report-producing study");
  experiment->add_option("kind", xa.kind, "delta|meanvalue")->required();
  experiment->add_option("--x-max", xa.x_max, "delta: largest x");
  experiment->add_option("--points", xa.points, "delta: number of log-spaced grid points");
  experiment->add_option("--x-grid", xa.x_grid, "meanvalue: X values")->delimiter(',');
  experiment->add_option("--dt", xa.dt, "meanvalue: quadrature step (<= 0.05)");
  experiment->add_option("--t-cap", xa.t_cap, "meanvalue: maximum allowed X");
  experiment->add_option("--table", xa.table, "coefficient cache file");
  experiment->add_option("--out", xa.out, "CSV output file")->required();

  CalibrateArgs ra;
  CLI::App* calibrate = app.add_subcommand("calibrate", "fit C_hat, K_hat, C1=C2");
  calibrate->add_option("--sigma", ra.sigma, "calibration line (default 0.9)");
  calibrate->add_option("--t-grid", ra.t_grid, "fit points")->delimiter(',');
  calibrate->add_flag("--free-constants", ra.free_constants, "fit C1 and C2 independently");
  calibrate->add_option("--table", ra.table, "coefficient cache file");
  calibrate->add_option("--out", ra.out, "JSON output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are validation failures
  }

  try {
    if (*coeffs) return run_coeffs(ca);
    if (*eval) return run_eval(ea);
    if (*hardy) return run_hardy(ha);
    if (*experiment) return run_experiment(xa);
    if (*calibrate) return run_calibrate(ra);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
