#pragma once
// Arithmetic coefficient machinery for the Rankin-Selberg series.
//
//   a(n)  Fourier coefficients of a weight-kappa Hecke eigenform, a(1) = 1.
//         For kappa = 12 these are the Ramanujan tau values.
//   c_n   = n^{1-kappa} * sum_{m^2 | n} m^{2(kappa-1)} a(n/m^2)^2
//         nonnegative and multiplicative; the Dirichlet coefficients of the
//         convolution series Z(s).
//   b_n   = sum_{d | n} mu(d) c_{n/d}, the Mobius inverse, so that
//         c_n = sum_{d | n} b_d.
//
// Exactness strategy: c_n and b_n are rationals whose denominators divide
// n^{kappa-1}. We store the scaled integers
//
//   c_num[n] = c_n * n^{kappa-1},   b_num[n] = b_n * n^{kappa-1}
//
// so every identity above becomes an integer identity:
//
//   multiplicativity (gcd(m,n)=1):  c_num[mn] == c_num[m] * c_num[n]
//   inversion:   b_num[n] == sum_{d|n} mu(d) d^{kappa-1} c_num[n/d]
//   round trip:  c_num[n] == sum_{d|n} (n/d)^{kappa-1} b_num[d]
//
// Floating-point views (c_d, b_d) are materialized once at construction; the
// two rounding steps (bigint -> double, divide by n^{kappa-1} in double) keep
// about 15 significant digits, comfortably above the 12 required downstream.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rszeta/common.hpp"

namespace rszeta {

using bigint = boost::multiprecision::cpp_int;

struct EigenformSpec {
  int kappa = 12;
  bool builtin = true;  // built-in discriminant form (kappa 12) vs external file
  std::int64_t n_max = 0;
};

// tau(1..N) as exact integers. Internally expands the generating function
// x * prod_k (1 - x^k)^24 through x^N. Let E(x) = prod (1 - x^k) (pentagonal
// sparse series) and G = E^24 = sum P_m x^m. Logarithmic differentiation,
// G'E = 24E'G, gives the recurrence
//
//   n * P_n = sum_{pentagonal j <= n} sign(j) * (25j - n) * P_{n-j},
//
// with tau(n) = P_{n-1}. The division by n is exact and is asserted. All
// arithmetic is signed 256-bit for N <= 2*10^6 (|tau(n)| <= n^{5.5} d(n)
// < 2^126 there and the accumulator stays below 2^163); larger N escalates
// to arbitrary-width integers automatically.
std::vector<bigint> build_tau(std::int64_t N);

// c_num[n] = sum_{m^2|n} m^{2(kappa-1)} a(n/m^2)^2 for n = 1..N (index 0 unused).
std::vector<bigint> build_c_num(const std::vector<bigint>& a, int kappa, std::int64_t N);

// b_num[n] = sum_{d|n} mu(d) d^{kappa-1} c_num[n/d], sieve-style in O(N log N).
std::vector<bigint> build_b_num(const std::vector<bigint>& c_num, int kappa, std::int64_t N);

// mu(1..N) via linear sieve; d(1..N) via divisor-doubling sieve.
std::vector<std::int8_t> mobius_sieve(std::int64_t N);
std::vector<std::int32_t> divisor_count_sieve(std::int64_t N);

struct CoefficientTable {
  EigenformSpec spec;
  std::vector<bigint> a;      // 1-indexed; a[0] unused
  std::vector<bigint> c_num;  // c_n = c_num[n] / n^{kappa-1}
  std::vector<bigint> b_num;  // b_n = b_num[n] / n^{kappa-1}
  std::vector<double> c_d;    // double views
  std::vector<double> b_d;

  std::int64_t size() const { return spec.n_max; }

  // sum of a(n) over the table, reduced mod 2^61 - 1, representative in [0, p).
  std::uint64_t checksum() const;
};

// Built-in discriminant-form table; kappa must be 12.
CoefficientTable build_table(int kappa, std::int64_t N);

// Assemble a table from externally supplied a(n) (already validated).
CoefficientTable table_from_a(int kappa, std::vector<bigint> a);

// Parse a file of lines "n a(n)", 1-indexed and contiguous. a(1) must be 1.
// Violations of |a(n)| <= n^{(kappa-1)/2} d(n) are reported as warnings, not
// rejected (external files are trusted for the eigenform property; only
// structural validation is enforced). If max_n > 0 the file must cover at
// least max_n rows and is truncated to that length.
CoefficientTable ingest_coefficients(const std::string& path, int kappa,
                                     std::vector<std::string>* warnings = nullptr,
                                     std::int64_t max_n = -1);

// Cache format: header "RSZETA-COEFS v1 kappa=<k> N=<N>", then N lines
// "n a_n c_num/c_den b_num/b_den" with reduced fractions, then a trailing
// "CHECKSUM <decimal>" line over the a(n). Lossless round trip.
void save_table(const CoefficientTable& t, const std::string& path);
CoefficientTable load_table(const std::string& path);

// Same columns, comma-separated, no checksum line.
void export_csv(const CoefficientTable& t, const std::string& path);

// "n a(n)" rows consumable by ingest_coefficients.
void export_a(const CoefficientTable& t, const std::string& path);

// Exact equality of kappa, N, a, and the rational values of c and b.
bool tables_equal(const CoefficientTable& x, const CoefficientTable& y);

// Mean of sum_{n<=x} c_n / x over the dyadic marks x = N/16, N/8, N/4, N/2, N.
double c_hat_estimate(const CoefficientTable& t, std::int64_t N);

// Single pass over Delta(x) = sum_{n<=x} c_n - C_hat*x for integer x <= x_max:
// the sup of |Delta(x)|/x^{3/5}, where it is attained, and the running max
// sampled at the requested checkpoints.
struct DeltaStats {
  double k_hat = 0.0;
  std::int64_t argmax = 0;
  std::vector<double> runmax_at;  // parallel to the checkpoints argument
};
DeltaStats delta_statistics(const CoefficientTable& t, double C_hat, std::int64_t x_max,
                            const std::vector<std::int64_t>& checkpoints = {});

// Diagnostics (reported, never asserted): max_{n<=N} c_n / n^{0.1} probes the
// sub-polynomial growth of c_n; mean of b_n^2 probes the log-power mean square.
double max_c_over_n01(const CoefficientTable& t, std::int64_t N);
double b_mean_square(const CoefficientTable& t, std::int64_t N);

}  // namespace rszeta
