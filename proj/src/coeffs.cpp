#include "rszeta/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace rszeta {

namespace mp = boost::multiprecision;
using int256 = mp::int256_t;

namespace {

// Generalized pentagonal exponents j = k(3k-1)/2, k = 1,-1,2,-2,..., with the
// sign (-1)^k of the Euler product prod (1-x^k) = sum_k (-1)^k x^{j(k)}.
std::vector<std::pair<std::int64_t, int>> pentagonal_terms(std::int64_t limit) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t k = 1;; ++k) {
    std::int64_t g1 = k * (3 * k - 1) / 2;
    std::int64_t g2 = k * (3 * k + 1) / 2;
    int sg = (k % 2 == 0) ? 1 : -1;
    if (g1 <= limit) out.emplace_back(g1, sg);
    if (g2 <= limit) out.emplace_back(g2, sg);
    if (g1 > limit && g2 > limit) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Recurrence n*P_n = sum sign_j (25j - n) P_{n-j} over pentagonal j <= n.
template <typename Int>
std::vector<bigint> build_tau_impl(std::int64_t N) {
  std::vector<Int> P(static_cast<std::size_t>(N));
  P[0] = 1;
  auto pents = pentagonal_terms(N - 1);
  for (std::int64_t n = 1; n < N; ++n) {
    Int acc = 0;
    for (const auto& [j, sg] : pents) {
      if (j > n) break;
      std::int64_t w = sg * (25 * j - n);
      acc += P[static_cast<std::size_t>(n - j)] * w;
    }
    if (acc % n != 0) throw consistency_error("tau recurrence: non-exact division");
    P[static_cast<std::size_t>(n)] = acc / n;
  }
  std::vector<bigint> tau(static_cast<std::size_t>(N + 1));
  tau[0] = 0;
  for (std::int64_t n = 1; n <= N; ++n) tau[n] = bigint(P[static_cast<std::size_t>(n - 1)]);
  return tau;
}

bigint ipow(bigint base, int e) {
  bigint r = 1;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

double rational_to_double(const bigint& num, std::int64_t n, int kappa) {
  // Two roundings (bigint->double, then the divide); both are sub-ulp, so the
  // result keeps ~15 significant digits even at n = 10^6, kappa = 12.
  return num.convert_to<double>() / std::pow(static_cast<double>(n), kappa - 1);
}

void materialize_doubles(CoefficientTable& t) {
  std::int64_t N = t.spec.n_max;
  t.c_d.assign(static_cast<std::size_t>(N + 1), 0.0);
  t.b_d.assign(static_cast<std::size_t>(N + 1), 0.0);
  for (std::int64_t n = 1; n <= N; ++n) {
    t.c_d[n] = rational_to_double(t.c_num[n], n, t.spec.kappa);
    t.b_d[n] = rational_to_double(t.b_num[n], n, t.spec.kappa);
  }
}

}  // namespace

std::vector<bigint> build_tau(std::int64_t N) {
  if (N < 1) throw validation_error("build_tau: N must be >= 1");
  // The 256-bit fast path is proven safe for N <= 2*10^6 (see header); beyond
  // that, escalate to arbitrary width rather than risk silent wraparound.
  if (N <= 2'000'000) return build_tau_impl<int256>(N);
  return build_tau_impl<bigint>(N);
}

std::vector<bigint> build_c_num(const std::vector<bigint>& a, int kappa, std::int64_t N) {
  if (kappa < 2) throw validation_error("build_c_num: invalid weight (kappa < 2)");
  if (static_cast<std::int64_t>(a.size()) < N + 1)
    throw std::length_error("build_c_num: coefficient array shorter than N");
  std::vector<bigint> c(static_cast<std::size_t>(N + 1));
  for (std::int64_t m = 1; m * m <= N; ++m) {
    bigint w = ipow(bigint(m), 2 * (kappa - 1));
    for (std::int64_t q = 1; q * m * m <= N; ++q) {
      c[static_cast<std::size_t>(m * m * q)] += w * a[static_cast<std::size_t>(q)] *
                                                a[static_cast<std::size_t>(q)];
    }
  }
  return c;
}

std::vector<bigint> build_b_num(const std::vector<bigint>& c_num, int kappa, std::int64_t N) {
  if (static_cast<std::int64_t>(c_num.size()) < N + 1)
    throw std::length_error("build_b_num: c array shorter than N");
  auto mu = mobius_sieve(N);
  std::vector<bigint> b(static_cast<std::size_t>(N + 1));
  for (std::int64_t d = 1; d <= N; ++d) {
    if (mu[static_cast<std::size_t>(d)] == 0) continue;
    bigint D = ipow(bigint(d), kappa - 1) * mu[static_cast<std::size_t>(d)];
    for (std::int64_t q = 1; q * d <= N; ++q) {
      b[static_cast<std::size_t>(d * q)] += D * c_num[static_cast<std::size_t>(q)];
    }
  }
  return b;
}

std::vector<std::int8_t> mobius_sieve(std::int64_t N) {
  if (N < 1) throw validation_error("mobius_sieve: N must be >= 1");
  std::vector<std::int8_t> mu(static_cast<std::size_t>(N + 1), 0);
  std::vector<std::int32_t> primes;
  std::vector<bool> comp(static_cast<std::size_t>(N + 1), false);
  mu[1] = 1;
  for (std::int64_t i = 2; i <= N; ++i) {
    if (!comp[static_cast<std::size_t>(i)]) {
      primes.push_back(static_cast<std::int32_t>(i));
      mu[static_cast<std::size_t>(i)] = -1;
    }
    for (std::int32_t p : primes) {
      if (i * p > N) break;
      comp[static_cast<std::size_t>(i * p)] = true;
      if (i % p == 0) {
        mu[static_cast<std::size_t>(i * p)] = 0;
        break;
      }
      mu[static_cast<std::size_t>(i * p)] = -mu[static_cast<std::size_t>(i)];
    }
  }
  return mu;
}

std::vector<std::int32_t> divisor_count_sieve(std::int64_t N) {
  if (N < 1) throw validation_error("divisor_count_sieve: N must be >= 1");
  std::vector<std::int32_t> d(static_cast<std::size_t>(N + 1), 0);
  for (std::int64_t i = 1; i <= N; ++i)
    for (std::int64_t j = i; j <= N; j += i) ++d[static_cast<std::size_t>(j)];
  return d;
}

std::uint64_t CoefficientTable::checksum() const {
  const std::uint64_t p = (std::uint64_t(1) << 61) - 1;
  bigint s = 0;
  for (std::int64_t n = 1; n <= spec.n_max; ++n) s += a[static_cast<std::size_t>(n)];
  bigint r = s % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint64_t>();
}

CoefficientTable build_table(int kappa, std::int64_t N) {
  if (kappa != 12)
    throw validation_error("build_table: built-in coefficients exist only for weight 12");
  if (N < 1) throw validation_error("build_table: N must be >= 1");
  return table_from_a(kappa, build_tau(N));
}

CoefficientTable table_from_a(int kappa, std::vector<bigint> a) {
  if (kappa < 12 || kappa % 2 != 0)
    throw validation_error("table_from_a: weight must be even and >= 12");
  std::int64_t N = static_cast<std::int64_t>(a.size()) - 1;
  if (N < 1) throw validation_error("table_from_a: empty coefficient array");
  if (a[1] != 1) throw validation_error("table_from_a: a(1) must equal 1");
  CoefficientTable t;
  t.spec = EigenformSpec{kappa, kappa == 12, N};
  t.a = std::move(a);
  t.c_num = build_c_num(t.a, kappa, N);
  t.b_num = build_b_num(t.c_num, kappa, N);
  materialize_doubles(t);
  return t;
}

CoefficientTable ingest_coefficients(const std::string& path, int kappa,
                                     std::vector<std::string>* warnings, std::int64_t max_n) {
  std::ifstream in(path);
  if (!in) throw io_error("ingest_coefficients: cannot open " + path);
  std::vector<bigint> a;
  a.emplace_back(0);  // index 0 unused
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::int64_t n;
    std::string a_str;
    if (!(ls >> n >> a_str))
      throw validation_error("ingest_coefficients: parse error at line " + std::to_string(lineno));
    if (n != static_cast<std::int64_t>(a.size()))
      throw validation_error("ingest_coefficients: non-contiguous index at line " +
                             std::to_string(lineno) + " (expected n=" + std::to_string(a.size()) +
                             ")");
    try {
      a.emplace_back(a_str);
    } catch (const std::exception&) {
      throw validation_error("ingest_coefficients: bad integer at line " + std::to_string(lineno));
    }
    if (max_n > 0 && static_cast<std::int64_t>(a.size()) - 1 == max_n) break;
  }
  std::int64_t N = static_cast<std::int64_t>(a.size()) - 1;
  if (N < 1) throw validation_error("ingest_coefficients: no coefficient rows in " + path);
  if (max_n > 0 && N < max_n)
    throw validation_error("ingest_coefficients: file provides only " + std::to_string(N) +
                           " rows, " + std::to_string(max_n) + " requested");
  if (a[1] != 1) throw validation_error("ingest_coefficients: a(1) must equal 1");
  if (warnings) {
    // Deligne bound as a squared integer comparison: a(n)^2 <= n^{kappa-1} d(n)^2.
    auto d = divisor_count_sieve(N);
    for (std::int64_t n = 1; n <= N; ++n) {
      bigint lhs = a[static_cast<std::size_t>(n)] * a[static_cast<std::size_t>(n)];
      bigint rhs = ipow(bigint(n), kappa - 1) * d[static_cast<std::size_t>(n)] *
                   d[static_cast<std::size_t>(n)];
      if (lhs > rhs)
        warnings->push_back("coefficient bound exceeded at n=" + std::to_string(n) +
                            " (|a(n)| > n^{(kappa-1)/2} d(n))");
    }
  }
  return table_from_a(kappa, std::move(a));
}

namespace {

std::string reduced_fraction(const bigint& num, const bigint& den) {
  if (num == 0) return "0/1";
  bigint g = mp::gcd(num < 0 ? bigint(-num) : num, den);
  bigint n = num / g, d = den / g;
  return n.str() + "/" + d.str();
}

// Parse "num/den" and rescale to the canonical denominator n^{kappa-1}.
bigint parse_scaled(const std::string& frac, std::int64_t n, int kappa, std::int64_t lineno) {
  auto slash = frac.find('/');
  if (slash == std::string::npos)
    throw validation_error("load_table: malformed fraction at line " + std::to_string(lineno));
  bigint num, den;
  try {
    num = bigint(frac.substr(0, slash));
    den = bigint(frac.substr(slash + 1));
  } catch (const std::exception&) {
    throw validation_error("load_table: bad fraction at line " + std::to_string(lineno));
  }
  if (den <= 0) throw validation_error("load_table: nonpositive denominator at line " +
                                       std::to_string(lineno));
  bigint target = ipow(bigint(n), kappa - 1);
  if (target % den != 0)
    throw validation_error("load_table: denominator does not divide n^{kappa-1} at line " +
                           std::to_string(lineno));
  return num * (target / den);
}

}  // namespace

void save_table(const CoefficientTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("save_table: cannot open " + path + " for writing");
  out << "RSZETA-COEFS v1 kappa=" << t.spec.kappa << " N=" << t.spec.n_max << "\n";
  for (std::int64_t n = 1; n <= t.spec.n_max; ++n) {
    bigint den = ipow(bigint(n), t.spec.kappa - 1);
    out << n << " " << t.a[static_cast<std::size_t>(n)].str() << " "
        << reduced_fraction(t.c_num[static_cast<std::size_t>(n)], den) << " "
        << reduced_fraction(t.b_num[static_cast<std::size_t>(n)], den) << "\n";
  }
  out << "CHECKSUM " << t.checksum() << "\n";
  if (!out) throw io_error("save_table: write failure on " + path);
}

CoefficientTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("load_table: cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || header.empty())
    throw validation_error("load_table: empty or unreadable file (format error)");
  int version = 0, kappa = 0;
  long long N = 0;
  if (std::sscanf(header.c_str(), "RSZETA-COEFS v%d kappa=%d N=%lld", &version, &kappa, &N) != 3)
    throw validation_error("load_table: bad header (format error)");
  if (version != 1) throw validation_error("load_table: version mismatch (expected v1)");
  if (N < 1 || kappa < 2) throw validation_error("load_table: bad header fields");

  CoefficientTable t;
  t.spec = EigenformSpec{kappa, kappa == 12, N};
  t.a.assign(static_cast<std::size_t>(N + 1), bigint(0));
  t.c_num.assign(static_cast<std::size_t>(N + 1), bigint(0));
  t.b_num.assign(static_cast<std::size_t>(N + 1), bigint(0));
  std::string line;
  std::int64_t lineno = 1;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (!std::getline(in, line))
      throw validation_error("load_table: truncated file (checksum error)");
    ++lineno;
    std::istringstream ls(line);
    std::int64_t idx;
    std::string a_str, c_str, b_str;
    if (!(ls >> idx >> a_str >> c_str >> b_str) || idx != n)
      throw validation_error("load_table: malformed row at line " + std::to_string(lineno));
    try {
      t.a[static_cast<std::size_t>(n)] = bigint(a_str);
    } catch (const std::exception&) {
      throw validation_error("load_table: bad integer at line " + std::to_string(lineno));
    }
    t.c_num[static_cast<std::size_t>(n)] = parse_scaled(c_str, n, kappa, lineno);
    t.b_num[static_cast<std::size_t>(n)] = parse_scaled(b_str, n, kappa, lineno);
  }
  if (!std::getline(in, line))
    throw validation_error("load_table: missing checksum line (checksum error)");
  unsigned long long stored = 0;
  if (std::sscanf(line.c_str(), "CHECKSUM %llu", &stored) != 1)
    throw validation_error("load_table: malformed checksum line (checksum error)");
  if (stored != t.checksum())
    throw validation_error("load_table: checksum mismatch");
  materialize_doubles(t);
  return t;
}

void export_csv(const CoefficientTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("export_csv: cannot open " + path + " for writing");
  out << "RSZETA-COEFS v1 kappa=" << t.spec.kappa << " N=" << t.spec.n_max << "\n";
  for (std::int64_t n = 1; n <= t.spec.n_max; ++n) {
    bigint den = ipow(bigint(n), t.spec.kappa - 1);
    out << n << "," << t.a[static_cast<std::size_t>(n)].str() << ","
        << reduced_fraction(t.c_num[static_cast<std::size_t>(n)], den) << ","
        << reduced_fraction(t.b_num[static_cast<std::size_t>(n)], den) << "\n";
  }
  if (!out) throw io_error("export_csv: write failure on " + path);
}

void export_a(const CoefficientTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("export_a: cannot open " + path + " for writing");
  for (std::int64_t n = 1; n <= t.spec.n_max; ++n)
    out << n << " " << t.a[static_cast<std::size_t>(n)].str() << "\n";
  if (!out) throw io_error("export_a: write failure on " + path);
}

bool tables_equal(const CoefficientTable& x, const CoefficientTable& y) {
  // Both representations are normalized to denominator n^{kappa-1}, so exact
  // rational equality reduces to equality of the scaled integers.
  return x.spec.kappa == y.spec.kappa && x.spec.n_max == y.spec.n_max && x.a == y.a &&
         x.c_num == y.c_num && x.b_num == y.b_num;
}

double c_hat_estimate(const CoefficientTable& t, std::int64_t N) {
  if (N < 16 || N > t.size()) throw validation_error("c_hat_estimate: window out of range");
  std::vector<std::int64_t> marks = {N / 16, N / 8, N / 4, N / 2, N};
  double sum = 0.0, comp = 0.0, acc = 0.0;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= N && next < marks.size(); ++n) {
    double yv = t.c_d[static_cast<std::size_t>(n)] - comp;  // Kahan
    double tv = sum + yv;
    comp = (tv - sum) - yv;
    sum = tv;
    if (n == marks[next]) {
      acc += sum / static_cast<double>(n);
      ++next;
    }
  }
  return acc / static_cast<double>(marks.size());
}

DeltaStats delta_statistics(const CoefficientTable& t, double C_hat, std::int64_t x_max,
                            const std::vector<std::int64_t>& checkpoints) {
  if (x_max < 1 || x_max > t.size())
    throw std::length_error("delta_statistics: x_max exceeds the table");
  DeltaStats st;
  st.runmax_at.assign(checkpoints.size(), 0.0);
  double sum = 0.0, comp = 0.0;
  double best = -1.0;
  for (std::int64_t n = 1; n <= x_max; ++n) {
    double yv = t.c_d[static_cast<std::size_t>(n)] - comp;
    double tv = sum + yv;
    comp = (tv - sum) - yv;
    sum = tv;
    double x = static_cast<double>(n);
    double ratio = std::abs(sum - C_hat * x) / std::pow(x, 0.6);
    if (ratio > best) {
      best = ratio;
      st.argmax = n;
    }
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
      if (n == checkpoints[i]) st.runmax_at[i] = best;
  }
  st.k_hat = best;
  return st;
}

double max_c_over_n01(const CoefficientTable& t, std::int64_t N) {
  if (N < 1 || N > t.size()) throw std::length_error("max_c_over_n01: N exceeds the table");
  double best = 0.0;
  for (std::int64_t n = 1; n <= N; ++n)
    best = std::max(best, t.c_d[static_cast<std::size_t>(n)] /
                              std::pow(static_cast<double>(n), 0.1));
  return best;
}

double b_mean_square(const CoefficientTable& t, std::int64_t N) {
  if (N < 1 || N > t.size()) throw std::length_error("b_mean_square: N exceeds the table");
  double sum = 0.0, comp = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    double v = t.b_d[static_cast<std::size_t>(n)];
    double yv = v * v - comp;
    double tv = sum + yv;
    comp = (tv - sum) - yv;
    sum = tv;
  }
  return sum / static_cast<double>(N);
}

}  // namespace rszeta
