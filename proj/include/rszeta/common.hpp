#pragma once
// Shared plumbing: error taxonomy, version tag, numeric printing helper.

#include <complex>
#include <stdexcept>
#include <string>

namespace rszeta {

inline constexpr const char* kVersion = "1.0.0";

using cplx = std::complex<double>;

// Bad parameters, out-of-range inputs, malformed or inconsistent files.
// The CLI maps these to exit code 2.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem failures (missing file, failed write). CLI exit code 1.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An analytic identity that is asserted at runtime did not hold numerically
// (e.g. a quantity that must be real came out complex beyond tolerance).
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "%.15g" with '.' decimal separator, independent of any global locale.
std::string fmt15(double v);

}  // namespace rszeta
