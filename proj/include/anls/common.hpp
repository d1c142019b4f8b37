#pragma once
// Shared aliases, error taxonomy and small numeric helpers.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace anls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr double kTwoPi = 2.0 * kPi;

// Symbol of -d^2/dx^2 on the unit circle with basis e^{2 pi i k x}.
inline double minus_laplace_symbol(int k) {
  return 4.0 * kPi * kPi * static_cast<double>(k) * static_cast<double>(k);
}

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure carrying the last residual seen by an iterative routine.
struct NumericError : std::runtime_error {
  double residual;
  explicit NumericError(const std::string& what, double resid = 0.0)
      : std::runtime_error(what), residual(resid) {}
};

inline int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace anls
