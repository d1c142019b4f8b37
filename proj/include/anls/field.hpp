#pragma once
// Periodic fields and distributions on the unit circle, stored as complex
// amplitudes on integer frequencies k in [-M, M] with basis e^{2 pi i k x}.
// This is the universal carrier for states, potentials, antiderivative
// fields and eigenfields.
//
// Conventions fixed here and used everywhere:
//   value(x)   = sum_k c_k e^{2 pi i k x}
//   <u, v>     = int u conj(v) = sum_k c_k conj(d_k)
//   d/dx       : c_k -> 2 pi i k c_k
//   -d^2/dx^2  : c_k -> 4 pi^2 k^2 c_k
// Grid quadrature is the rectangle rule on x_j = j/n, spectrally accurate for
// band-limited integrands; pairwise products use grids of size
// >= 2(2M+1)+1 rounded to a power of two, m-fold nonlinearities >= m(2M+1)+1.

#include <span>
#include <vector>

#include "anls/common.hpp"

namespace anls {

class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(int max_freq, bool reality = false);

  static FourierField zero(int max_freq, bool reality = false);

  int max_freq() const { return max_freq_; }
  int size() const { return 2 * max_freq_ + 1; }
  bool reality() const { return reality_; }
  void set_reality(bool r) { reality_ = r; }

  // Amplitude at frequency k (unchecked fast path and checked accessor).
  cplx& operator()(int k) { return coeffs_[k + max_freq_]; }
  const cplx& operator()(int k) const { return coeffs_[k + max_freq_]; }
  cplx& at(int k);
  const cplx& at(int k) const;

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }

  double l2_norm() const;
  double linf_coeff() const;
  cplx inner(const FourierField& other) const;

  FourierField derivative() const;
  // d^2/dx^2 (symbol -4 pi^2 k^2).
  FourierField laplacian() const;
  FourierField conj() const;
  // Zero-pad or truncate to a new band.
  FourierField band_limited(int new_max_freq) const;

  // Largest relative violation of c(-k) = conj(c(k)), scaled by the largest
  // amplitude. Zero field reports 0.
  double reality_defect() const;
  bool check_reality(double rel_tol = 1e-12) const { return reality_defect() <= rel_tol; }

  // Sampled values on the uniform grid x_j = j/n, n >= 2M+1.
  std::vector<cplx> to_grid(int n) const;
  // Exact inverse of to_grid for band-limited data (n >= 2M+1).
  static FourierField from_grid(const std::vector<cplx>& values, int max_freq,
                                bool reality = false);
  cplx value_at(double x) const;

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(cplx a);
  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(cplx a, FourierField f) { return f *= a; }

 private:
  int max_freq_ = 0;
  bool reality_ = false;
  std::vector<cplx> coeffs_;
};

// Grid size policy: fold = 2 for pairwise products and L^p quadrature,
// fold = m for m-fold nonlinearities. Power of two for the transforms.
int dealias_grid_size(int max_freq, int fold = 2);

// L^p norm by rectangle quadrature on the dealiased grid; p = infinity takes
// the grid maximum (a lower bound of the sup, adequate for band-limited
// fields). grid_n = 0 picks the policy size.
double lp_norm(const FourierField& u, double p, int grid_n = 0);
double linf_grid_norm(const FourierField& u, int grid_n = 0);

// Sobolev norm (sum_k (1 + 4 pi^2 k^2)^sigma |c_k|^2)^{1/2}.
double sobolev_norm(const FourierField& u, double sigma);

// Dealiased pointwise product; output band defaults to the exact product band
// M_u + M_v (fully resolved).
FourierField grid_product(const FourierField& u, const FourierField& v, int out_max_freq = -1);

}  // namespace anls
