#pragma once
// The Hamiltonian -d^2/dx^2 + V as a Fourier-Galerkin spectral problem:
// matrix assembly, the self-adjoint eigendecomposition with validated
// residual/orthonormality invariants, matrix action, and the operator
// Sobolev norms built on the eigenbasis.

#include <span>
#include <vector>

#include "anls/potential.hpp"

namespace anls {

struct GalerkinHamiltonian {
  int max_freq = 0;
  // Column-major (2M+1)^2, A[k+M + (l+M) dim] = 4 pi^2 k^2 [k=l] + V^(k-l).
  std::vector<cplx> matrix;
  Potential potential;

  int dim() const { return 2 * max_freq + 1; }
  const cplx& entry(int k, int l) const {
    return matrix[static_cast<size_t>(k + max_freq) +
                  static_cast<size_t>(l + max_freq) * dim()];
  }
};

// Galerkin compression onto frequencies |k| <= M. Exact when the potential
// carries all differences |k - l| <= 2M, i.e. V band >= 2M; a narrower
// potential is zero-padded with a warning on stderr.
GalerkinHamiltonian assemble(const Potential& v, int max_freq);

FourierField apply_H(const GalerkinHamiltonian& h, const FourierField& u);

// Duality-route evaluation of int V |u|^2: the potential's coefficients
// paired against the dealiased spectrum of |u|^2. Independent of the matrix
// action (convolution there, grid product here).
double potential_pairing(const Potential& v, const FourierField& u);

struct SpectralDecomposition {
  int max_freq = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<cplx> eigenfields;    // column-major (2M+1) x (2M+1), orthonormal
  double ground_gap = 0.0;          // lambda_2 - lambda_1
  double max_residual_rel = 0.0;    // max_n ||A e_n - lambda_n e_n|| / (1+|lambda_n|)
  double gram_defect = 0.0;         // max |E^H E - I|

  int dim() const { return 2 * max_freq + 1; }
  FourierField eigenfield(int idx) const;  // 0-based
  cplx eigenfield_value(int idx, double x) const;
  // First `count` coefficients <u, e_n> (count = -1: all).
  std::vector<cplx> eigen_coeffs(const FourierField& u, int count = -1) const;
  // sum_n a_n e_n for a possibly mode-capped coefficient vector.
  FourierField synthesize(std::span<const cplx> coeffs) const;
};

// Full self-adjoint eigendecomposition. Internally the problem is rotated to
// the orthonormal real trigonometric basis (real symmetric, LAPACK dsyevd),
// low-lying eigenpairs are residual-polished when needed, and the columns are
// phase-fixed: the largest-magnitude Fourier coefficient is made real
// positive, ties resolved towards the lowest |k| (0, 1, -1, 2, ...).
// Throws NumericError if the residual or orthonormality invariants fail.
SpectralDecomposition diagonalize(const GalerkinHamiltonian& h);

// ||u||_{D^sigma} = (sum_n w_n^sigma |<u,e_n>|^2)^{1/2} with w_n = 1+lambda_n,
// shifted to w_n = lambda_n - lambda_1 + 2 when lambda_1 <= -1 (the shift used
// is reported through shift_out when non-null).
double sobolev_D_norm(const SpectralDecomposition& spec, const FourierField& u, double sigma,
                      double* shift_out = nullptr);

}  // namespace anls
