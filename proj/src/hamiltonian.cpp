#include "anls/hamiltonian.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numeric>

extern "C" void openblas_set_num_threads(int);

namespace anls {

namespace {

// Reductions must not depend on a machine-dependent BLAS thread count.
void blas_init() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

constexpr double kResidualTol = 1e-9;   // relative to 1 + |lambda|
constexpr double kGramTol = 1e-10;

}  // namespace

GalerkinHamiltonian assemble(const Potential& v, int max_freq) {
  if (max_freq <= 0) throw ParameterError("assemble: max_freq must be positive");
  if (v.field.max_freq() < 2 * max_freq)
    std::fprintf(stderr,
                 "assemble: potential band %d < 2M = %d, missing differences zero-padded\n",
                 v.field.max_freq(), 2 * max_freq);
  const int m = max_freq;
  const int n = 2 * m + 1;
  GalerkinHamiltonian h;
  h.max_freq = m;
  h.potential = v;
  h.matrix.assign(static_cast<size_t>(n) * n, cplx{0.0, 0.0});
  const int mv = v.field.max_freq();
  auto vhat = [&](int q) -> cplx {
    return std::abs(q) <= mv ? v.field(q) : cplx{0.0, 0.0};
  };
  for (int l = -m; l <= m; ++l) {
    for (int k = -m; k <= m; ++k) {
      cplx a = vhat(k - l);
      if (k == l) a += minus_laplace_symbol(k);
      h.matrix[static_cast<size_t>(k + m) + static_cast<size_t>(l + m) * n] = a;
    }
  }
  // Self-adjointness holds iff the potential satisfies conjugate symmetry.
  double scale = 0.0, dev = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k <= l; ++k) {
      cplx a = h.matrix[static_cast<size_t>(k) + static_cast<size_t>(l) * n];
      cplx b = h.matrix[static_cast<size_t>(l) + static_cast<size_t>(k) * n];
      scale = std::max(scale, std::abs(a));
      dev = std::max(dev, std::abs(a - std::conj(b)));
    }
  if (dev > 1e-12 * std::max(1.0, scale))
    throw ConstructionError("assemble: matrix is not self-adjoint (potential not real?)");
  return h;
}

FourierField apply_H(const GalerkinHamiltonian& h, const FourierField& u) {
  if (u.max_freq() != h.max_freq) throw ShapeError("apply_H: field/operator band mismatch");
  blas_init();
  const int n = h.dim();
  FourierField out(h.max_freq, false);
  const cplx one{1.0, 0.0}, zero{0.0, 0.0};
  cblas_zgemv(CblasColMajor, CblasNoTrans, n, n, &one, h.matrix.data(), n, u.coeffs().data(), 1,
              &zero, out.coeffs().data(), 1);
  return out;
}

double potential_pairing(const Potential& v, const FourierField& u) {
  FourierField usq = grid_product(u, u.conj());
  const int mq = std::min(v.field.max_freq(), usq.max_freq());
  cplx s{0.0, 0.0};
  for (int q = -mq; q <= mq; ++q) s += v.field(q) * std::conj(usq(q));
  return s.real();
}

namespace {

// Real symmetric form of the Hamiltonian in the orthonormal basis
// {1, sqrt2 cos(2 pi k x), sqrt2 sin(2 pi k x)}; index 0 -> constant,
// 1..M -> cos_k, M+1..2M -> sin_k.
std::vector<double> real_basis_matrix(const GalerkinHamiltonian& h) {
  const int m = h.max_freq;
  const int n = 2 * m + 1;
  const int mv = h.potential.field.max_freq();
  auto rq = [&](int q) { return std::abs(q) <= mv ? h.potential.field(q).real() : 0.0; };
  auto iq = [&](int q) {
    if (std::abs(q) > mv) return 0.0;
    return h.potential.field(q).imag();
  };
  std::vector<double> b(static_cast<size_t>(n) * n, 0.0);
  auto set = [&](int r, int c, double val) {
    b[static_cast<size_t>(r) + static_cast<size_t>(c) * n] = val;
    b[static_cast<size_t>(c) + static_cast<size_t>(r) * n] = val;
  };
  set(0, 0, rq(0));
  for (int l = 1; l <= m; ++l) {
    set(0, l, std::sqrt(2.0) * rq(l));
    set(0, m + l, -std::sqrt(2.0) * iq(l));
  }
  for (int k = 1; k <= m; ++k) {
    for (int l = k; l <= m; ++l) {
      double lap = (k == l) ? minus_laplace_symbol(k) : 0.0;
      set(k, l, lap + rq(k - l) + rq(k + l));
      set(m + k, m + l, lap + rq(k - l) - rq(k + l));
    }
    for (int l = 1; l <= m; ++l) {
      // <V cos_k, sin_l> = -I(k+l) - I(l-k)
      double val = -iq(k + l) - iq(l - k);
      b[static_cast<size_t>(k) + static_cast<size_t>(m + l) * n] = val;
      b[static_cast<size_t>(m + l) + static_cast<size_t>(k) * n] = val;
    }
  }
  return b;
}

double column_residual(const std::vector<double>& bmat, const double* e, double lambda, int n) {
  // Long-double accumulation keeps the check meaningful near the tolerance.
  long double s = 0.0L;
  for (int r = 0; r < n; ++r) {
    long double acc = 0.0L;
    const double* row = bmat.data() + r;
    for (int c = 0; c < n; ++c) acc += static_cast<long double>(row[static_cast<size_t>(c) * n]) * e[c];
    acc -= static_cast<long double>(lambda) * e[r];
    s += acc * acc;
  }
  return static_cast<double>(std::sqrt(static_cast<long double>(s)));
}

// First-order eigenpair refinement for the columns in `targets`. The
// corrections form one skew-symmetric generator (the partner of every pair
// rotation always receives the opposite coefficient), so I + Omega is
// orthogonal up to O(|Omega|^2) and the basis Gram defect is preserved.
void polish_columns(const std::vector<double>& bmat, std::vector<double>& evec,
                    std::vector<double>& w, const std::vector<int>& targets, int n) {
  std::map<int, std::map<int, double>> omega;  // column -> (basis column -> coeff)
  std::vector<char> in_set(n, 0);
  for (int col : targets) in_set[col] = 1;
  for (int col : targets) {
    const double* e = evec.data() + static_cast<size_t>(col) * n;
    std::vector<double> r(n);
    for (int row = 0; row < n; ++row) {
      long double acc = 0.0L;
      for (int c = 0; c < n; ++c)
        acc += static_cast<long double>(bmat[static_cast<size_t>(row) + static_cast<size_t>(c) * n]) *
               e[c];
      r[row] = static_cast<double>(acc - static_cast<long double>(w[col]) * e[row]);
    }
    std::vector<double> proj(n);
    cblas_dgemv(CblasColMajor, CblasTrans, n, n, 1.0, evec.data(), n, r.data(), 1, 0.0,
                proj.data(), 1);
    w[col] += proj[col];  // Rayleigh update
    double guard = 1e-8 * (1.0 + std::abs(w[col]));
    for (int m = 0; m < n; ++m) {
      if (m == col) continue;
      double gap = w[col] - w[m];
      if (std::abs(gap) <= guard) continue;  // (near-)degenerate pair: leave the subspace alone
      // A tiny coefficient against a huge gap still removes a large residual
      // component, so only the projection size gates the term.
      double c = proj[m] / gap;
      if (std::abs(proj[m]) < 1e-14) continue;
      double share = in_set[m] ? 0.5 : 1.0;  // both sides contribute when both are targets
      omega[col][m] += share * c;
      omega[m][col] -= share * c;
    }
  }
  for (const auto& [col, coeffs] : omega) {
    double* e = evec.data() + static_cast<size_t>(col) * n;
    std::vector<double> delta(n, 0.0);
    for (const auto& [m, c] : coeffs) {
      const double* em = evec.data() + static_cast<size_t>(m) * n;
      for (int row = 0; row < n; ++row) delta[row] += c * em[row];
    }
    double nrm = 0.0;
    for (int row = 0; row < n; ++row) {
      e[row] += delta[row];
      nrm += e[row] * e[row];
    }
    nrm = 1.0 / std::sqrt(nrm);
    for (int row = 0; row < n; ++row) e[row] *= nrm;
  }
}

}  // namespace

SpectralDecomposition diagonalize(const GalerkinHamiltonian& h) {
  blas_init();
  const int m = h.max_freq;
  const int n = h.dim();
  std::vector<double> bmat = real_basis_matrix(h);
  std::vector<double> evec = bmat;
  std::vector<double> w(n);
  int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, evec.data(), n, w.data());
  if (info != 0)
    throw NumericError("diagonalize: dsyevd failed, info = " + std::to_string(info),
                       static_cast<double>(info));

  // Residual pass: R = B E - E Lambda in double; refine columns that sit
  // near the tolerance (only low eigenvalues can, the bound scales with
  // 1 + |lambda|).
  auto residual_norms = [&](std::vector<double>& rnorm) {
    std::vector<double> resid(static_cast<size_t>(n) * n);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, bmat.data(), n,
                evec.data(), n, 0.0, resid.data(), n);
    rnorm.resize(n);
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      const double* rc = resid.data() + static_cast<size_t>(c) * n;
      const double* ec = evec.data() + static_cast<size_t>(c) * n;
      for (int r = 0; r < n; ++r) {
        double d = rc[r] - w[c] * ec[r];
        s += d * d;
      }
      rnorm[c] = std::sqrt(s);
    }
  };
  std::vector<double> rnorm;
  residual_norms(rnorm);
  std::vector<int> targets;
  for (int c = 0; c < n; ++c)
    if (rnorm[c] > 0.5 * kResidualTol * (1.0 + std::abs(w[c]))) targets.push_back(c);
  if (!targets.empty()) {
    polish_columns(bmat, evec, w, targets, n);
    residual_norms(rnorm);
    // the polished columns deserve the rounding-free evaluation
    for (int c : targets)
      rnorm[c] = column_residual(bmat, evec.data() + static_cast<size_t>(c) * n, w[c], n);
  }
  double max_resid = 0.0;
  for (int c = 0; c < n; ++c) {
    double rel = rnorm[c] / (1.0 + std::abs(w[c]));
    max_resid = std::max(max_resid, rel);
    if (rel > kResidualTol)
      throw NumericError("diagonalize: eigenpair residual above tolerance", rel);
  }
  if (!std::is_sorted(w.begin(), w.end())) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
    std::vector<double> w2(n);
    std::vector<double> e2(evec.size());
    for (int c = 0; c < n; ++c) {
      w2[c] = w[order[c]];
      std::copy_n(evec.data() + static_cast<size_t>(order[c]) * n, n,
                  e2.data() + static_cast<size_t>(c) * n);
    }
    w.swap(w2);
    evec.swap(e2);
  }

  // Orthonormality defect (Gram in the real basis; the complex conversion
  // below is unitary so the defect carries over).
  std::vector<double> gram(static_cast<size_t>(n) * n);
  cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans, n, n, n, 1.0, evec.data(), n, evec.data(),
              n, 0.0, gram.data(), n);
  double gram_dev = 0.0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      double target = (r == c) ? 1.0 : 0.0;
      gram_dev = std::max(gram_dev, std::abs(gram[static_cast<size_t>(c) * n + r] - target));
    }
  if (gram_dev > kGramTol)
    throw NumericError("diagonalize: eigenbasis orthonormality above tolerance", gram_dev);

  SpectralDecomposition spec;
  spec.max_freq = m;
  spec.eigenvalues = std::move(w);
  spec.max_residual_rel = max_resid;
  spec.gram_defect = gram_dev;
  spec.eigenfields.assign(static_cast<size_t>(n) * n, cplx{0.0, 0.0});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int c = 0; c < n; ++c) {
    const double* ec = evec.data() + static_cast<size_t>(c) * n;
    cplx* fc = spec.eigenfields.data() + static_cast<size_t>(c) * n;
    fc[m] = cplx(ec[0], 0.0);  // frequency 0 at row m
    for (int k = 1; k <= m; ++k) {
      fc[m + k] = cplx(ec[k] * inv_sqrt2, -ec[m + k] * inv_sqrt2);
      fc[m - k] = cplx(ec[k] * inv_sqrt2, ec[m + k] * inv_sqrt2);
    }
    // Phase convention: largest-magnitude coefficient real positive, ties
    // towards the lowest |k| with positive k first.
    int best_row = m;
    double best = -1.0;
    for (int a = 0; a <= m; ++a) {
      for (int sgn = 0; sgn < (a == 0 ? 1 : 2); ++sgn) {
        int row = sgn == 0 ? m + a : m - a;
        double mag = std::abs(fc[row]);
        if (mag > best * (1.0 + 1e-12)) {
          best = mag;
          best_row = row;
        }
      }
    }
    if (best > 0.0) {
      cplx phase = std::conj(fc[best_row]) / std::abs(fc[best_row]);
      for (int r = 0; r < n; ++r) fc[r] *= phase;
    }
  }
  spec.ground_gap = spec.eigenvalues.size() > 1 ? spec.eigenvalues[1] - spec.eigenvalues[0] : 0.0;
  if (spec.ground_gap <= 0.0)
    throw NumericError("diagonalize: ground eigenvalue is not simple", spec.ground_gap);
  return spec;
}

FourierField SpectralDecomposition::eigenfield(int idx) const {
  if (idx < 0 || idx >= dim()) throw IndexError("eigenfield: index out of range");
  FourierField f(max_freq, false);
  std::copy_n(eigenfields.data() + static_cast<size_t>(idx) * dim(), dim(), f.coeffs().data());
  return f;
}

cplx SpectralDecomposition::eigenfield_value(int idx, double x) const {
  if (idx < 0 || idx >= dim()) throw IndexError("eigenfield_value: index out of range");
  const cplx* fc = eigenfields.data() + static_cast<size_t>(idx) * dim();
  cplx s{0.0, 0.0};
  for (int k = -max_freq; k <= max_freq; ++k)
    s += fc[k + max_freq] * std::polar(1.0, kTwoPi * k * x);
  return s;
}

std::vector<cplx> SpectralDecomposition::eigen_coeffs(const FourierField& u, int count) const {
  if (u.max_freq() != max_freq) throw ShapeError("eigen_coeffs: band mismatch");
  blas_init();
  const int n = dim();
  const int cols = count < 0 ? n : std::min(count, n);
  std::vector<cplx> a(cols);
  const cplx one{1.0, 0.0}, zero{0.0, 0.0};
  cblas_zgemv(CblasColMajor, CblasConjTrans, n, cols, &one, eigenfields.data(), n,
              u.coeffs().data(), 1, &zero, a.data(), 1);
  return a;
}

FourierField SpectralDecomposition::synthesize(std::span<const cplx> coeffs) const {
  blas_init();
  const int n = dim();
  const int cols = static_cast<int>(coeffs.size());
  if (cols > n) throw ShapeError("synthesize: too many coefficients");
  FourierField f(max_freq, false);
  const cplx one{1.0, 0.0}, zero{0.0, 0.0};
  cblas_zgemv(CblasColMajor, CblasNoTrans, n, cols, &one, eigenfields.data(), n, coeffs.data(), 1,
              &zero, f.coeffs().data(), 1);
  return f;
}

double sobolev_D_norm(const SpectralDecomposition& spec, const FourierField& u, double sigma,
                      double* shift_out) {
  auto a = spec.eigen_coeffs(u);
  double lambda1 = spec.eigenvalues.front();
  double shift = lambda1 > -1.0 + 1e-12 ? 0.0 : lambda1 - 1.0;
  if (shift_out) *shift_out = shift;
  double s = 0.0;
  for (int n = 0; n < spec.dim(); ++n) {
    double weight = 1.0 + spec.eigenvalues[n] - shift;
    s += std::pow(weight, sigma) * std::norm(a[n]);
  }
  return std::sqrt(s);
}

}  // namespace anls
