#include "anls/paracontrolled.hpp"

#include <algorithm>
#include <cmath>

#include "anls/rng.hpp"

namespace anls {

ParacontrolledMap::ParacontrolledMap(ReferenceField reference, BlockProfile profile, int cutoff,
                                     int max_iter, double tol)
    : x_(std::move(reference)),
      da_(x_.x.max_freq(), profile),
      cutoff_(cutoff),
      max_iter_(max_iter),
      tol_(tol) {
  if (!is_pow2(cutoff_)) throw ParameterError("ParacontrolledMap: cutoff must be a power of two");
  const int m = max_freq();
  grid_n_ = next_pow2(4 * m + 3);
  x_block_grid_.resize(da_.block_count());
  prefix_mult_.resize(da_.block_count());
  for (int j = -1; j <= da_.top_block(); ++j) {
    if (j >= 1 && block_admissible(j, cutoff_))
      x_block_grid_[j + 1] = lp_block(x_.x, j, da_).to_grid(grid_n_);
    std::vector<double> pm(2 * m + 1, 0.0);
    for (int n = -1; n <= j - 2; ++n) {
      if (!block_admissible(n, cutoff_)) continue;
      const auto& mult = da_.multipliers(n);
      for (int i = 0; i < 2 * m + 1; ++i) pm[i] += mult[i];
    }
    prefix_mult_[j + 1] = std::move(pm);
  }
  estimate_contraction();
}

FourierField ParacontrolledMap::apply_pn(const FourierField& u) const {
  const int m = max_freq();
  if (u.max_freq() != m) throw ShapeError("apply_pn: band mismatch");
  std::vector<cplx> s_grid(grid_n_, cplx{0.0, 0.0});
  std::vector<cplx> acc(grid_n_, cplx{0.0, 0.0});
  bool any = false;
  int included = -2;  // highest u-block folded into the running low-pass sum
  for (int blk = 1; blk <= da_.top_block(); ++blk) {
    if (!block_admissible(blk, cutoff_) || x_block_grid_[blk + 1].empty()) continue;
    for (int n = included + 1; n <= blk - 2; ++n) {
      if (!block_admissible(n, cutoff_)) continue;
      auto g = lp_block(u, n, da_).to_grid(grid_n_);
      for (int i = 0; i < grid_n_; ++i) s_grid[i] += g[i];
    }
    included = std::max(included, blk - 2);
    const auto& xg = x_block_grid_[blk + 1];
    for (int i = 0; i < grid_n_; ++i) acc[i] += s_grid[i] * xg[i];
    any = true;
  }
  if (!any) return FourierField::zero(m);
  return FourierField::from_grid(acc, m);
}

FourierField ParacontrolledMap::apply_pn_adjoint(const FourierField& w) const {
  const int m = max_freq();
  if (w.max_freq() != m) throw ShapeError("apply_pn_adjoint: band mismatch");
  auto w_grid = w.to_grid(grid_n_);
  FourierField out(m);
  std::vector<cplx> g(grid_n_);
  for (int blk = 1; blk <= da_.top_block(); ++blk) {
    if (!block_admissible(blk, cutoff_) || x_block_grid_[blk + 1].empty()) continue;
    const auto& xg = x_block_grid_[blk + 1];
    for (int i = 0; i < grid_n_; ++i) g[i] = std::conj(xg[i]) * w_grid[i];
    FourierField f = FourierField::from_grid(g, m);
    const auto& pm = prefix_mult_[blk + 1];
    for (int i = 0; i < 2 * m + 1; ++i) out.coeffs()[i] += pm[i] * f.coeffs()[i];
  }
  return out;
}

FourierField ParacontrolledMap::phi(const FourierField& u) const {
  FourierField out = u;
  out -= apply_pn(u);
  return out;
}

FourierField ParacontrolledMap::gamma(const FourierField& v,
                                      std::vector<double>* residual_log) const {
  if (v.max_freq() != max_freq()) throw ShapeError("gamma: band mismatch");
  double v_norm = v.l2_norm();
  if (v_norm == 0.0) return v;
  FourierField u = v;
  double last = 0.0;
  for (int it = 0; it < max_iter_; ++it) {
    FourierField next = v + apply_pn(u);
    last = (next - u).l2_norm();
    if (residual_log) residual_log->push_back(last);
    u = std::move(next);
    if (last < tol_ * v_norm) return u;
  }
  throw NumericError("gamma: fixed point did not converge", last);
}

void ParacontrolledMap::estimate_contraction() {
  contraction_ = operator_norm_estimate(
      [this](const FourierField& u) { return apply_pn(u); },
      [this](const FourierField& w) { return apply_pn_adjoint(w); }, max_freq());
}

double operator_norm_estimate(const std::function<FourierField(const FourierField&)>& apply,
                              const std::function<FourierField(const FourierField&)>& adjoint,
                              int max_freq, int iterations, uint64_t seed) {
  Rng rng = derive_stream(seed, "op-norm-probe", 0);
  FourierField z(max_freq);
  for (auto& c : z.coeffs()) c = rng.normal_complex();
  double nz = z.l2_norm();
  if (nz == 0.0) return 0.0;
  z *= 1.0 / nz;
  double sigma2 = 0.0;
  for (int it = 0; it < iterations; ++it) {
    FourierField w = adjoint(apply(z));
    sigma2 = w.l2_norm();
    if (sigma2 == 0.0) return 0.0;
    z = (1.0 / sigma2) * w;
  }
  return std::sqrt(sigma2);
}

ParacontrolledMap build_map(const ReferenceField& x, BlockProfile profile, int max_iter,
                            double tol) {
  DyadicAnalysis da(x.x.max_freq(), profile);
  const int n_max = 1 << (da.top_block() + 1);
  std::optional<ParacontrolledMap> best;
  for (int n = 1; n <= n_max; n <<= 1) {
    ParacontrolledMap candidate(x, profile, n, max_iter, tol);
    if (candidate.contraction() <= 0.4) {
      best.emplace(std::move(candidate));
      break;
    }
  }
  if (!best)
    throw ConstructionError("build_map: potential too rough at this resolution");
  return std::move(*best);
}

FourierField apply_Hsharp(const ParacontrolledMap& map, const GalerkinHamiltonian& h,
                          const FourierField& v, HsharpMode mode) {
  const int mh = h.max_freq;
  const int mx = map.max_freq();
  if (v.max_freq() != mh) throw ShapeError("apply_Hsharp: field/operator band mismatch");
  if (mx < mh) throw ShapeError("apply_Hsharp: map band below operator band");
  FourierField u = map.gamma(v.band_limited(mx));
  if (mode == HsharpMode::conjugation) {
    FourierField w = apply_H(h, u.band_limited(mh));
    return map.phi(w.band_limited(mx)).band_limited(mh);
  }
  const auto& da = map.analysis();
  const FourierField& vf = map.reference().source.field;
  const FourierField& x = map.reference().x;
  const int n_cut = map.cutoff();

  FourierField sum = paraproduct(vf, u, da);  // P_V u
  sum += resonant(u, vf, da);
  sum += paraproduct(u, vf, da);
  sum -= truncated_paraproduct(u, vf, n_cut, da);
  FourierField du = u.derivative();
  sum -= cplx(2.0, 0.0) * truncated_paraproduct(du, x.derivative(), n_cut, da);
  sum -= truncated_paraproduct(u.laplacian(), x, n_cut, da);

  FourierField out = sum.band_limited(mh);
  for (int k = -mh; k <= mh; ++k) out(k) += minus_laplace_symbol(k) * v(k);  // -Lap v
  return out;
}

}  // namespace anls
