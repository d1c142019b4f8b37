#include "anls/strichartz.hpp"

#include <cmath>

#include "anls/rng.hpp"

namespace anls {

double sigma_critical(int power_m, double kappa) {
  if (power_m < 3) throw ParameterError("sigma_critical: m must be an integer >= 3");
  if (!(kappa > 0.0 && kappa < 1.0)) throw ParameterError("sigma_critical: kappa must be in (0,1)");
  // Single-division forms of 1/3 - kappa/6 and (4-kappa)/6 - 2/(m-2), exact
  // for the rational cases of interest.
  if (power_m <= 8) return (2.0 - kappa) / 6.0;
  return ((4.0 - kappa) * (power_m - 2) - 12.0) / (6.0 * (power_m - 2));
}

StrichartzStats strichartz_ratio(const ParacontrolledMap& map, const PropagatorPlan& plan,
                                 double kappa, double eps, int block_j, int n_samples, int n_time,
                                 uint64_t seed) {
  const int mh = plan.spec().max_freq;
  const int mx = map.max_freq();
  if (block_j < 0 || (1 << (block_j + 1)) > mh)
    throw ParameterError("strichartz_ratio: block not resolvable at this band");
  if (n_time < 64) throw ParameterError("strichartz_ratio: need n_time >= 64");
  if (n_samples < 1) throw ParameterError("strichartz_ratio: need n_samples >= 1");

  const double s_exp = (1.0 - kappa) / 6.0 + eps;
  const int lo = (1 << block_j) + 1, hi = 1 << (block_j + 1);
  const int dim = plan.spec().dim();
  const auto& lam = plan.spec().eigenvalues;
  const double h = 1.0 / (n_time - 1);

  double sum_q = 0.0, sum_q2 = 0.0, max_q = 0.0;
  for (int sample = 0; sample < n_samples; ++sample) {
    Rng rng = derive_stream(seed, "strichartz", static_cast<uint64_t>(block_j) << 32 | sample);
    FourierField u0(mh);
    for (int a = lo; a <= hi; ++a) {
      u0(a) = rng.normal_complex();
      u0(-a) = rng.normal_complex();
    }
    double nrm = u0.l2_norm();
    if (nrm == 0.0) continue;
    u0 *= 1.0 / nrm;
    const double denom = sobolev_norm(u0, s_exp);

    std::vector<cplx> a0 = plan.spec().eigen_coeffs(map.gamma(u0.band_limited(mx)).band_limited(mh));
    double integral = 0.0;
    std::vector<cplx> a(dim);
    for (int i = 0; i < n_time; ++i) {
      double t = h * i;
      for (int n = 0; n < dim; ++n)
        a[n] = a0[n] * std::polar(1.0, -plan.direction() * t * lam[n]);
      FourierField w = map.phi(plan.spec().synthesize(a).band_limited(mx)).band_limited(mh);
      double l6 = lp_norm(w, 6.0);
      double weight = (i == 0 || i == n_time - 1) ? 0.5 * h : h;
      integral += weight * std::pow(l6, 6.0);
    }
    double q = std::pow(integral, 1.0 / 6.0) / denom;
    sum_q += q;
    sum_q2 += q * q;
    max_q = std::max(max_q, q);
  }

  StrichartzStats out;
  out.block = block_j;
  out.n_samples = n_samples;
  out.mean_q = sum_q / n_samples;
  out.max_q = max_q;
  double var = std::max(0.0, sum_q2 / n_samples - out.mean_q * out.mean_q);
  out.stderr_q = std::sqrt(var / n_samples);
  return out;
}

}  // namespace anls
