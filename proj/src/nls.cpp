#include "anls/nls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anls {

namespace {

double abs_power(double a, int p) {
  // |u|^{m-2} with small integer exponent.
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= a;
  return r;
}

bool finite(const EigenState& c) {
  for (const auto& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

void validate(const NlsRun& run) {
  if (!run.spec) throw ParameterError("NlsRun: missing spectral decomposition");
  if (run.power_m < 3) throw ParameterError("NlsRun: power m must be >= 3");
  if (run.n_modes < 1 || run.n_modes > run.spec->dim())
    throw ParameterError("NlsRun: n_modes out of range");
  // negative dt runs the time-reversed step; only zero is meaningless
  if (run.dt == 0.0) throw ParameterError("NlsRun: dt must be nonzero");
  if (run.scheme == Scheme::picard && !run.map)
    throw ParameterError("NlsRun: picard scheme needs a paracontrolled map");
}

EigenState initial_state(const NlsRun& run, const FourierField& u0) {
  validate(run);
  return run.spec->eigen_coeffs(u0, run.n_modes);
}

FourierField state_field(const NlsRun& run, const EigenState& c) {
  return run.spec->synthesize(c);
}

double state_mass(const EigenState& c) {
  double s = 0.0;
  for (const auto& z : c) s += std::norm(z);
  return s;
}

void strang_step(const NlsRun& run, EigenState& c, double t_now) {
  const auto& lam = run.spec->eigenvalues;
  const double half = 0.5 * run.dt;
  for (size_t n = 0; n < c.size(); ++n) c[n] *= std::polar(1.0, -half * lam[n]);

  FourierField u = run.spec->synthesize(c);
  const int m_band = run.spec->max_freq;
  const int grid_n = run.allow_aliasing ? next_pow2(2 * m_band + 1)
                                        : dealias_grid_size(m_band, run.power_m);
  auto vals = u.to_grid(grid_n);
  const double coef = -run.lambda * run.dt;
  for (auto& v : vals) {
    double a = std::abs(v);
    v *= std::polar(1.0, coef * abs_power(a, run.power_m - 2));
  }
  FourierField w = FourierField::from_grid(vals, m_band);
  c = run.spec->eigen_coeffs(w, run.n_modes);

  for (size_t n = 0; n < c.size(); ++n) c[n] *= std::polar(1.0, -half * lam[n]);
  if (!finite(c))
    throw NumericError("strang_step: non-finite state at t = " + std::to_string(t_now));
}

Trajectory evolve_strang(const NlsRun& run, const FourierField& u0, double snap_every) {
  validate(run);
  EigenState c = initial_state(run, u0);
  Trajectory traj;
  traj.snapshots.push_back({0.0, c});
  const long steps = std::lround(run.horizon / run.dt);
  if (steps < 0) throw ParameterError("evolve_strang: horizon and dt disagree in sign");
  const long snap_stride =
      snap_every > 0.0 ? std::max<long>(1, std::lround(snap_every / run.dt)) : steps + 1;
  const double initial_sigma = sobolev_norm(state_field(run, c), run.blowup_sigma);
  for (long s = 1; s <= steps; ++s) {
    double t = static_cast<double>(s) * run.dt;
    try {
      strang_step(run, c, t);
    } catch (const NumericError&) {
      traj.blew_up = true;
      return traj;
    }
    double sig = sobolev_norm(state_field(run, c), run.blowup_sigma);
    if (!std::isfinite(sig) || sig > run.blowup_factor * std::max(initial_sigma, 1e-300)) {
      traj.blew_up = true;
      return traj;
    }
    traj.last_good_time = t;
    if (s % snap_stride == 0 || s == steps) traj.snapshots.push_back({t, c});
  }
  return traj;
}

PicardResult picard_solve(const NlsRun& run, const FourierField& u0, double t_local, int n_nodes) {
  validate(run);
  if (!run.map) throw ParameterError("picard_solve: needs a paracontrolled map");
  if (t_local <= 0.0) throw ParameterError("picard_solve: t_local must be positive");
  if (n_nodes < 2) throw ParameterError("picard_solve: need at least two nodes");
  const ParacontrolledMap& map = *run.map;
  const SpectralDecomposition& spec = *run.spec;
  const int mh = spec.max_freq;
  const int mx = map.max_freq();
  if (u0.max_freq() != mh) throw ShapeError("picard_solve: band mismatch");

  const double h = t_local / (n_nodes - 1);
  std::vector<double> times(n_nodes);
  for (int j = 0; j < n_nodes; ++j) times[j] = h * j;

  const auto& lam = spec.eigenvalues;
  const int dim = spec.dim();
  auto a0 = spec.eigen_coeffs(u0);

  // Linear part Phi(e^{-i t H} u0); Gamma(v0) = u0 exactly.
  std::vector<FourierField> lin(n_nodes, FourierField(mh));
  for (int i = 0; i < n_nodes; ++i) {
    std::vector<cplx> a = a0;
    for (int n = 0; n < dim; ++n) a[n] *= std::polar(1.0, -times[i] * lam[n]);
    lin[i] = map.phi(spec.synthesize(a).band_limited(mx)).band_limited(mh);
  }

  std::vector<FourierField> v = lin;
  std::vector<FourierField> v_next(n_nodes, FourierField(mh));
  std::vector<std::vector<cplx>> g_hat(n_nodes);

  const int grid_n = dealias_grid_size(mh, run.power_m);
  double prev_residual = std::numeric_limits<double>::infinity();
  double last_residual = prev_residual;
  bool converged = false;
  int growth_streak = 0;
  int it = 0;
  for (it = 1; it <= 100; ++it) {
    for (int j = 0; j < n_nodes; ++j) {
      FourierField u = map.gamma(v[j].band_limited(mx)).band_limited(mh);
      auto vals = u.to_grid(grid_n);
      for (auto& z : vals) z *= abs_power(std::abs(z), run.power_m - 2);
      g_hat[j] = spec.eigen_coeffs(FourierField::from_grid(vals, mh));
    }
    double residual = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
      std::vector<cplx> acc(dim, cplx{0.0, 0.0});
      for (int j = 0; j <= i; ++j) {
        double w = (j == 0 || j == i) ? 0.5 * h : h;
        if (i == 0) w = 0.0;
        double dt_ij = times[i] - times[j];
        for (int n = 0; n < dim; ++n)
          acc[n] += w * g_hat[j][n] * std::polar(1.0, -dt_ij * lam[n]);
      }
      FourierField duhamel = map.phi(spec.synthesize(acc).band_limited(mx)).band_limited(mh);
      v_next[i] = lin[i] - cplx(0.0, run.lambda) * duhamel;
      residual = std::max(residual, (v_next[i] - v[i]).l2_norm());
    }
    std::swap(v, v_next);
    last_residual = residual;
    if (residual < 1e-9) {
      converged = true;
      break;
    }
    if (residual > prev_residual) {
      if (++growth_streak >= 3)
        throw NumericError("picard_solve: outside local well-posedness window", residual);
    } else {
      growth_streak = 0;
    }
    prev_residual = residual;
  }
  if (!converged)
    throw NumericError("picard_solve: iteration budget exhausted", last_residual);

  PicardResult out;
  out.times = times;
  out.iterations = it;
  out.fields.reserve(n_nodes);
  for (int j = 0; j < n_nodes; ++j)
    out.fields.push_back(map.gamma(v[j].band_limited(mx)).band_limited(mh));
  return out;
}

double discrete_energy(const NlsRun& run, const EigenState& c) {
  const auto& lam = run.spec->eigenvalues;
  double quad = 0.0;
  for (size_t n = 0; n < c.size(); ++n) quad += lam[n] * std::norm(c[n]);
  FourierField u = state_field(run, c);
  double lm = lp_norm(u, run.power_m, dealias_grid_size(run.spec->max_freq, run.power_m));
  return quad + (2.0 * run.lambda / run.power_m) * std::pow(lm, run.power_m);
}

double discrete_energy_plain_coupling(const NlsRun& run, const EigenState& c) {
  const auto& lam = run.spec->eigenvalues;
  double quad = 0.0;
  for (size_t n = 0; n < c.size(); ++n) quad += lam[n] * std::norm(c[n]);
  FourierField u = state_field(run, c);
  double lm = lp_norm(u, run.power_m, dealias_grid_size(run.spec->max_freq, run.power_m));
  return quad + run.lambda * std::pow(lm, run.power_m);
}

GalerkinTable galerkin_convergence(const SpectralDecomposition& spec, int power_m, double lambda,
                                   const FourierField& u0, double horizon,
                                   const std::vector<int>& n_list, double sigma_prime, double dt) {
  if (n_list.size() < 2) throw ParameterError("galerkin_convergence: need at least two dimensions");
  std::vector<int> dims = n_list;
  std::sort(dims.begin(), dims.end());
  if (dims.back() > spec.dim())
    throw ParameterError("galerkin_convergence: dimension exceeds the resolved band");

  auto run_at = [&](int n_modes) {
    NlsRun run;
    run.power_m = power_m;
    run.lambda = lambda;
    run.n_modes = n_modes;
    run.dt = dt;
    run.horizon = horizon;
    run.spec = &spec;
    return evolve_strang(run, u0, horizon / 16.0);
  };

  Trajectory ref = run_at(dims.back());
  if (ref.blew_up) throw NumericError("galerkin_convergence: reference trajectory blew up");

  GalerkinTable table;
  std::vector<double> lx, ly;
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    Trajectory t = run_at(dims[i]);
    if (t.blew_up) throw NumericError("galerkin_convergence: trajectory blew up");
    double err = 0.0;
    size_t count = std::min(t.snapshots.size(), ref.snapshots.size());
    for (size_t s = 0; s < count; ++s) {
      FourierField diff = spec.synthesize(t.snapshots[s].state);
      diff -= spec.synthesize(ref.snapshots[s].state);
      err = std::max(err, sobolev_norm(diff, sigma_prime));
    }
    table.rows.push_back({dims[i], err});
    if (err > 0.0) {
      lx.push_back(std::log2(static_cast<double>(dims[i])));
      ly.push_back(std::log2(err));
    }
  }
  double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  table.fitted_exponent = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return table;
}

}  // namespace anls
