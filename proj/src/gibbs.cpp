#include "anls/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "anls/parallel.hpp"
#include "anls/rng.hpp"

namespace anls {

GffSampler::GffSampler(const SpectralDecomposition& s, int cap, std::optional<double> shift_in)
    : spec(&s) {
  mode_cap = cap < 0 ? s.dim() : cap;
  if (mode_cap < 1 || mode_cap > s.dim()) throw ParameterError("GffSampler: mode_cap out of range");
  shift = shift_in.value_or(s.eigenvalues.front() - 1.0);
  variances.resize(mode_cap);
  for (int n = 0; n < mode_cap; ++n) {
    double denom = s.eigenvalues[n] - shift;
    if (!(denom > 0.0) || !std::isfinite(denom))
      throw ParameterError("GffSampler: nonpositive variance at mode " + std::to_string(n + 1));
    variances[n] = 1.0 / denom;
  }
}

EigenState sample_gff_coeffs(const GffSampler& s, uint64_t seed, uint64_t index) {
  Rng rng = derive_stream(seed, "gff", index);
  EigenState c(s.mode_cap);
  for (int n = 0; n < s.mode_cap; ++n) c[n] = rng.normal_complex(s.variances[n]);
  return c;
}

FourierField sample_gff_field(const GffSampler& s, uint64_t seed, uint64_t index) {
  return s.spec->synthesize(sample_gff_coeffs(s, seed, index));
}

std::vector<FourierField> sample_gff(const GffSampler& s, int count, uint64_t seed) {
  if (count < 1) throw ParameterError("sample_gff: count must be >= 1");
  std::vector<FourierField> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample_gff_field(s, seed, i));
  return out;
}

CovarianceReport covariance_check(const GffSampler& s, const std::vector<double>& points,
                                  int n_samples, uint64_t seed) {
  if (points.empty()) throw ParameterError("covariance_check: no points");
  for (double x : points)
    if (x < 0.0 || x >= 1.0) throw ParameterError("covariance_check: points must lie in [0,1)");
  const int p = static_cast<int>(points.size());
  const int cap = s.mode_cap;

  // e_n(x_p) table.
  std::vector<std::vector<cplx>> basis(p, std::vector<cplx>(cap));
  for (int ip = 0; ip < p; ++ip)
    for (int n = 0; n < cap; ++n) basis[ip][n] = s.spec->eigenfield_value(n, points[ip]);

  std::vector<cplx> mean(static_cast<size_t>(p) * p, cplx{0.0, 0.0});
  std::vector<double> mean_sq(static_cast<size_t>(p) * p, 0.0);
  std::vector<cplx> vals(p);
  for (int i = 0; i < n_samples; ++i) {
    EigenState c = sample_gff_coeffs(s, seed, i);
    for (int ip = 0; ip < p; ++ip) {
      cplx acc{0.0, 0.0};
      for (int n = 0; n < cap; ++n) acc += c[n] * basis[ip][n];
      vals[ip] = acc;
    }
    for (int ip = 0; ip < p; ++ip)
      for (int iq = 0; iq < p; ++iq) {
        cplx z = vals[ip] * std::conj(vals[iq]);
        mean[ip * p + iq] += z;
        mean_sq[ip * p + iq] += std::norm(z);
      }
  }
  CovarianceReport rep;
  rep.n_samples = n_samples;
  for (int ip = 0; ip < p; ++ip)
    for (int iq = 0; iq < p; ++iq) {
      cplx m = mean[ip * p + iq] / static_cast<double>(n_samples);
      cplx truth{0.0, 0.0};
      for (int n = 0; n < cap; ++n)
        truth += basis[ip][n] * std::conj(basis[iq][n]) * s.variances[n];
      double dev = std::abs(m - truth);
      if (dev > rep.max_abs_dev) {
        rep.max_abs_dev = dev;
        double var = mean_sq[ip * p + iq] / n_samples - std::norm(m);
        rep.stderr_at_max = std::sqrt(std::max(var, 0.0) / n_samples);
      }
    }
  return rep;
}

SlopeStats gff_regularity(const GffSampler& s, int n_samples, const DyadicAnalysis& da, int j_min,
                          int j_max, uint64_t seed) {
  if (n_samples < 1) throw ParameterError("gff_regularity: need samples");
  SlopeStats st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -st.min;
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double sl = holder_slope(sample_gff_field(s, seed, i), da, j_min, j_max);
    sum += sl;
    st.min = std::min(st.min, sl);
    st.max = std::max(st.max, sl);
  }
  st.n = n_samples;
  st.mean = sum / n_samples;
  return st;
}

GibbsEnsemble gibbs_weights(const SpectralDecomposition& spec, std::vector<EigenState> samples,
                            double lambda, int power_m, double mass_cutoff, double lambda1,
                            uint64_t seed) {
  if (power_m < 3) throw ParameterError("gibbs_weights: power m must be >= 3");
  if (mass_cutoff < 0.0) throw ParameterError("gibbs_weights: cutoff must be nonnegative");
  if (lambda < 0.0) {
    if (std::isinf(mass_cutoff))
      throw ParameterError(
          "gibbs_weights: focusing coupling needs a finite mass cutoff "
          "(the measure cannot be normalized without truncation)");
    if (power_m > 6)
      throw ParameterError("gibbs_weights: focusing measure undefined for m > 6");
    if (power_m == 6)
      std::fprintf(stderr, "gibbs_weights: m = 6 focusing requires a small cutoff B\n");
  }
  GibbsEnsemble ens;
  ens.lambda = lambda;
  ens.power_m = power_m;
  ens.mass_cutoff = mass_cutoff;
  ens.lambda1 = lambda1;
  ens.seed = seed;
  ens.mode_cap = samples.empty() ? 0 : static_cast<int>(samples.front().size());
  ens.weights.resize(samples.size());
  const int grid_n = dealias_grid_size(spec.max_freq, power_m);
  double sw = 0.0, sw2 = 0.0;
  int nonzero = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double mass = state_mass(samples[i]);
    double w = 0.0;
    if (std::sqrt(mass) <= mass_cutoff) {
      FourierField u = spec.synthesize(samples[i]);
      double lm = lp_norm(u, power_m, grid_n);
      w = std::exp((1.0 - lambda1) * mass - lambda * std::pow(lm, power_m));
    }
    ens.weights[i] = w;
    if (w > 0.0) ++nonzero;
    sw += w;
    sw2 += w * w;
  }
  ens.samples = std::move(samples);
  const double count = static_cast<double>(ens.samples.size());
  ens.cutoff_too_tight = nonzero < 0.05 * count;
  ens.ess = sw2 > 0.0 ? sw * sw / sw2 : 0.0;
  ens.z_estimate = count > 0 ? sw / count : 0.0;
  if (count > 1) {
    double var = 0.0;
    for (double w : ens.weights) var += (w - ens.z_estimate) * (w - ens.z_estimate);
    ens.z_stderr = std::sqrt(var / (count - 1) / count);
  }
  return ens;
}

Observable observable_from_name(const std::string& name) {
  if (name == "mass") return Observable::mass;
  if (name == "l4") return Observable::l4;
  if (name == "mode1") return Observable::mode1;
  if (name == "h14") return Observable::h14;
  throw ParameterError("unknown observable: " + name);
}

const char* observable_name(Observable f) {
  switch (f) {
    case Observable::mass: return "mass";
    case Observable::l4: return "l4";
    case Observable::mode1: return "mode1";
    case Observable::h14: return "h14";
  }
  return "?";
}

double eval_observable(const SpectralDecomposition& spec, const EigenState& c, Observable f) {
  switch (f) {
    case Observable::mass:
      return state_mass(c);
    case Observable::mode1:
      return c.empty() ? 0.0 : std::norm(c[0]);
    case Observable::l4: {
      FourierField u = spec.synthesize(c);
      double l4 = lp_norm(u, 4.0, dealias_grid_size(spec.max_freq, 4));
      return l4 * l4 * l4 * l4;
    }
    case Observable::h14: {
      FourierField u = spec.synthesize(c);
      double h = sobolev_norm(u, 0.25);
      return h * h;
    }
  }
  return 0.0;
}

InvarianceReport invariance_experiment(
    const GibbsEnsemble& ens, const NlsRun& run, const std::vector<Observable>& observables,
    double horizon, int n_bootstrap, uint64_t seed, int n_threads,
    const std::function<EigenState(const EigenState&)>& flow_override) {
  validate(run);
  if (run.n_modes != ens.mode_cap)
    throw ParameterError("invariance_experiment: run modes != ensemble mode cap");
  if (ens.ess < 100.0)
    throw ParameterError("invariance_experiment: effective sample size below 100");
  if (n_bootstrap < 500) throw ParameterError("invariance_experiment: need n_bootstrap >= 500");

  const int count = static_cast<int>(ens.samples.size());
  const int nf = static_cast<int>(observables.size());
  const long steps = std::lround(horizon / run.dt);

  std::vector<double> f0(static_cast<size_t>(count) * nf);
  std::vector<double> ft(static_cast<size_t>(count) * nf);
  std::vector<char> ok(count, 1);

  parallel_for(count, n_threads, [&](int i) {
    const EigenState& c0 = ens.samples[i];
    for (int f = 0; f < nf; ++f)
      f0[static_cast<size_t>(i) * nf + f] = eval_observable(*run.spec, c0, observables[f]);
    EigenState c = c0;
    try {
      if (flow_override) {
        c = flow_override(c0);
      } else {
        for (long s = 0; s < steps; ++s) strang_step(run, c, s * run.dt);
      }
    } catch (const NumericError&) {
      ok[i] = 0;
      return;
    }
    for (int f = 0; f < nf; ++f)
      ft[static_cast<size_t>(i) * nf + f] = eval_observable(*run.spec, c, observables[f]);
  });

  // Weighted means over surviving samples; the weights always come from the
  // initial ensemble.
  std::vector<int> alive;
  for (int i = 0; i < count; ++i)
    if (ok[i]) alive.push_back(i);
  const int n_alive = static_cast<int>(alive.size());

  InvarianceReport rep;
  rep.n_samples = count;
  rep.blowups = count - n_alive;
  rep.ess = ens.ess;
  if (n_alive == 0) throw NumericError("invariance_experiment: every trajectory blew up");

  auto weighted_means = [&](const std::vector<int>& idx, int f, double& m0, double& mt) {
    double sw = 0.0, s0 = 0.0, st = 0.0;
    for (int i : idx) {
      double w = ens.weights[i];
      sw += w;
      s0 += w * f0[static_cast<size_t>(i) * nf + f];
      st += w * ft[static_cast<size_t>(i) * nf + f];
    }
    m0 = sw > 0 ? s0 / sw : 0.0;
    mt = sw > 0 ? st / sw : 0.0;
  };

  rep.pass = rep.blowups == 0;
  std::vector<int> draw(n_alive);
  std::vector<std::vector<double>> boot_delta(nf, std::vector<double>(n_bootstrap));
  for (int b = 0; b < n_bootstrap; ++b) {
    Rng rng = derive_stream(seed, "bootstrap", b);
    for (int i = 0; i < n_alive; ++i)
      draw[i] = alive[static_cast<int>(rng.next_u64() % n_alive)];
    for (int f = 0; f < nf; ++f) {
      double m0, mt;
      weighted_means(draw, f, m0, mt);
      boot_delta[f][b] = mt - m0;
    }
  }
  for (int f = 0; f < nf; ++f) {
    ObservableReport obs;
    obs.name = observable_name(observables[f]);
    weighted_means(alive, f, obs.mean_t0, obs.mean_T);
    obs.delta = obs.mean_T - obs.mean_t0;
    auto& d = boot_delta[f];
    double mean_d = 0.0;
    for (double x : d) mean_d += x;
    mean_d /= n_bootstrap;
    double var = 0.0;
    for (double x : d) var += (x - mean_d) * (x - mean_d);
    obs.sigma_boot = std::sqrt(var / std::max(1, n_bootstrap - 1));
    std::sort(d.begin(), d.end());
    auto pct = [&](double q) {
      double pos = q * (n_bootstrap - 1);
      int lo = static_cast<int>(pos);
      int hi = std::min(lo + 1, n_bootstrap - 1);
      double frac = pos - lo;
      return d[lo] * (1.0 - frac) + d[hi] * frac;
    };
    obs.ci_lo = pct(0.025);
    obs.ci_hi = pct(0.975);
    obs.pass = std::abs(obs.delta) <= 3.0 * obs.sigma_boot || obs.delta == 0.0;
    rep.pass = rep.pass && obs.pass;
    rep.observables.push_back(std::move(obs));
  }
  return rep;
}

}  // namespace anls
