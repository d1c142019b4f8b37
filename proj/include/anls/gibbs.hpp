#pragma once
// The Gaussian measure of the shifted Hamiltonian (Gaussian free field in the
// eigenbasis), Gibbs reweighting with the mass cutoff, and the
// measure-invariance experiment for the truncated flow.

#include <cstdint>
#include <optional>
#include <string>

#include "anls/nls.hpp"

namespace anls {

struct GffSampler {
  const SpectralDecomposition* spec = nullptr;
  double shift = 0.0;  // mode variances 1/(lambda_n - shift)
  int mode_cap = 0;
  std::vector<double> variances;

  // Default shift lambda_1 - 1 gives variances 1/(lambda_n - lambda_1 + 1);
  // an explicit shift must keep every variance positive and finite.
  explicit GffSampler(const SpectralDecomposition& spec, int mode_cap = -1,
                      std::optional<double> shift = std::nullopt);
};

// c_n independent circular complex Gaussians with E|c_n|^2 = 1/(lambda_n - shift),
// deterministic under (seed, index).
EigenState sample_gff_coeffs(const GffSampler& s, uint64_t seed, uint64_t index);
FourierField sample_gff_field(const GffSampler& s, uint64_t seed, uint64_t index);
std::vector<FourierField> sample_gff(const GffSampler& s, int count, uint64_t seed);

struct CovarianceReport {
  double max_abs_dev = 0.0;
  double stderr_at_max = 0.0;
  int n_samples = 0;
};

// Monte Carlo E[phi(x) conj(phi(y))] against the analytic
// sum_n e_n(x) conj(e_n(y)) / (lambda_n - shift) over all point pairs.
CovarianceReport covariance_check(const GffSampler& s, const std::vector<double>& points,
                                  int n_samples, uint64_t seed);

struct SlopeStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int n = 0;
};

SlopeStats gff_regularity(const GffSampler& s, int n_samples, const DyadicAnalysis& da, int j_min,
                          int j_max, uint64_t seed);

struct GibbsEnsemble {
  std::vector<EigenState> samples;
  std::vector<double> weights;  // 1[||u|| <= B] exp((1-lambda1)||u||^2 - lambda ||u||_m^m)
  double mass_cutoff = 0.0;     // B; infinity in defocusing mode
  double lambda = 0.0;
  int power_m = 0;
  double lambda1 = 0.0;
  int mode_cap = 0;
  uint64_t seed = 0;
  double ess = 0.0;           // (sum w)^2 / sum w^2
  double z_estimate = 0.0;    // mean weight
  double z_stderr = 0.0;
  bool cutoff_too_tight = false;  // fewer than 5% of weights nonzero
};

// Focusing (lambda < 0) requires a finite cutoff and m <= 6 (m = 6 warns that
// a small cutoff is required); defocusing permits B = infinity.
GibbsEnsemble gibbs_weights(const SpectralDecomposition& spec, std::vector<EigenState> samples,
                            double lambda, int power_m, double mass_cutoff, double lambda1,
                            uint64_t seed = 0);

enum class Observable { mass, l4, mode1, h14 };

Observable observable_from_name(const std::string& name);
const char* observable_name(Observable f);
double eval_observable(const SpectralDecomposition& spec, const EigenState& c, Observable f);

struct ObservableReport {
  std::string name;
  double mean_t0 = 0.0;
  double mean_T = 0.0;
  double delta = 0.0;
  double sigma_boot = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool pass = false;  // |delta| <= 3 sigma_boot
};

struct InvarianceReport {
  std::vector<ObservableReport> observables;
  int n_samples = 0;
  int blowups = 0;
  double ess = 0.0;
  bool pass = false;  // all observables pass and no blowups
};

// Evolves every ensemble member to time T with the truncated flow (or a
// caller-supplied map, used by the negative control), then compares
// self-normalized weighted means at t = 0 and t = T with percentile-bootstrap
// uncertainties (resampling sample indices, n_bootstrap >= 500). Blown-up
// trajectories are excluded and counted; a pass requires zero.
InvarianceReport invariance_experiment(
    const GibbsEnsemble& ens, const NlsRun& run, const std::vector<Observable>& observables,
    double horizon, int n_bootstrap, uint64_t seed, int n_threads = 1,
    const std::function<EigenState(const EigenState&)>& flow_override = nullptr);

}  // namespace anls
