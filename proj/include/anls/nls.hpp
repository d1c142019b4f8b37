#pragma once
// The spectrally truncated nonlinear Schroedinger flow
//   i u_t = H u + lambda Pi_N(|u|^{m-2} u)
// in the eigenbasis of H: Strang splitting with exact substeps, the local
// Duhamel/Picard solver in the conjugated variable, a flow-invariant discrete
// energy, and Galerkin self-convergence studies.

#include "anls/propagator.hpp"

namespace anls {

enum class Scheme { strang, picard };

struct NlsRun {
  int power_m = 4;     // nonlinearity power m >= 3
  double lambda = 1.0; // coupling; sign encodes focusing (<0) / defocusing (>0)
  int n_modes = 0;     // Galerkin dimension in the eigenbasis of H
  double dt = 1e-3;
  double horizon = 1.0;
  Scheme scheme = Scheme::strang;
  const SpectralDecomposition* spec = nullptr;
  const ParacontrolledMap* map = nullptr;  // required by the picard scheme
  bool allow_aliasing = false;
  double blowup_factor = 1e6;
  double blowup_sigma = 0.5;
};

// State = eigen-coefficients on span(e_1, ..., e_{n_modes}).
using EigenState = std::vector<cplx>;

void validate(const NlsRun& run);
EigenState initial_state(const NlsRun& run, const FourierField& u0);
FourierField state_field(const NlsRun& run, const EigenState& c);
double state_mass(const EigenState& c);

// Half linear phases, exact pointwise nonlinear rotation on the dealiased
// grid followed by the eigenprojection, half linear phases. Throws
// NumericError with blowup diagnostics on NaN/overflow.
void strang_step(const NlsRun& run, EigenState& c, double t_now = 0.0);

struct Snapshot {
  double t;
  EigenState state;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  // t = 0 and every snap interval; always the final state
  double last_good_time = 0.0;
  bool blew_up = false;
};

// snap_every <= 0 keeps only the initial and final states. Blowup (H^sigma
// growth beyond blowup_factor, or non-finite values) truncates the
// trajectory and sets blew_up.
Trajectory evolve_strang(const NlsRun& run, const FourierField& u0, double snap_every = 0.0);

struct PicardResult {
  std::vector<double> times;
  std::vector<FourierField> fields;  // solution in the original variable
  int iterations = 0;
};

// Iterates the Duhamel map of the conjugated equation with trapezoid
// quadrature in s until successive trajectories differ by < 1e-9 in sup-t
// L^2; NumericError when the iteration stops contracting (three consecutive
// residual increases).
PicardResult picard_solve(const NlsRun& run, const FourierField& u0, double t_local,
                          int n_nodes = 64);

// Discrete Hamiltonian sum_n lambda_n |c_n|^2 + (2 lambda / m) ||u||_{L^m}^m
// (exactly conserved by the truncated ODE flow) and the same functional with
// the plain lambda coefficient on the potential term.
double discrete_energy(const NlsRun& run, const EigenState& c);
double discrete_energy_plain_coupling(const NlsRun& run, const EigenState& c);

struct GalerkinRow {
  int n_modes;
  double err;
};

struct GalerkinTable {
  std::vector<GalerkinRow> rows;  // all but the reference (largest) dimension
  double fitted_exponent;         // least-squares slope of log2 err vs log2 N
};

// Runs the Strang flow at each dimension in n_list with matched dt and
// reports err(N) = sup over sampled times of ||u_N - u_ref||_{H^sigma'}
// against the largest dimension.
GalerkinTable galerkin_convergence(const SpectralDecomposition& spec, int power_m, double lambda,
                                   const FourierField& u0, double horizon,
                                   const std::vector<int>& n_list, double sigma_prime, double dt);

}  // namespace anls
