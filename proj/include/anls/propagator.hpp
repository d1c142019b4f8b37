#pragma once
// Linear Schroedinger propagators through the spectral calculus:
// e^{-i t H} u0 = sum_n e^{-i t lambda_n} <u0, e_n> e_n, and the conjugated
// propagator Phi o e^{-i t H} o Gamma (not unitary: Gamma is invertible but
// not unitary).

#include "anls/paracontrolled.hpp"

namespace anls {

class PropagatorPlan {
 public:
  // direction +1 realizes e^{-i t H}; -1 the time-reversed group.
  explicit PropagatorPlan(const SpectralDecomposition& spec, double direction = +1.0);

  const SpectralDecomposition& spec() const { return *spec_; }
  double direction() const { return direction_; }

  // Eigen-coefficients of u0, cached against repeated propagation of the
  // same state (single-trajectory use; not thread-safe by design).
  const std::vector<cplx>& eigen_state(const FourierField& u0) const;
  FourierField evolve(std::span<const cplx> state, double t) const;
  FourierField propagate(const FourierField& u0, double t) const;

 private:
  const SpectralDecomposition* spec_;
  double direction_;
  mutable std::vector<cplx> cached_source_;
  mutable std::vector<cplx> cached_coeffs_;
};

FourierField propagate_sharp(const ParacontrolledMap& map, const PropagatorPlan& plan,
                             const FourierField& v0, double t);

}  // namespace anls
