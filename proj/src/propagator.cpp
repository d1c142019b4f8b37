#include "anls/propagator.hpp"

#include <cstring>

namespace anls {

PropagatorPlan::PropagatorPlan(const SpectralDecomposition& spec, double direction)
    : spec_(&spec), direction_(direction) {}

const std::vector<cplx>& PropagatorPlan::eigen_state(const FourierField& u0) const {
  if (u0.max_freq() != spec_->max_freq) throw ShapeError("propagate: band mismatch");
  const auto c = u0.coeffs();
  if (cached_source_.size() == c.size() &&
      std::memcmp(cached_source_.data(), c.data(), c.size() * sizeof(cplx)) == 0)
    return cached_coeffs_;
  cached_source_.assign(c.begin(), c.end());
  cached_coeffs_ = spec_->eigen_coeffs(u0);
  return cached_coeffs_;
}

FourierField PropagatorPlan::evolve(std::span<const cplx> state, double t) const {
  std::vector<cplx> a(state.begin(), state.end());
  for (size_t n = 0; n < a.size(); ++n)
    a[n] *= std::polar(1.0, -direction_ * t * spec_->eigenvalues[n]);
  return spec_->synthesize(a);
}

FourierField PropagatorPlan::propagate(const FourierField& u0, double t) const {
  return evolve(eigen_state(u0), t);
}

FourierField propagate_sharp(const ParacontrolledMap& map, const PropagatorPlan& plan,
                             const FourierField& v0, double t) {
  const int mh = plan.spec().max_freq;
  const int mx = map.max_freq();
  if (v0.max_freq() != mh) throw ShapeError("propagate_sharp: band mismatch");
  if (mx < mh) throw ShapeError("propagate_sharp: map band below operator band");
  FourierField u = map.gamma(v0.band_limited(mx)).band_limited(mh);
  FourierField w = plan.propagate(u, t);
  return map.phi(w.band_limited(mx)).band_limited(mh);
}

}  // namespace anls
