#include "anls/potential.hpp"

#include <cmath>

#include "anls/rng.hpp"

namespace anls {

Potential white_noise(int max_freq, uint64_t seed) {
  if (max_freq < 1) throw ParameterError("white_noise: max_freq must be >= 1");
  Rng rng = derive_stream(seed, "white-noise", 0);
  FourierField f(max_freq, true);
  f(0) = cplx(rng.normal(), 0.0);
  for (int k = 1; k <= max_freq; ++k) {
    cplx z = rng.normal_complex(1.0);
    f(k) = z;
    f(-k) = std::conj(z);
  }
  return Potential{std::move(f), 0.49, PotentialKind::white_noise, seed};
}

Potential oscillatory(int max_freq, double kappa) {
  if (max_freq < 1) throw ParameterError("oscillatory: max_freq must be >= 1");
  if (!(kappa > 0.0 && kappa < 1.0)) throw ParameterError("oscillatory: kappa must be in (0,1)");
  FourierField f(max_freq, true);
  for (int n = 1; n <= max_freq; ++n) {
    double vn = std::pow(static_cast<double>(n), -kappa);
    f(n) = cplx(0.5 * vn, 0.0);  // v_n cos(2 pi n x) = v_n/2 (e_n + e_{-n})
    f(-n) = cplx(0.5 * vn, 0.0);
  }
  return Potential{std::move(f), kappa, PotentialKind::oscillatory, 0};
}

Potential custom_potential(FourierField field, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ParameterError("custom_potential: kappa must be in (0,1)");
  return Potential{std::move(field), kappa, PotentialKind::custom, 0};
}

const char* potential_kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::white_noise: return "white";
    case PotentialKind::oscillatory: return "osc";
    case PotentialKind::custom: return "custom";
  }
  return "custom";
}

PotentialKind potential_kind_from_name(const std::string& name) {
  if (name == "white") return PotentialKind::white_noise;
  if (name == "osc") return PotentialKind::oscillatory;
  if (name == "custom") return PotentialKind::custom;
  throw ParameterError("unknown potential kind: " + name);
}

ReferenceField build_reference(const Potential& v, int target_max_freq) {
  int m = target_max_freq < 0 ? v.field.max_freq() : target_max_freq;
  Potential src = v;
  src.field = v.field.band_limited(m);
  FourierField x(m, v.field.reality());
  for (int k = -m; k <= m; ++k) {
    if (k == 0) continue;
    x(k) = -src.field(k) / minus_laplace_symbol(k);
  }
  return ReferenceField{std::move(x), std::move(src)};
}

}  // namespace anls
