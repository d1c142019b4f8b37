#pragma once
// Distributional potentials of Hoelder class C^{-1+kappa} on the circle
// (white noise, oscillatory cosine series, user-supplied) and the
// antiderivative-squared reference field X solving d^2/dx^2 X = V - <V,1>.

#include <cstdint>
#include <string>

#include "anls/field.hpp"

namespace anls {

enum class PotentialKind { white_noise, oscillatory, custom };

struct Potential {
  FourierField field;    // reality set
  double kappa_nominal;  // advertised regularity gap: V in C^{-1+kappa}
  PotentialKind kind;
  uint64_t seed = 0;  // white_noise only
};

// Spatial white noise: mode 0 real standard normal, modes k >= 1 circular
// complex normal with E|xi_k|^2 = 1 (independent re/im of variance 1/2),
// conjugate symmetry. Advertised kappa = 0.49.
Potential white_noise(int max_freq, uint64_t seed);

// V(x) = sum_{1 <= n <= M} n^{-kappa} cos(2 pi n x); block sup norms scale
// like 2^{j(1-kappa)}. kappa must lie in (0, 1).
Potential oscillatory(int max_freq, double kappa);

// Wrap a loaded field; no smoothing applied.
Potential custom_potential(FourierField field, double kappa);

const char* potential_kind_name(PotentialKind k);
PotentialKind potential_kind_from_name(const std::string& name);

struct ReferenceField {
  FourierField x;    // X, mean-free
  Potential source;  // band-matched view of the generating potential
};

// X^(k) = -V^(k) / (4 pi^2 k^2) for k != 0, X^(0) = 0. A target band below
// the potential's own band truncates both X and the stored source view.
ReferenceField build_reference(const Potential& v, int target_max_freq = -1);

}  // namespace anls
