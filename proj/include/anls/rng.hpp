#pragma once
// Deterministic counter-seeded random streams.
//
// Every ensemble draws one independent stream per (master seed, tag, item index),
// so adding items or changing the worker count never perturbs existing draws.
// xoshiro256++ core with a splitmix64 seeding stage; Box-Muller normals so the
// byte stream does not depend on the standard library's unspecified
// distribution algorithms.

#include <complex>
#include <cstdint>
#include <string_view>

namespace anls {

uint64_t splitmix64_next(uint64_t& state);
uint64_t fnv1a64(std::string_view s);

class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  // Circularly symmetric complex normal with E|z|^2 = total_variance.
  std::complex<double> normal_complex(double total_variance = 1.0);

 private:
  uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Independent stream for item `index` of the ensemble identified by `tag`.
Rng derive_stream(uint64_t master_seed, std::string_view tag, uint64_t index);

}  // namespace anls
