#pragma once
// Empirical Strichartz-type dispersive ratios for the conjugated propagator
// and the critical local well-posedness threshold.

#include <cstdint>

#include "anls/propagator.hpp"

namespace anls {

// sigma_kappa(m): 1/3 - kappa/6 for m <= 8, (4-kappa)/6 - 2/(m-2) above;
// the two branches agree at m = 8.
double sigma_critical(int power_m, double kappa);

struct StrichartzStats {
  int block = 0;
  int n_samples = 0;
  double mean_q = 0.0;
  double max_q = 0.0;
  double stderr_q = 0.0;
};

// For each sample: u0 complex Gaussian supported on the sharp annulus of
// block j, unit L^2; Q = ||Phi e^{-itH} Gamma u0||_{L^6([0,1]xT)} divided by
// ||u0||_{H^{(1-kappa)/6 + eps}}. Trapezoid in time (n_time >= 64 nodes),
// rectangle quadrature in space.
StrichartzStats strichartz_ratio(const ParacontrolledMap& map, const PropagatorPlan& plan,
                                 double kappa, double eps, int block_j, int n_samples, int n_time,
                                 uint64_t seed);

}  // namespace anls
