#pragma once
// Bony product operators built from Littlewood-Paley blocks: the paraproduct
// P_u v (low-high), the resonant part Pi(u, v) (frequency-balanced) and the
// low-frequency-truncated paraproduct P^N_u v. Block-pair products are formed
// on a dealiased grid and the result keeps the full product band 2M, so the
// exact decomposition u v = P_u v + Pi(u, v) + P_v u holds coefficientwise.

#include <functional>

#include "anls/dyadic.hpp"

namespace anls {

// Block pair admissibility for the N-truncation: 2^{max(j,0)} >= N, which
// leaves N = 1 unrestricted and N > 2^{J+1} empty.
bool block_admissible(int j, int trunc_n);

// Generic driver: sum over block pairs (n, m) with pred(n, m) of
// Delta_n u * Delta_m v; output band 2M.
FourierField bony_sum(const FourierField& u, const FourierField& v, const DyadicAnalysis& da,
                      const std::function<bool(int, int)>& pred);

// P_u v = sum_{n < m-1} Delta_n u Delta_m v.
FourierField paraproduct(const FourierField& u, const FourierField& v, const DyadicAnalysis& da);

// Pi(u, v) = sum_{|n-m| <= 1} Delta_n u Delta_m v.
FourierField resonant(const FourierField& u, const FourierField& v, const DyadicAnalysis& da);

// P^N_u v: pairs restricted to blocks with 2^n, 2^m >= N; N a power of two.
FourierField truncated_paraproduct(const FourierField& u, const FourierField& v, int trunc_n,
                                   const DyadicAnalysis& da);

}  // namespace anls
