#include "anls/paraproduct.hpp"

#include <algorithm>
#include <cmath>

namespace anls {

bool block_admissible(int j, int trunc_n) {
  return (1 << std::max(j, 0)) >= trunc_n;
}

FourierField bony_sum(const FourierField& u, const FourierField& v, const DyadicAnalysis& da,
                      const std::function<bool(int, int)>& pred) {
  if (u.max_freq() != v.max_freq()) throw ShapeError("bony_sum: mismatched max_freq");
  if (u.max_freq() != da.max_freq()) throw ShapeError("bony_sum: field/analysis band mismatch");
  const int M = u.max_freq();
  const int n_grid = next_pow2(4 * M + 3);  // resolves the full product band 2M

  const int nb = da.block_count();
  std::vector<std::vector<cplx>> gu(nb), gv(nb);
  std::vector<bool> used_u(nb, false), used_v(nb, false);
  for (int n = -1; n <= da.top_block(); ++n)
    for (int m = -1; m <= da.top_block(); ++m)
      if (pred(n, m)) used_u[n + 1] = used_v[m + 1] = true;
  for (int j = -1; j <= da.top_block(); ++j) {
    if (used_u[j + 1]) gu[j + 1] = lp_block(u, j, da).to_grid(n_grid);
    if (used_v[j + 1]) gv[j + 1] = lp_block(v, j, da).to_grid(n_grid);
  }

  std::vector<cplx> acc(n_grid, cplx{0.0, 0.0});
  for (int n = -1; n <= da.top_block(); ++n) {
    for (int m = -1; m <= da.top_block(); ++m) {
      if (!pred(n, m)) continue;
      const auto& a = gu[n + 1];
      const auto& b = gv[m + 1];
      for (int i = 0; i < n_grid; ++i) acc[i] += a[i] * b[i];
    }
  }
  return FourierField::from_grid(acc, 2 * M, u.reality() && v.reality());
}

FourierField paraproduct(const FourierField& u, const FourierField& v, const DyadicAnalysis& da) {
  return bony_sum(u, v, da, [](int n, int m) { return n < m - 1; });
}

FourierField resonant(const FourierField& u, const FourierField& v, const DyadicAnalysis& da) {
  return bony_sum(u, v, da, [](int n, int m) { return std::abs(n - m) <= 1; });
}

FourierField truncated_paraproduct(const FourierField& u, const FourierField& v, int trunc_n,
                                   const DyadicAnalysis& da) {
  if (!is_pow2(trunc_n)) throw ParameterError("truncated_paraproduct: N must be a power of two");
  return bony_sum(u, v, da, [trunc_n](int n, int m) {
    return n < m - 1 && block_admissible(n, trunc_n) && block_admissible(m, trunc_n);
  });
}

}  // namespace anls
