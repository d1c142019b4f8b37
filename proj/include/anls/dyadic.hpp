#pragma once
// Littlewood-Paley blocks and the Besov/Hoelder norm machinery built on them.
//
// Block layout (index j in [-1, J]):
//   sharp:  block -1 covers |k| <= 1, block j >= 0 covers 2^j < |k| <= 2^{j+1}
//           (half-open annuli; the boundary |k| = 2^{j+1} belongs to block j).
//   smooth: raised-cosine profile w(t) = cos^2(pi t / 2) on |t| <= 1 applied to
//           t = log2|k| - j; block j supported in 2^{j-1} < |k| < 2^{j+1},
//           adjacent blocks only overlap, partition of unity exact up to
//           rounding. Mode 0 sits in block -1.

#include <vector>

#include "anls/field.hpp"

namespace anls {

enum class BlockProfile { sharp, smooth };

class DyadicAnalysis {
 public:
  // num_blocks = -1 picks the smallest J >= 0 with 2^J >= max_freq.
  explicit DyadicAnalysis(int max_freq, BlockProfile profile = BlockProfile::sharp,
                          int num_blocks = -1);

  int max_freq() const { return max_freq_; }
  // Highest block index J; valid block indices are -1..J.
  int top_block() const { return top_block_; }
  int block_count() const { return top_block_ + 2; }
  BlockProfile profile() const { return profile_; }

  double multiplier(int j, int k) const;
  const std::vector<double>& multipliers(int j) const;

  // Largest deviation of sum_j multiplier_j(k) from 1 over the band.
  double partition_defect() const;

 private:
  int max_freq_;
  int top_block_;
  BlockProfile profile_;
  std::vector<std::vector<double>> mult_;  // [j + 1][k + M]
};

// Frequency projection Delta_j u.
FourierField lp_block(const FourierField& u, int j, const DyadicAnalysis& da);

// (sum_j 2^{alpha j q} ||Delta_j u||_{L^p}^q)^{1/q}; supremum over j when
// q = infinity. L^p norms by rectangle quadrature on the dealiased grid.
double besov_norm(const FourierField& u, double alpha, double p, double q,
                  const DyadicAnalysis& da);

// Estimated Hoelder exponent: minus the least-squares slope of
// log2 ||Delta_j u||_{L^inf} against j over j in [j_min, j_max].
double holder_slope(const FourierField& u, const DyadicAnalysis& da, int j_min, int j_max);

}  // namespace anls
