#include "anls/dyadic.hpp"

#include <cmath>
#include <limits>

namespace anls {

namespace {

// Raised-cosine bump on |t| < 1 with sum_{j in Z} w(t - j) = 1.
double raised_cosine(double t) {
  double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  double c = std::cos(kPi * t / 2.0);
  return c * c;
}

}  // namespace

DyadicAnalysis::DyadicAnalysis(int max_freq, BlockProfile profile, int num_blocks)
    : max_freq_(max_freq), profile_(profile) {
  if (max_freq < 1) throw ParameterError("DyadicAnalysis: max_freq must be >= 1");
  int j_min = 0;
  while ((1 << j_min) < max_freq) ++j_min;
  top_block_ = num_blocks >= 0 ? num_blocks : j_min;
  if ((1 << top_block_) < max_freq)
    throw ParameterError("DyadicAnalysis: need 2^J >= max_freq");

  mult_.assign(block_count(), std::vector<double>(2 * max_freq + 1, 0.0));
  for (int k = -max_freq; k <= max_freq; ++k) {
    int a = std::abs(k);
    if (profile_ == BlockProfile::sharp) {
      int j;
      if (a <= 1) {
        j = -1;
      } else {
        j = 0;
        while ((1 << (j + 1)) < a) ++j;  // smallest j with a <= 2^{j+1}
      }
      mult_[j + 1][k + max_freq] = 1.0;
    } else {
      if (a == 0) {
        mult_[0][k + max_freq] = 1.0;
        continue;
      }
      double t = std::log2(static_cast<double>(a));
      double assigned = 0.0;
      for (int j = 0; j <= top_block_; ++j) {
        double w = raised_cosine(t - j);
        mult_[j + 1][k + max_freq] = w;
        assigned += w;
      }
      double rest = 1.0 - assigned;  // only |k| = 1 receives anything here
      mult_[0][k + max_freq] = std::abs(rest) < 1e-15 ? 0.0 : rest;
    }
  }
}

double DyadicAnalysis::multiplier(int j, int k) const {
  if (j < -1 || j > top_block_) throw IndexError("DyadicAnalysis: block index out of range");
  if (k < -max_freq_ || k > max_freq_) throw IndexError("DyadicAnalysis: frequency out of range");
  return mult_[j + 1][k + max_freq_];
}

const std::vector<double>& DyadicAnalysis::multipliers(int j) const {
  if (j < -1 || j > top_block_) throw IndexError("DyadicAnalysis: block index out of range");
  return mult_[j + 1];
}

double DyadicAnalysis::partition_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 2 * max_freq_ + 1; ++i) {
    double s = 0.0;
    for (int j = 0; j < block_count(); ++j) s += mult_[j][i];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

FourierField lp_block(const FourierField& u, int j, const DyadicAnalysis& da) {
  if (u.max_freq() != da.max_freq()) throw ShapeError("lp_block: field/analysis band mismatch");
  if (j < -1 || j > da.top_block()) throw IndexError("lp_block: block index out of range");
  FourierField out(u.max_freq(), u.reality());
  const auto& m = da.multipliers(j);
  for (int i = 0; i < u.size(); ++i) out.coeffs()[i] = m[i] * u.coeffs()[i];
  return out;
}

double besov_norm(const FourierField& u, double alpha, double p, double q,
                  const DyadicAnalysis& da) {
  if (p < 1.0 || q < 1.0) throw ParameterError("besov_norm: p, q must be >= 1");
  if (u.max_freq() != da.max_freq()) throw ShapeError("besov_norm: band mismatch");
  bool q_inf = std::isinf(q);
  double acc = 0.0;
  for (int j = -1; j <= da.top_block(); ++j) {
    double nj = lp_norm(lp_block(u, j, da), p);
    double weighted = std::pow(2.0, alpha * j) * nj;
    if (q_inf)
      acc = std::max(acc, weighted);
    else
      acc += std::pow(weighted, q);
  }
  return q_inf ? acc : std::pow(acc, 1.0 / q);
}

double holder_slope(const FourierField& u, const DyadicAnalysis& da, int j_min, int j_max) {
  if (j_max - j_min < 3) throw ParameterError("holder_slope: need j_max - j_min >= 3");
  if (j_min < -1 || j_max > da.top_block()) throw IndexError("holder_slope: block range invalid");
  std::vector<double> xs, ys;
  for (int j = j_min; j <= j_max; ++j) {
    double nj = linf_grid_norm(lp_block(u, j, da));
    if (nj < 1e-300)
      throw DegenerateInputError("holder_slope: numerically zero block in range");
    xs.push_back(j);
    ys.push_back(std::log2(nj));
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace anls
