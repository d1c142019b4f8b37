#include "anls/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anls/fft.hpp"

namespace anls {

FourierField::FourierField(int max_freq, bool reality)
    : max_freq_(max_freq), reality_(reality), coeffs_(2 * max_freq + 1, cplx{0.0, 0.0}) {
  if (max_freq < 0) throw ParameterError("FourierField: max_freq must be >= 0");
}

FourierField FourierField::zero(int max_freq, bool reality) {
  return FourierField(max_freq, reality);
}

cplx& FourierField::at(int k) {
  if (k < -max_freq_ || k > max_freq_) throw IndexError("FourierField: frequency out of range");
  return coeffs_[k + max_freq_];
}

const cplx& FourierField::at(int k) const {
  if (k < -max_freq_ || k > max_freq_) throw IndexError("FourierField: frequency out of range");
  return coeffs_[k + max_freq_];
}

double FourierField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double FourierField::linf_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx FourierField::inner(const FourierField& other) const {
  if (other.max_freq_ != max_freq_) throw ShapeError("inner: mismatched max_freq");
  cplx s{0.0, 0.0};
  for (int i = 0; i < size(); ++i) s += coeffs_[i] * std::conj(other.coeffs_[i]);
  return s;
}

FourierField FourierField::derivative() const {
  FourierField out(max_freq_, false);
  for (int k = -max_freq_; k <= max_freq_; ++k)
    out(k) = cplx(0.0, kTwoPi * k) * (*this)(k);
  out.reality_ = reality_;
  return out;
}

FourierField FourierField::laplacian() const {
  FourierField out(max_freq_, reality_);
  for (int k = -max_freq_; k <= max_freq_; ++k)
    out(k) = -minus_laplace_symbol(k) * (*this)(k);
  return out;
}

FourierField FourierField::conj() const {
  FourierField out(max_freq_, reality_);
  for (int k = -max_freq_; k <= max_freq_; ++k) out(k) = std::conj((*this)(-k));
  return out;
}

FourierField FourierField::band_limited(int new_max_freq) const {
  FourierField out(new_max_freq, reality_);
  int m = std::min(max_freq_, new_max_freq);
  for (int k = -m; k <= m; ++k) out(k) = (*this)(k);
  return out;
}

double FourierField::reality_defect() const {
  double scale = linf_coeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int k = 0; k <= max_freq_; ++k)
    worst = std::max(worst, std::abs((*this)(-k) - std::conj((*this)(k))));
  return worst / scale;
}

std::vector<cplx> FourierField::to_grid(int n) const {
  if (n < size()) throw ParameterError("to_grid: grid must resolve the band (n >= 2M+1)");
  std::vector<cplx> bins(n, cplx{0.0, 0.0});
  for (int k = -max_freq_; k <= max_freq_; ++k)
    bins[(k % n + n) % n] += (*this)(k);
  fft::dft(bins, +1);
  return bins;
}

FourierField FourierField::from_grid(const std::vector<cplx>& values, int max_freq, bool reality) {
  int n = static_cast<int>(values.size());
  if (n < 2 * max_freq + 1) throw ParameterError("from_grid: grid must resolve the band");
  std::vector<cplx> bins = values;
  fft::dft(bins, -1);
  FourierField out(max_freq, reality);
  double inv_n = 1.0 / n;
  for (int k = -max_freq; k <= max_freq; ++k)
    out(k) = bins[(k % n + n) % n] * inv_n;
  return out;
}

cplx FourierField::value_at(double x) const {
  cplx s{0.0, 0.0};
  for (int k = -max_freq_; k <= max_freq_; ++k)
    s += (*this)(k)*std::polar(1.0, kTwoPi * k * x);
  return s;
}

FourierField& FourierField::operator+=(const FourierField& o) {
  if (o.max_freq_ != max_freq_) throw ShapeError("+=: mismatched max_freq");
  for (int i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
  reality_ = reality_ && o.reality_;
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  if (o.max_freq_ != max_freq_) throw ShapeError("-=: mismatched max_freq");
  for (int i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
  reality_ = reality_ && o.reality_;
  return *this;
}

FourierField& FourierField::operator*=(cplx a) {
  for (auto& c : coeffs_) c *= a;
  if (a.imag() != 0.0) reality_ = false;
  return *this;
}

int dealias_grid_size(int max_freq, int fold) {
  if (fold < 1) throw ParameterError("dealias_grid_size: fold must be >= 1");
  return next_pow2(fold * (2 * max_freq + 1) + 1);
}

double lp_norm(const FourierField& u, double p, int grid_n) {
  if (p < 1.0) throw ParameterError("lp_norm: p must be >= 1");
  int n = grid_n > 0 ? grid_n : dealias_grid_size(u.max_freq());
  if (n < 2 * (2 * u.max_freq() + 1)) throw ParameterError("lp_norm: grid too small");
  auto vals = u.to_grid(n);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& v : vals) s += std::norm(v);
    return std::sqrt(s / n);
  }
  double s = 0.0;
  for (const auto& v : vals) s += std::pow(std::abs(v), p);
  return std::pow(s / n, 1.0 / p);
}

double linf_grid_norm(const FourierField& u, int grid_n) {
  return lp_norm(u, std::numeric_limits<double>::infinity(), grid_n);
}

double sobolev_norm(const FourierField& u, double sigma) {
  double s = 0.0;
  for (int k = -u.max_freq(); k <= u.max_freq(); ++k)
    s += std::pow(1.0 + minus_laplace_symbol(k), sigma) * std::norm(u(k));
  return std::sqrt(s);
}

FourierField grid_product(const FourierField& u, const FourierField& v, int out_max_freq) {
  int band = u.max_freq() + v.max_freq();
  if (out_max_freq < 0) out_max_freq = band;
  // Exact: no alias wraps into [-band, band] when n >= 2*band + 1.
  int n = std::max(dealias_grid_size(std::max(u.max_freq(), v.max_freq())), 2 * band + 1);
  n = next_pow2(n);
  auto a = u.to_grid(n);
  auto b = v.to_grid(n);
  for (int i = 0; i < n; ++i) a[i] *= b[i];
  return FourierField::from_grid(a, out_max_freq, u.reality() && v.reality());
}

}  // namespace anls
