#include <doctest.h>

#include <cmath>

#include "anls/dyadic.hpp"
#include "anls/potential.hpp"

using namespace anls;

TEST_SUITE_BEGIN("potential");

TEST_CASE("white noise is deterministic under the seed") {
  Potential a = white_noise(64, 12345);
  Potential b = white_noise(64, 12345);
  for (int i = 0; i < a.field.size(); ++i) CHECK(a.field.coeffs()[i] == b.field.coeffs()[i]);
  Potential c = white_noise(64, 12346);
  CHECK((a.field - c.field).l2_norm() > 0.0);
  CHECK(a.kappa_nominal == 0.49);
  CHECK(a.field.check_reality(1e-15));
}

TEST_CASE("white noise mode variances match the definition") {
  // ensemble of 500 samples at M = 256; E|xi_k|^2 = 1, sd of |xi|^2 is 1
  const int ns = 500;
  std::vector<double> mean(11, 0.0);
  for (int s = 0; s < ns; ++s) {
    Potential v = white_noise(256, 9000 + s);
    for (int k = 1; k <= 10; ++k) mean[k] += std::norm(v.field(k)) / ns;
  }
  double se = 1.0 / std::sqrt(static_cast<double>(ns));
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(mean[k] - 1.0) <= 3.0 * se);
}

TEST_CASE("white noise passes a chi-square goodness of fit") {
  // re/im of sqrt(2) xi_k pooled over k in [1,50], 500 samples, 14 cells;
  // chi^2_{0.99}(13) = 27.688
  const std::vector<double> edges = {-3, -2.5, -2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2, 2.5, 3};
  std::vector<double> counts(edges.size() + 1, 0.0);
  double total = 0;
  for (int s = 0; s < 500; ++s) {
    Potential v = white_noise(64, 5000 + s);
    for (int k = 1; k <= 50; ++k)
      for (double val : {v.field(k).real() * std::sqrt(2.0), v.field(k).imag() * std::sqrt(2.0)}) {
        size_t cell = 0;
        while (cell < edges.size() && val > edges[cell]) ++cell;
        counts[cell] += 1;
        total += 1;
      }
  }
  auto cdf = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
  double chi2 = 0;
  for (size_t c = 0; c < counts.size(); ++c) {
    double lo = c == 0 ? 0.0 : cdf(edges[c - 1]);
    double hi = c == edges.size() ? 1.0 : cdf(edges[c]);
    double expect = total * (hi - lo);
    chi2 += (counts[c] - expect) * (counts[c] - expect) / expect;
  }
  CHECK(chi2 < 27.688);
}

TEST_CASE("white noise regularity slope") {
  const int m = 1 << 10;
  DyadicAnalysis da(m, BlockProfile::sharp);
  double mean = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s)
    mean += holder_slope(white_noise(m, 1000 + s).field, da, 3, 8) / seeds;
  CHECK(mean >= -0.65);
  CHECK(mean <= -0.35);
}

TEST_CASE("oscillatory potential") {
  Potential v1 = oscillatory(1, 0.5);
  CHECK(v1.field(1) == cplx(0.5, 0.0));
  CHECK(v1.field(-1) == cplx(0.5, 0.0));
  CHECK(v1.field(0) == cplx(0.0, 0.0));
  CHECK(v1.field.reality_defect() == 0.0);

  Potential v = oscillatory(1 << 10, 0.5);
  DyadicAnalysis da(1 << 10, BlockProfile::sharp);
  CHECK(holder_slope(v.field, da, 3, 8) == doctest::Approx(-0.5).epsilon(0.2));

  CHECK_THROWS_AS(oscillatory(16, 0.0), ParameterError);
  CHECK_THROWS_AS(oscillatory(16, 1.0), ParameterError);
  CHECK_THROWS_AS(oscillatory(0, 0.5), ParameterError);
}

TEST_CASE("reference field construction") {
  // mean-only potential gives X = 0
  FourierField f(8, true);
  f(0) = 3.0;
  ReferenceField x0 = build_reference(custom_potential(f, 0.5));
  CHECK(x0.x.l2_norm() == 0.0);

  FourierField g(8, true);
  g(1) = 1.0;
  g(-1) = 1.0;
  ReferenceField x1 = build_reference(custom_potential(g, 0.5));
  CHECK(x1.x(1).real() == doctest::Approx(-1.0 / (4.0 * kPi * kPi)));
  CHECK(x1.x(0) == cplx(0.0, 0.0));
}

TEST_CASE("laplacian of X recovers the mean-free potential") {
  for (uint64_t s : {1u, 2u, 3u}) {
    Potential v = white_noise(128, s);
    ReferenceField x = build_reference(v);
    FourierField lap = x.x.laplacian();  // d^2/dx^2 X = V - <V,1>
    double scale = v.field.linf_coeff();
    for (int k = -128; k <= 128; ++k) {
      cplx want = k == 0 ? cplx{0.0, 0.0} : v.field(k);
      CHECK(std::abs(lap(k) - want) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("X regularity and the two-derivative gain") {
  const int m = 1 << 10;
  DyadicAnalysis da(m, BlockProfile::sharp);
  double mean_x = 0, mean_gain = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    Potential v = white_noise(m, 2000 + s);
    double sv = holder_slope(v.field, da, 3, 8);
    double sx = holder_slope(build_reference(v).x, da, 3, 8);
    mean_x += sx / seeds;
    mean_gain += (sx - sv) / seeds;
  }
  CHECK(mean_x >= 1.2);
  CHECK(mean_x <= 1.7);
  CHECK(mean_gain >= 1.7);
  CHECK(mean_gain <= 2.3);
}

TEST_SUITE_END();
