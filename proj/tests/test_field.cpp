#include <doctest.h>

#include "anls/field.hpp"
#include "anls/io.hpp"
#include "anls/rng.hpp"

using namespace anls;

namespace {

FourierField random_real_field(int m, uint64_t seed) {
  Rng rng = derive_stream(seed, "test-field", 0);
  FourierField f(m, true);
  f(0) = cplx(rng.normal(), 0.0);
  for (int k = 1; k <= m; ++k) {
    cplx z = rng.normal_complex();
    f(k) = z;
    f(-k) = std::conj(z);
  }
  return f;
}

FourierField random_complex_field(int m, uint64_t seed) {
  Rng rng = derive_stream(seed, "test-field-c", 0);
  FourierField f(m);
  for (auto& c : f.coeffs()) c = rng.normal_complex();
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("field");

TEST_CASE("coefficient layout and bounds") {
  FourierField f(3);
  CHECK(f.size() == 7);
  f.at(-3) = cplx(1.0, 2.0);
  CHECK(f(-3) == cplx(1.0, 2.0));
  CHECK_THROWS_AS((void)f.at(4), IndexError);
}

TEST_CASE("Parseval: frequency and grid L2 norms agree") {
  for (int m : {4, 32, 129}) {
    FourierField f = random_complex_field(m, m);
    double freq = f.l2_norm();
    double grid = lp_norm(f, 2.0);
    CHECK(std::abs(freq - grid) <= 1e-10 * freq);
  }
}

TEST_CASE("reality flag matches conjugate symmetry") {
  FourierField f = random_real_field(16, 7);
  CHECK(f.check_reality(1e-12));
  auto vals = f.to_grid(64);
  double max_imag = 0.0;
  for (const auto& v : vals) max_imag = std::max(max_imag, std::abs(v.imag()));
  CHECK(max_imag < 1e-12);

  f(3) += cplx(0.0, 0.5);  // break symmetry
  CHECK_FALSE(f.check_reality(1e-12));
}

TEST_CASE("grid round trip is exact for band-limited data") {
  FourierField f = random_complex_field(21, 3);
  auto vals = f.to_grid(64);
  FourierField back = FourierField::from_grid(vals, 21);
  double err = (back - f).l2_norm();
  CHECK(err <= 1e-12 * f.l2_norm());
}

TEST_CASE("derivative and laplacian symbols") {
  FourierField f(5);
  f(2) = 1.0;
  FourierField d = f.derivative();
  CHECK(d(2) == cplx(0.0, kTwoPi * 2));
  FourierField l = f.laplacian();
  CHECK(l(2).real() == doctest::Approx(-4.0 * kPi * kPi * 4.0));
}

TEST_CASE("value_at matches grid evaluation") {
  FourierField f = random_complex_field(8, 11);
  auto vals = f.to_grid(32);
  for (int i : {0, 5, 17}) {
    cplx direct = f.value_at(i / 32.0);
    CHECK(std::abs(direct - vals[i]) < 1e-10);
  }
}

TEST_CASE("grid_product matches convolution on a small case") {
  FourierField u(2), v(2);
  u(1) = cplx(1.0, 0.0);
  v(1) = cplx(0.0, 2.0);
  v(-2) = cplx(3.0, 0.0);
  FourierField p = grid_product(u, v);
  CHECK(p.max_freq() == 4);
  CHECK(std::abs(p(2) - cplx(0.0, 2.0)) < 1e-13);
  CHECK(std::abs(p(-1) - cplx(3.0, 0.0)) < 1e-13);
  CHECK(std::abs(p(0)) < 1e-13);
}

TEST_CASE("sobolev norm weights") {
  FourierField f(4);
  f(0) = 1.0;
  CHECK(sobolev_norm(f, 2.5) == doctest::Approx(1.0));
  f(0) = 0.0;
  f(3) = 1.0;
  double w = 1.0 + minus_laplace_symbol(3);
  CHECK(sobolev_norm(f, 0.5) == doctest::Approx(std::pow(w, 0.25)));
}

TEST_CASE("field record round trip") {
  FourierField f = random_real_field(12, 99);
  auto j = field_to_json(f);
  FourierField g = field_from_json(j);
  CHECK(g.max_freq() == f.max_freq());
  CHECK(g.reality() == f.reality());
  CHECK((g - f).l2_norm() == 0.0);
  // serialize -> parse -> serialize is byte-identical
  CHECK(field_to_json(g).dump(2) == j.dump(2));
}

TEST_CASE("lp_norm rejects p < 1 and small grids") {
  FourierField f = random_complex_field(8, 1);
  CHECK_THROWS_AS(lp_norm(f, 0.5), ParameterError);
  CHECK_THROWS_AS(lp_norm(f, 2.0, 17), ParameterError);
}

TEST_SUITE_END();
