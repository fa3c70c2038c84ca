#include "common.hpp"
#include "oracles/sphere2_oracle.hpp"

#include "heatgen/errors.hpp"
#include "heatgen/heat_invariants.hpp"
#include "heatgen/space_catalog.hpp"

#include <doctest.h>

#include <cmath>

using namespace heatgen;

TEST_CASE("S2 coefficients") {
  const auto report = heat_coefficients(builtin("S2"), 4);
  CHECK(report.a == Qs({"1", "1/3", "1/15", "4/315", "1/315"}));
  CHECK(report.passed());
  CHECK(report.a == oracle::sphere2_coefficients(4));
}

TEST_CASE("S2 agrees with the scalar oracle to high order") {
  CHECK(heat_coefficients(builtin("S2"), 8).a == oracle::sphere2_coefficients(8));
}

TEST_CASE("S3 coefficients are 1/k!") {
  const auto report = heat_coefficients(builtin("S3"), 5);
  CHECK(report.a == Qs({"1", "1", "1/2", "1/6", "1/24", "1/120"}));
}

TEST_CASE("higher spheres and products to second order") {
  CHECK(heat_coefficients(builtin("S4"), 2).a == Qs({"1", "2", "29/15"}));
  CHECK(heat_coefficients(builtin("S5"), 2).a == Qs({"1", "10/3", "16/3"}));
  CHECK(heat_coefficients(builtin("S2xS2"), 2).a == Qs({"1", "2/3", "11/45"}));
  CHECK(heat_coefficients(builtin("S2xS3"), 2).a == Qs({"1", "4/3", "9/10"}));
}

TEST_CASE("flat space has a_k = 0 beyond a_0") {
  CHECK(heat_coefficients(flat(3), 4).a == Qs({"1", "0", "0", "0", "0"}));
}

TEST_CASE("a1 and a2 match the curvature contraction") {
  for (const char *name : {"S2", "S3", "S4", "S5", "S2xS2", "S2xS3"}) {
    CAPTURE(name);
    const auto spec = builtin(name);
    const auto report = heat_coefficients(spec, 2);
    const auto ref = gilkey_reference(spec);
    CHECK(report.a[1] == ref.a1);
    CHECK(report.a[2] == ref.a2);
  }
}

TEST_CASE("product law") {
  const auto s2 = heat_coefficients(builtin("S2"), 4);
  const auto s3 = heat_coefficients(builtin("S3"), 4);
  const std::vector<HeatReport> twice{s2, s2};
  CHECK(product_factorize(twice, 4) == heat_coefficients(builtin("S2xS2"), 4).a);
  const std::vector<HeatReport> mixed{s2, s3};
  CHECK(product_factorize(mixed, 3) == heat_coefficients(builtin("S2xS3"), 3).a);
  CHECK_THROWS_AS(product_factorize(mixed, 5), OrderMismatch);
}

TEST_CASE("rescaled sphere coefficients scale with curvature") {
  // beta -> c beta multiplies the curvature by c, so a_k -> c^k a_k
  auto spec = builtin("S2");
  spec.beta = 3 * spec.beta;
  const auto scaled = heat_coefficients(spec, 4).a;
  const auto base = heat_coefficients(builtin("S2"), 4).a;
  Rational c = 1;
  for (std::size_t k = 0; k <= 4; ++k) {
    CHECK(scaled[k] == c * base[k]);
    c *= 3;
  }
}

TEST_CASE("invalid data are refused") {
  auto spec = builtin("S3");
  spec.beta(0, 0) = 2;
  CHECK_THROWS_AS(heat_coefficients(spec, 2), ValidationError);
}

TEST_CASE("sphere spectrum") {
  CHECK_THROWS_AS(sphere_spectral_trace(2, 0.0), NonPositiveT);
  CHECK_THROWS(sphere_spectral_trace(7, 0.1));
  for (std::size_t n = 2; n <= 6; ++n) {
    CAPTURE(n);
    const auto fit = fit_sphere_spectrum(n);
    CHECK(std::abs(fit.a0 - 1) < 1e-6);
    CHECK(std::abs(fit.a1 - static_cast<double>(n * (n - 1)) / 6) < 1e-4);
  }
}

TEST_CASE("unit sphere detection") {
  CHECK(unit_sphere_dimension(builtin("S4")) == 4u);
  CHECK_FALSE(unit_sphere_dimension(builtin("S2xS2")).has_value());
  CHECK_FALSE(unit_sphere_dimension(flat(3)).has_value());
  auto spec = builtin("S2");
  spec.beta = 2 * spec.beta;
  CHECK_FALSE(unit_sphere_dimension(spec).has_value());
}

TEST_CASE("compare attaches every applicable check") {
  const std::vector<double> ts{0.05};
  const auto report = compare(builtin("S2"), 4, ts);
  CHECK(report.passed());
  std::vector<std::string> names;
  for (const auto &c : report.checks)
    names.push_back(c.name);
  const std::vector<std::string> expected{"a0",        "prefactor-identity", "a1-gilkey",      "a2-gilkey",
                                          "numeric t=0.05 (quadrature)", "spectral-fit", "spectral t=0.05"};
  CHECK(names == expected);

  const auto prod = compare(builtin("S2xS2"), 3, ts);
  CHECK(prod.passed());
  CHECK(prod.checks.back().name == "product-factorization");
}

TEST_CASE("compare reports numeric failures instead of throwing") {
  const std::vector<double> ts{40.0};
  CompareOptions opt;
  const auto report = compare(builtin("S2"), 2, ts, opt);
  CHECK_FALSE(report.passed());
}
