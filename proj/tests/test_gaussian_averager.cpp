#include "common.hpp"

#include "heatgen/errors.hpp"
#include "heatgen/gaussian_averager.hpp"
#include "heatgen/space_catalog.hpp"

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace heatgen;

namespace {

// A dense positive-definite matrix L L^T + I with small integer L.
RationalMatrix dense_spd(std::size_t p, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(-2, 2);
  RationalMatrix l(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      l(i, j) = pick(rng);
  return l * l.transpose() + RationalMatrix::identity(p);
}

double gaussian_moment_1d(int degree) {
  // w ~ N(0, 2), density exp(-w^2/4) / sqrt(4 pi)
  boost::math::quadrature::sinh_sinh<double> integrator;
  const auto f = [degree](double w) { const double e = std::exp(-w * w / 4);
    return e == 0.0 ? 0.0 : std::pow(w, degree) * e;
  };
  return integrator.integrate(f) / std::sqrt(4 * std::numbers::pi);
}

} // namespace

TEST_CASE("one-dimensional moments") {
  const RationalMatrix one = RationalMatrix::identity(1);
  CHECK(wick_moment(MomentKey(1, {}), one) == 1);
  CHECK(wick_moment(MomentKey(1, {0}), one) == 0);
  CHECK(wick_moment(MomentKey(1, {0, 0}), one) == 2);
  CHECK(wick_moment(MomentKey(1, {0, 0, 0, 0}), one) == 12);
  CHECK(wick_moment(MomentKey(1, {0, 0, 0, 0, 0, 0}), one) == 120);
}

TEST_CASE("two-dimensional moments") {
  const RationalMatrix id = RationalMatrix::identity(2);
  CHECK(wick_moment(MomentKey(2, {0, 0, 1, 1}), id) == 4);
  CHECK(wick_moment(MomentKey(2, {0, 1}), id) == 0);
  const RationalMatrix corr{{1, Q("1/2")}, {Q("1/2"), 1}};
  CHECK(wick_moment(MomentKey(2, {0, 1}), corr) == 1);
  // 4 (b00 b11 + 2 b01^2)
  CHECK(wick_moment(MomentKey(2, {0, 0, 1, 1}), corr) == 6);
}

TEST_CASE("moment keys are order independent") {
  const auto b = dense_spd(3, 11);
  const std::vector<std::size_t> idx{2, 0, 1, 1, 0, 2};
  std::vector<std::size_t> perm = idx;
  std::sort(perm.begin(), perm.end());
  const Rational ref = wick_moment(MomentKey(3, idx), b);
  do {
    CHECK(wick_moment(MomentKey(3, perm), b) == ref);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const std::vector<unsigned> ex{2, 2, 2};
  CHECK(wick_moment(MomentKey::from_exponents(ex), b) == ref);
  CHECK_THROWS(MomentKey(2, {0, 2}));
}

TEST_CASE("Fock engine agrees with Wick pairing") {
  for (std::size_t p = 1; p <= 4; ++p) {
    CAPTURE(p);
    const auto b = dense_spd(p, static_cast<unsigned>(p));
    FockEngine fock(b);
    CHECK(fock.calibration() == 1);
    std::mt19937 rng(static_cast<unsigned>(100 + p));
    std::uniform_int_distribution<std::size_t> pick(0, p - 1);
    for (std::size_t degree = 0; degree <= 8; ++degree)
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::size_t> idx(degree);
        for (auto &x : idx)
          x = pick(rng);
        const MomentKey key(p, idx);
        CHECK(fock.moment(key) == wick_moment(key, b));
        CHECK(fock_moment(key, b) == wick_moment(key, b));
      }
  }
}

TEST_CASE("Wick moments match one-dimensional quadrature") {
  const RationalMatrix one = RationalMatrix::identity(1);
  for (int d = 2; d <= 8; ++d) {
    CAPTURE(d);
    const double exact = wick_moment(MomentKey(1, std::vector<std::size_t>(d, 0)), one).get_d();
    const double quad = gaussian_moment_1d(d);
    CHECK(std::abs(quad - exact) < 1e-10 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("average is linear") {
  const auto b = dense_spd(2, 3);
  OmegaPolynomial f(2, 2), g(2, 2);
  f.add(1, {2, 0}, 3);
  f.add(2, {1, 1}, Q("1/5"));
  g.add(0, {0, 0}, 1);
  g.add(2, {2, 2}, -7);
  OmegaPolynomial f2 = f;
  f2 *= Q("2/3");
  const TSeries lhs = average(f2 + g, b);
  TSeries rhs = average(f, b);
  for (auto k = 0u; k <= 2; ++k)
    rhs[k] *= Q("2/3");
  CHECK(lhs == rhs + average(g, b));
}

TEST_CASE("average keeps t-grades apart") {
  OmegaPolynomial f(1, 3);
  f.add(1, {2}, 1);
  f.add(3, {4}, 1);
  CHECK(average(f, RationalMatrix::identity(1)).coeffs() == Qs({"0", "2", "0", "12"}));
}

TEST_CASE("sinhc matrix function") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
  CHECK((sinhc(z) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -1.3, 1.3, 0;
  // eigenvalues +-1.3 i: sinh(ix)/(ix) = sin x / x
  const double expect = std::sin(1.3) / 1.3;
  CHECK(sinhc(rot).determinant() == doctest::Approx(expect * expect).epsilon(1e-14));
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(3, 3) * 9.0;
  CHECK(sinhc(big)(0, 0) == doctest::Approx(std::sinh(9.0) / 9.0).epsilon(1e-13));
}

TEST_CASE("determinant factorisation") {
  for (const char *name : {"S2", "S3", "S4", "S2xS3"}) {
    CAPTURE(name);
    const auto hol = derive_holonomy(builtin(name));
    const auto report = check_det_factorization(hol, random_omegas(hol.p, 20, 5));
    CHECK(report.samples.size() == 20);
    CHECK(report.passed());
    CHECK(report.max_rel_error < 1e-10);
  }
}

TEST_CASE("random omegas are reproducible rationals in [-1, 1]") {
  const auto a = random_omegas(3, 10, 42);
  CHECK(a == random_omegas(3, 10, 42));
  CHECK(a != random_omegas(3, 10, 43));
  for (const auto &w : a)
    for (const auto &x : w) {
      CHECK(abs(x) <= 1);
      CHECK(x.get_den() <= 1000);
    }
}

TEST_CASE("numeric average of the S2 integrand") {
  const auto spec = builtin("S2");
  const auto hol = derive_holonomy(spec);
  NumericOptions opt;
  opt.method = NumericMethod::Quadrature;
  // e^{t/4} <z/sin z> to 4th order: 1 + t/3 + t^2/15 + 4t^3/315 + t^4/315
  const double t = 0.05;
  const double series = 1 + t / 3 + t * t / 15 + 4 * std::pow(t, 3) / 315 + std::pow(t, 4) / 315;
  const auto q = numeric_average(spec, hol, t, opt);
  CHECK(std::abs(q.value - series) < 1e-8);
  CHECK(q.prefactor == doctest::Approx(std::exp(t / 4)));

  opt.method = NumericMethod::MonteCarlo;
  opt.samples = 50'000;
  const auto mc = numeric_average(spec, hol, t, opt);
  CHECK(std::abs(mc.value - series) < 4 * mc.std_error + 1e-12);
  CHECK(mc.evaluations == 50'000);
}

TEST_CASE("Monte Carlo is reproducible and worker independent") {
  const auto spec = builtin("S3");
  const auto hol = derive_holonomy(spec);
  NumericOptions opt;
  opt.method = NumericMethod::MonteCarlo;
  opt.samples = 20'000;
  opt.seed = 9;
  opt.workers = 1;
  const auto a = numeric_average(spec, hol, 0.1, opt);
  opt.workers = 3;
  const auto b = numeric_average(spec, hol, 0.1, opt);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("numeric average rejects bad input") {
  const auto spec = builtin("S2");
  const auto hol = derive_holonomy(spec);
  NumericOptions opt;
  CHECK_THROWS_AS(numeric_average(spec, hol, 0.0, opt), NonPositiveT);
  CHECK_THROWS_AS(numeric_average(spec, hol, -1.0, opt), NonPositiveT);
  // at large t most of the Gaussian mass sits beyond the first pole
  opt.method = NumericMethod::Quadrature;
  CHECK_THROWS_AS(numeric_average(spec, hol, 40.0, opt), SingularityHit);
}

TEST_CASE("flat space numeric average is one") {
  const auto spec = flat(2);
  const auto hol = derive_holonomy(spec);
  CHECK(numeric_average(spec, hol, 0.3, {}).value == 1.0);
}

TEST_CASE("default numeric method") {
  CHECK(default_method(1) == NumericMethod::Quadrature);
  CHECK(default_method(3) == NumericMethod::Quadrature);
  CHECK(default_method(6) == NumericMethod::MonteCarlo);
}
