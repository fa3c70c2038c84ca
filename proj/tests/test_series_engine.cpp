#include "common.hpp"

#include "heatgen/errors.hpp"
#include "heatgen/series_engine.hpp"
#include "heatgen/space_catalog.hpp"

#include <doctest.h>

#include <random>

using namespace heatgen;

TEST_CASE("Bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == Q("-1/2"));
  CHECK(bernoulli(2) == Q("1/6"));
  CHECK(bernoulli(3) == 0);
  CHECK(bernoulli(4) == Q("-1/30"));
  CHECK(bernoulli(6) == Q("1/42"));
  CHECK(bernoulli(12) == Q("-691/2730"));
}

TEST_CASE("log(sinh z / z) coefficients") {
  // log(sinh z / z) = z^2/6 - z^4/180 + z^6/2835 - ...
  const auto c = log_sinh_ratio_series(4);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == Q("1/6"));
  CHECK(c[1] == Q("-1/180"));
  CHECK(c[2] == Q("1/2835"));
  CHECK(c[3] == Q("-1/37800"));
  CHECK(log_sinh_ratio_series_formal(10) == log_sinh_ratio_series(10));
}

TEST_CASE("TSeries arithmetic") {
  const TSeries e = TSeries::exp_linear(2, 4);
  CHECK(e.coeffs() == Qs({"1", "2", "2", "4/3", "2/3"}));
  CHECK(TSeries(Qs({"0", "2"})).truncated(4).exp() == e);
  CHECK((e * TSeries::exp_linear(-2, 4)) == TSeries(Qs({"1", "0", "0", "0", "0"})));
  CHECK((e + e)[3] == Q("8/3"));
  CHECK((e * TSeries::exp_linear(1, 2)).order() == 2);
  CHECK(e.evaluate(0.5) == doctest::Approx(1 + 1 + 0.5 + 1.0 / 6 + 1.0 / 24));
}

TEST_CASE("OmegaPolynomial truncation and products") {
  OmegaPolynomial a(2, 2);
  a.add(1, {1, 0}, 3);
  a.add(3, {0, 1}, 5); // past the order, dropped
  CHECK(a.terms().size() == 1);
  a.add(1, {1, 0}, -3);
  CHECK(a.terms().empty());

  OmegaPolynomial x(2, 2), y(2, 2);
  x.add(1, {1, 0}, 2);
  y.add(1, {0, 1}, Q("1/2"));
  y.add(2, {0, 0}, 7);
  const auto xy = x * y;
  CHECK(xy.coefficient({2, {1, 1}}) == 1);
  CHECK(xy.terms().size() == 1);
  CHECK((x + y).at_zero().coeffs() == Qs({"0", "0", "7"}));
}

TEST_CASE("canonical rotations") {
  using W = std::vector<std::size_t>;
  CHECK(canonical_rotation(W{2, 0, 1}) == W{0, 1, 2});
  CHECK(canonical_rotation(W{1, 0, 1, 0}) == W{0, 1, 0, 1});
  CHECK(canonical_rotation(W{}) == W{});
}

TEST_CASE("word traces are invariant under cyclic rotation") {
  const auto hol = derive_holonomy(builtin("S4"));
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, hol.p - 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> w(6);
    for (auto &x : w)
      x = pick(rng);
    const Rational base = word_trace(hol.D, w);
    for (std::size_t r = 1; r < w.size(); ++r) {
      std::vector<std::size_t> rot(w.begin() + static_cast<long>(r), w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
      CHECK(word_trace(hol.D, rot) == base);
    }
    CHECK(word_trace(hol.D, canonical_rotation(w)) == base);
  }
}

TEST_CASE("S2 integrand expansion") {
  const auto hol = derive_holonomy(builtin("S2"));
  const auto L = integrand_log_expansion(hol, 1, {});
  // L = t w^2 / 24 at first order
  CHECK(L.terms().size() == 1);
  CHECK(L.coefficient({1, {2}}) == Q("1/24"));

  const auto I = exponentiate_with_prefactor(L, 2, 0, 1);
  CHECK(I.coefficient({0, {0}}) == 1);
  CHECK(I.coefficient({1, {0}}) == Q("1/4"));
  CHECK(I.coefficient({1, {2}}) == Q("1/24"));
  CHECK(I.terms().size() == 3);
}

TEST_CASE("flat space integrand is trivial") {
  const auto hol = derive_holonomy(flat(3));
  const auto L = integrand_log_expansion(hol, 4, {});
  CHECK(L.terms().empty());
  const auto I = exponentiate_with_prefactor(L, 0, 0, 4);
  CHECK(I.at_zero().coeffs() == Qs({"1", "0", "0", "0", "0"}));
}

TEST_CASE("enumeration budget") {
  CHECK(enumeration_cost(1, 3) == 3);
  CHECK(enumeration_cost(3, 2) == 9 + 81);
  CHECK(enumeration_cost(1000, 40) == UINT64_MAX);
  const auto hol = derive_holonomy(builtin("S6"));
  ExpansionOptions tight;
  tight.word_budget = 1000;
  CHECK_THROWS_AS(integrand_log_expansion(hol, 2, tight), OrderTooLarge);
}

TEST_CASE("expansion does not depend on the worker count") {
  const auto hol = derive_holonomy(builtin("S4"));
  ExpansionOptions one, many;
  one.workers = 1;
  many.workers = 4;
  CHECK(integrand_log_expansion(hol, 3, one) == integrand_log_expansion(hol, 3, many));
}

TEST_CASE("exponentiation needs enough terms") {
  const auto hol = derive_holonomy(builtin("S2"));
  const auto L = integrand_log_expansion(hol, 1, {});
  CHECK_THROWS_AS(exponentiate_with_prefactor(L, 2, 0, 3), OrderMismatch);
}
