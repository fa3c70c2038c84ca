#include "common.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace heatgen;

TEST_CASE("parse and print rationals") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-6/8") == Q("-3/4"));
  CHECK(parse_rational(" 2/4 ") == Q("1/2"));
  CHECK(to_string(Q("10/4")) == "5/2");
  CHECK(to_string(Q("-0/7")) == "0");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
}

TEST_CASE("matrix basics") {
  const RationalMatrix a{{1, 2}, {3, 4}};
  CHECK(a.trace() == 5);
  CHECK(a.transpose()(0, 1) == 3);
  CHECK(a * a.inverse() == RationalMatrix::identity(2));
  CHECK(a.inverse()(0, 0) == -2);
  CHECK(a.inverse()(1, 0) == Q("3/2"));
  CHECK(a.rank() == 2);
  CHECK(RationalMatrix{{1, 2}, {2, 4}}.rank() == 1);
  CHECK_THROWS_AS(RationalMatrix({{1, 2}, {2, 4}}).inverse(), std::domain_error);

  const RationalMatrix s{{2, 1}, {1, 2}};
  CHECK(s.is_symmetric());
  CHECK(s.is_positive_definite());
  CHECK(s.leading_minors() == Qs({"2", "3"}));
  CHECK_FALSE(RationalMatrix({{1, 2}, {2, 1}}).is_positive_definite());
  CHECK(RationalMatrix({{0, 1}, {-1, 0}}).is_antisymmetric());
}

TEST_CASE("commutator of rotation generators") {
  const RationalMatrix e12{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}};
  const RationalMatrix e13{{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}};
  const RationalMatrix e23{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}};
  CHECK(commutator(e12, e13) == -1 * e23);
  CHECK(commutator(e12, e12).is_zero());
}

TEST_CASE("exact linear solve") {
  const RationalMatrix a{{1, 0}, {0, 2}, {1, 1}};
  const auto x = solve_exact(a, Qs({"1", "4", "3"}));
  REQUIRE(x.has_value());
  CHECK(*x == Qs({"1", "2"}));
  CHECK_FALSE(solve_exact(a, Qs({"1", "4", "0"})).has_value());
  CHECK_THROWS(solve_exact(RationalMatrix{{1, 2}, {2, 4}}, Qs({"1", "2"})));
}
