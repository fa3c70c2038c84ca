#pragma once

#include "heatgen/curvature_algebra.hpp"
#include "heatgen/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace heatgen {

/// Truncated formal power series sum_{k<=order} c_k t^k with exact
/// coefficients.
class TSeries {
public:
  explicit TSeries(std::size_t order = 0) : coeffs_(order + 1) {}
  explicit TSeries(std::vector<Rational> coeffs);

  /// exp(rate * t) truncated at `order`.
  static TSeries exp_linear(const Rational &rate, std::size_t order);

  std::size_t order() const { return coeffs_.size() - 1; }
  const Rational &operator[](std::size_t k) const { return coeffs_.at(k); }
  Rational &operator[](std::size_t k) { return coeffs_.at(k); }
  const std::vector<Rational> &coeffs() const { return coeffs_; }

  TSeries truncated(std::size_t order) const;
  /// exp of a series with zero constant term.
  TSeries exp() const;
  double evaluate(double t) const;

  friend TSeries operator+(const TSeries &a, const TSeries &b);
  friend TSeries operator*(const TSeries &a, const TSeries &b);
  friend bool operator==(const TSeries &, const TSeries &) = default;

private:
  std::vector<Rational> coeffs_;
};

/// B_m with B_1 = -1/2.
Rational bernoulli(unsigned m);

/// c_1..c_K (element m-1 holds c_m), the coefficients of z^{2m} in
/// log(sinh z / z), from the Bernoulli closed form. Cross-checked against
/// the formal-log route; a mismatch throws InternalInconsistency.
std::vector<Rational> log_sinh_ratio_series(std::size_t K);

/// Same coefficients via the formal logarithm of sum z^{2k}/(2k+1)!.
std::vector<Rational> log_sinh_ratio_series_formal(std::size_t K);

/// Monomial t^grade * prod_i (omega^i)^exponents[i].
struct Monomial {
  std::size_t grade = 0;
  std::vector<unsigned> exponents;

  unsigned omega_degree() const;
  auto operator<=>(const Monomial &) const = default;
};

/// Polynomial in the p holonomy variables omega with exact coefficients,
/// each term tagged with its power of t; truncated at t-grade `order`.
class OmegaPolynomial {
public:
  OmegaPolynomial(std::size_t p, std::size_t order) : p_(p), order_(order) {}

  static OmegaPolynomial constant(std::size_t p, std::size_t order, const Rational &value);

  std::size_t p() const { return p_; }
  std::size_t order() const { return order_; }
  const std::map<Monomial, Rational> &terms() const { return terms_; }

  /// Adds c * t^grade * omega^exponents; terms past the order are dropped.
  void add(std::size_t grade, std::vector<unsigned> exponents, const Rational &c);
  void add(const Monomial &m, const Rational &c);
  Rational coefficient(const Monomial &m) const;

  /// Substitutes omega = 0.
  TSeries at_zero() const;

  OmegaPolynomial &operator*=(const Rational &s);
  friend OmegaPolynomial operator+(const OmegaPolynomial &a, const OmegaPolynomial &b);
  /// Product truncated at min(a.order, b.order); no term past it is formed.
  friend OmegaPolynomial operator*(const OmegaPolynomial &a, const OmegaPolynomial &b);
  friend bool operator==(const OmegaPolynomial &, const OmegaPolynomial &) = default;

private:
  std::size_t p_;
  std::size_t order_;
  std::map<Monomial, Rational> terms_;
};

struct ExpansionOptions {
  /// Refuse runs whose index-word count sum_{m<=K} p^{2m} exceeds this.
  std::uint64_t word_budget = 100'000'000;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// sum_{m=1..K} p^{2m}, saturating at UINT64_MAX.
std::uint64_t enumeration_cost(std::size_t p, std::size_t K);

/// Smallest cyclic rotation of an index word.
std::vector<std::size_t> canonical_rotation(std::span<const std::size_t> word);

/// tr(M_{w_0} M_{w_1} ... M_{w_last}), exact.
Rational word_trace(const std::vector<RationalMatrix> &mats, std::span<const std::size_t> word);

/// L(t, omega) = sum_{m=1..K} t^m c_m / 4^m [ tr F(omega)^{2m} - tr D(omega)^{2m} ] / 2
/// Throws OrderTooLarge when the word count exceeds the budget.
OmegaPolynomial integrand_log_expansion(const HolonomyRealization &hol, std::size_t K,
                                        const ExpansionOptions &options = {});

/// exp{(R/8 + R_H/6) t} * exp{L(t, omega)} truncated at t-grade K.
OmegaPolynomial exponentiate_with_prefactor(const OmegaPolynomial &L, const Rational &R, const Rational &R_H,
                                            std::size_t K);

} // namespace heatgen
