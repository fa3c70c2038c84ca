#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace heatgen {

/// Exact rational number (always kept in canonical form).
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is one.
std::string to_string(const Rational &value);

inline bool is_zero(const Rational &value) { return sgn(value) == 0; }

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Rational> data() const { return data_; }

  RationalMatrix transpose() const;
  Rational trace() const;
  bool is_zero() const;
  bool is_symmetric() const;
  bool is_antisymmetric() const;

  /// Determinants of the leading k x k blocks, k = 1..n.
  std::vector<Rational> leading_minors() const;
  bool is_positive_definite() const;

  /// Exact inverse; throws std::domain_error when singular.
  RationalMatrix inverse() const;
  std::size_t rank() const;

  RationalMatrix &operator+=(const RationalMatrix &rhs);
  RationalMatrix &operator-=(const RationalMatrix &rhs);
  RationalMatrix &operator*=(const Rational &scale);

  friend RationalMatrix operator+(RationalMatrix lhs, const RationalMatrix &rhs) { return lhs += rhs; }
  friend RationalMatrix operator-(RationalMatrix lhs, const RationalMatrix &rhs) { return lhs -= rhs; }
  friend RationalMatrix operator*(RationalMatrix lhs, const Rational &s) { return lhs *= s; }
  friend RationalMatrix operator*(const Rational &s, RationalMatrix rhs) { return rhs *= s; }
  friend RationalMatrix operator*(const RationalMatrix &lhs, const RationalMatrix &rhs);
  friend bool operator==(const RationalMatrix &lhs, const RationalMatrix &rhs);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix commutator(const RationalMatrix &a, const RationalMatrix &b);

/// Solves A x = b exactly for a full-column-rank A. Returns nullopt when the
/// system is inconsistent (b is outside the column span).
std::optional<std::vector<Rational>> solve_exact(const RationalMatrix &a, std::span<const Rational> b);

} // namespace heatgen
