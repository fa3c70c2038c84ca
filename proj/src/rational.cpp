#include "heatgen/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace heatgen {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty())
    return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size())
    return false;
  return std::all_of(s.begin() + i, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Row-reduces `m` in place; returns the pivot column of each pivot row.
std::vector<std::size_t> row_reduce(RationalMatrix &m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && is_zero(m(sel, col)))
      ++sel;
    if (sel == m.rows())
      continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c)
        std::swap(m(sel, c), m(row, c));
    const Rational inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c)
      m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col)))
        continue;
      const Rational f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!is_zero(m(row, c)))
          m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Rational determinant(RationalMatrix m) {
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && is_zero(m(sel, col)))
      ++sel;
    if (sel == n)
      return 0;
    if (sel != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(m(sel, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(m(r, col)))
        continue;
      const Rational f = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c)
        m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

} // namespace

Rational parse_rational(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  text = first == std::string_view::npos ? std::string_view{} : text.substr(first, text.find_last_not_of(" \t") - first + 1);
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!is_integer_text(num) || (slash != std::string_view::npos && !is_integer_text(den)))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  std::string num_s(num.front() == '+' ? num.substr(1) : num);
  Rational r;
  if (den.empty()) {
    r = Rational(mpz_class(num_s));
  } else {
    std::string den_s(den.front() == '+' ? den.substr(1) : den);
    mpz_class d(den_s);
    if (d == 0)
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    r = Rational(mpz_class(num_s), d);
    r.canonicalize();
  }
  return r;
}

std::string to_string(const Rational &value) { return value.get_str(); }

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto &row : rows) {
    if (row.size() != cols_)
      throw std::invalid_argument("ragged matrix initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      t(c, r) = (*this)(r, c);
  return t;
}

Rational RationalMatrix::trace() const {
  Rational t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    t += (*this)(i, i);
  return t;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational &x) { return heatgen::is_zero(x); });
}

bool RationalMatrix::is_symmetric() const {
  if (!is_square())
    return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r))
        return false;
  return true;
}

bool RationalMatrix::is_antisymmetric() const {
  if (!is_square())
    return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if ((*this)(r, c) != -(*this)(c, r))
        return false;
  return true;
}

std::vector<Rational> RationalMatrix::leading_minors() const {
  std::vector<Rational> minors;
  for (std::size_t k = 1; k <= rows_; ++k) {
    RationalMatrix block(k, k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        block(r, c) = (*this)(r, c);
    minors.push_back(determinant(std::move(block)));
  }
  return minors;
}

bool RationalMatrix::is_positive_definite() const {
  if (!is_symmetric())
    return false;
  const auto minors = leading_minors();
  return std::all_of(minors.begin(), minors.end(), [](const Rational &m) { return sgn(m) > 0; });
}

RationalMatrix RationalMatrix::inverse() const {
  if (!is_square())
    throw std::domain_error("inverse of a non-square matrix");
  const std::size_t n = rows_;
  RationalMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c)
      aug(r, c) = (*this)(r, c);
    aug(r, n + r) = 1;
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots.back() >= n)
    throw std::domain_error("singular matrix");
  RationalMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      inv(r, c) = aug(r, n + c);
  return inv;
}

std::size_t RationalMatrix::rank() const {
  RationalMatrix copy = *this;
  return row_reduce(copy).size();
}

RationalMatrix &RationalMatrix::operator+=(const RationalMatrix &rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += rhs.data_[i];
  return *this;
}

RationalMatrix &RationalMatrix::operator-=(const RationalMatrix &rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] -= rhs.data_[i];
  return *this;
}

RationalMatrix &RationalMatrix::operator*=(const Rational &scale) {
  for (auto &x : data_)
    x *= scale;
  return *this;
}

RationalMatrix operator*(const RationalMatrix &lhs, const RationalMatrix &rhs) {
  if (lhs.cols_ != rhs.rows_)
    throw std::invalid_argument("matrix shape mismatch in *");
  RationalMatrix out(lhs.rows_, rhs.cols_);
  for (std::size_t r = 0; r < lhs.rows_; ++r)
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const Rational &a = lhs(r, k);
      if (is_zero(a))
        continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c)
        if (!is_zero(rhs(k, c)))
          out(r, c) += a * rhs(k, c);
    }
  return out;
}

bool operator==(const RationalMatrix &lhs, const RationalMatrix &rhs) {
  return lhs.rows_ == rhs.rows_ && lhs.cols_ == rhs.cols_ && lhs.data_ == rhs.data_;
}

RationalMatrix commutator(const RationalMatrix &a, const RationalMatrix &b) { return a * b - b * a; }

std::optional<std::vector<Rational>> solve_exact(const RationalMatrix &a, std::span<const Rational> b) {
  if (b.size() != a.rows())
    throw std::invalid_argument("solve_exact: right-hand side size mismatch");
  const std::size_t n = a.cols();
  RationalMatrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c)
      aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  const auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == n)
    return std::nullopt;
  if (pivots.size() < n)
    throw std::domain_error("solve_exact: matrix is column-rank deficient");
  std::vector<Rational> x(n);
  for (std::size_t r = 0; r < n; ++r)
    x[pivots[r]] = aug(r, n);
  return x;
}

} // namespace heatgen
