#include "heatgen/gaussian_averager.hpp"

#include "heatgen/errors.hpp"

#include <algorithm>

namespace heatgen {

MomentKey::MomentKey(std::size_t p, std::vector<std::size_t> indices) : p_(p), indices_(std::move(indices)) {
  for (auto i : indices_)
    if (i >= p_)
      throw std::out_of_range("MomentKey: index " + std::to_string(i) + " out of range for p = " + std::to_string(p_));
  std::sort(indices_.begin(), indices_.end());
}

MomentKey MomentKey::from_exponents(std::span<const unsigned> exponents) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    idx.insert(idx.end(), exponents[i], i);
  return MomentKey(exponents.size(), std::move(idx));
}

namespace {

// Pairs the first remaining index with each later one in turn.
Rational matchings(std::vector<std::size_t> &rest, const RationalMatrix &beta_inv) {
  if (rest.empty())
    return 1;
  const std::size_t first = rest.front();
  Rational total = 0;
  for (std::size_t j = 1; j < rest.size(); ++j) {
    const Rational &cov = beta_inv(first, rest[j]);
    if (is_zero(cov))
      continue;
    std::vector<std::size_t> sub;
    sub.reserve(rest.size() - 2);
    for (std::size_t k = 1; k < rest.size(); ++k)
      if (k != j)
        sub.push_back(rest[k]);
    total += 2 * cov * matchings(sub, beta_inv);
  }
  return total;
}

} // namespace

Rational wick_moment(const MomentKey &key, const RationalMatrix &beta_inv) {
  if (key.degree() % 2 != 0)
    return 0;
  std::vector<std::size_t> idx = key.indices();
  return matchings(idx, beta_inv);
}

FockEngine::FockEngine(RationalMatrix beta_inv) : beta_inv_(std::move(beta_inv)), p_(beta_inv_.rows()) {
  if (p_ == 0)
    return;
  const MomentKey probe(p_, {0, 0});
  lambda_ = wick_moment(probe, beta_inv_) / raw_moment(probe);
}

const FockEngine::State &FockEngine::exponential_part(std::size_t k) const {
  // Degree-2k part of exp(Q), Q = beta^{jk} b*_j b*_k, i.e. Q^k / k!.
  if (auto it = cache_.find(k); it != cache_.end())
    return it->second;
  State q;
  for (std::size_t j = 0; j < p_; ++j)
    for (std::size_t l = 0; l < p_; ++l) {
      if (is_zero(beta_inv_(j, l)))
        continue;
      std::vector<unsigned> e(p_, 0);
      ++e[j];
      ++e[l];
      q[e] += beta_inv_(j, l);
    }
  State power;
  power[std::vector<unsigned>(p_, 0)] = 1;
  for (std::size_t step = 1; step <= k; ++step) {
    State next;
    for (const auto &[ea, ca] : power)
      for (const auto &[eb, cb] : q) {
        std::vector<unsigned> e(p_);
        for (std::size_t i = 0; i < p_; ++i)
          e[i] = ea[i] + eb[i];
        next[e] += ca * cb;
      }
    for (auto &[e, c] : next)
      c /= Rational(static_cast<long>(step));
    power = std::move(next);
  }
  return cache_.emplace(k, std::move(power)).first->second;
}

Rational FockEngine::raw_moment(const MomentKey &key) const {
  if (key.degree() % 2 != 0)
    return 0; // an unpaired annihilator reaches the vacuum
  if (key.degree() == 0)
    return 1;
  // b^j acts on polynomials in b* as d/db*_j; apply right to left.
  State state = exponential_part(key.degree() / 2);
  const auto &idx = key.indices();
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    const std::size_t j = *it;
    State next;
    for (const auto &[e, c] : state) {
      if (e[j] == 0)
        continue;
      std::vector<unsigned> d = e;
      --d[j];
      next[d] += c * Rational(static_cast<long>(e[j]));
    }
    state = std::move(next);
  }
  const auto vac = state.find(std::vector<unsigned>(p_, 0));
  return vac == state.end() ? Rational(0) : vac->second;
}

Rational FockEngine::moment(const MomentKey &key) const {
  if (key.degree() % 2 != 0)
    return 0;
  Rational scale = 1;
  for (std::size_t k = 0; k < key.degree() / 2; ++k)
    scale *= lambda_;
  return scale * raw_moment(key);
}

Rational fock_moment(const MomentKey &key, const RationalMatrix &beta_inv) { return FockEngine(beta_inv).moment(key); }

TSeries average(const OmegaPolynomial &poly, const RationalMatrix &beta_inv) {
  if (beta_inv.rows() != poly.p())
    throw std::invalid_argument("average: beta_inv size differs from the polynomial's variable count");
  TSeries out(poly.order());
  std::map<std::vector<unsigned>, Rational> memo;
  for (const auto &[m, c] : poly.terms()) {
    if (m.omega_degree() % 2 != 0)
      continue;
    auto it = memo.find(m.exponents);
    if (it == memo.end())
      it = memo.emplace(m.exponents, wick_moment(MomentKey::from_exponents(m.exponents), beta_inv)).first;
    out[m.grade] += c * it->second;
  }
  return out;
}

} // namespace heatgen
