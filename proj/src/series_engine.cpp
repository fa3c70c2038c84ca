#include "heatgen/series_engine.hpp"

#include "heatgen/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

namespace heatgen {

TSeries::TSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty())
    coeffs_.resize(1);
}

TSeries TSeries::exp_linear(const Rational &rate, std::size_t order) {
  TSeries s(order);
  Rational term = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    s.coeffs_[k] = term;
    term *= rate / Rational(static_cast<long>(k + 1));
  }
  return s;
}

TSeries TSeries::truncated(std::size_t order) const {
  TSeries s(order);
  for (std::size_t k = 0; k <= std::min(order, this->order()); ++k)
    s.coeffs_[k] = coeffs_[k];
  return s;
}

TSeries TSeries::exp() const {
  if (!is_zero(coeffs_[0]))
    throw std::domain_error("TSeries::exp needs a zero constant term");
  // E' = A' E  =>  k e_k = sum_{m=1..k} m a_m e_{k-m}
  const std::size_t K = order();
  TSeries e(K);
  e.coeffs_[0] = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    Rational s = 0;
    for (std::size_t m = 1; m <= k; ++m)
      s += Rational(static_cast<long>(m)) * coeffs_[m] * e.coeffs_[k - m];
    e.coeffs_[k] = s / Rational(static_cast<long>(k));
  }
  return e;
}

double TSeries::evaluate(double t) const {
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;)
    acc = acc * t + coeffs_[k].get_d();
  return acc;
}

TSeries operator+(const TSeries &a, const TSeries &b) {
  TSeries s(std::min(a.order(), b.order()));
  for (std::size_t k = 0; k <= s.order(); ++k)
    s.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
  return s;
}

TSeries operator*(const TSeries &a, const TSeries &b) {
  TSeries s(std::min(a.order(), b.order()));
  for (std::size_t i = 0; i <= s.order(); ++i)
    for (std::size_t j = 0; i + j <= s.order(); ++j)
      s.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return s;
}

Rational bernoulli(unsigned m) {
  // sum_{j=0}^{k} binom(k+1, j) B_j = 0 for k >= 1
  std::vector<Rational> b(m + 1);
  b[0] = 1;
  for (unsigned k = 1; k <= m; ++k) {
    Rational s = 0;
    mpz_class binom = 1; // binom(k+1, j)
    for (unsigned j = 0; j < k; ++j) {
      s += Rational(binom) * b[j];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    b[k] = -s / Rational(static_cast<long>(k + 1));
  }
  return b[m];
}

std::vector<Rational> log_sinh_ratio_series_formal(std::size_t K) {
  // sinh z / z = sum_k a_k w^k with w = z^2, a_k = 1/(2k+1)!.
  std::vector<Rational> a(K + 1);
  mpz_class fact = 1;
  for (std::size_t k = 0; k <= K; ++k) {
    if (k > 0)
      fact *= mpz_class(static_cast<unsigned long>((2 * k) * (2 * k + 1)));
    a[k] = Rational(1, fact);
  }
  // l = log(a): k l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}   (a_0 = 1)
  std::vector<Rational> l(K + 1);
  for (std::size_t k = 1; k <= K; ++k) {
    Rational s = Rational(static_cast<long>(k)) * a[k];
    for (std::size_t j = 1; j < k; ++j)
      s -= Rational(static_cast<long>(j)) * l[j] * a[k - j];
    l[k] = s / Rational(static_cast<long>(k));
  }
  return {l.begin() + 1, l.end()};
}

std::vector<Rational> log_sinh_ratio_series(std::size_t K) {
  std::vector<Rational> c(K);
  mpz_class fact = 1; // (2m)!
  for (std::size_t m = 1; m <= K; ++m) {
    fact *= mpz_class(static_cast<unsigned long>((2 * m - 1) * (2 * m)));
    mpz_class pow2 = 1;
    pow2 <<= static_cast<mp_bitcnt_t>(2 * m);
    c[m - 1] = Rational(pow2) * bernoulli(static_cast<unsigned>(2 * m)) /
               (Rational(static_cast<long>(2 * m)) * Rational(fact));
  }
  if (c != log_sinh_ratio_series_formal(K))
    throw InternalInconsistency("log(sinh z / z): Bernoulli closed form disagrees with formal logarithm");
  return c;
}

unsigned Monomial::omega_degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0u); }

OmegaPolynomial OmegaPolynomial::constant(std::size_t p, std::size_t order, const Rational &value) {
  OmegaPolynomial poly(p, order);
  poly.add(0, std::vector<unsigned>(p, 0), value);
  return poly;
}

void OmegaPolynomial::add(std::size_t grade, std::vector<unsigned> exponents, const Rational &c) {
  add(Monomial{grade, std::move(exponents)}, c);
}

void OmegaPolynomial::add(const Monomial &m, const Rational &c) {
  if (m.exponents.size() != p_)
    throw std::invalid_argument("OmegaPolynomial: exponent vector length differs from p");
  if (m.grade > order_ || is_zero(c))
    return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (is_zero(it->second))
      terms_.erase(it);
  }
}

Rational OmegaPolynomial::coefficient(const Monomial &m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

TSeries OmegaPolynomial::at_zero() const {
  TSeries s(order_);
  for (const auto &[m, c] : terms_)
    if (m.omega_degree() == 0)
      s[m.grade] += c;
  return s;
}

OmegaPolynomial &OmegaPolynomial::operator*=(const Rational &s) {
  if (is_zero(s)) {
    terms_.clear();
    return *this;
  }
  for (auto &[m, c] : terms_)
    c *= s;
  return *this;
}

OmegaPolynomial operator+(const OmegaPolynomial &a, const OmegaPolynomial &b) {
  if (a.p_ != b.p_)
    throw std::invalid_argument("OmegaPolynomial: variable count mismatch");
  OmegaPolynomial out(a.p_, std::min(a.order_, b.order_));
  for (const auto &[m, c] : a.terms_)
    out.add(m, c);
  for (const auto &[m, c] : b.terms_)
    out.add(m, c);
  return out;
}

OmegaPolynomial operator*(const OmegaPolynomial &a, const OmegaPolynomial &b) {
  if (a.p_ != b.p_)
    throw std::invalid_argument("OmegaPolynomial: variable count mismatch");
  OmegaPolynomial out(a.p_, std::min(a.order_, b.order_));
  Monomial m;
  m.exponents.resize(a.p_);
  for (const auto &[ma, ca] : a.terms_)
    for (const auto &[mb, cb] : b.terms_) {
      if (ma.grade + mb.grade > out.order_)
        continue;
      m.grade = ma.grade + mb.grade;
      for (std::size_t i = 0; i < a.p_; ++i)
        m.exponents[i] = ma.exponents[i] + mb.exponents[i];
      out.add(m, ca * cb);
    }
  return out;
}

std::uint64_t enumeration_cost(std::size_t p, std::size_t K) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t pow = 1;
  const std::uint64_t p2 = static_cast<std::uint64_t>(p) * p;
  for (std::size_t m = 1; m <= K; ++m) {
    if (p2 != 0 && pow > kMax / p2)
      return kMax;
    pow *= p2;
    if (total > kMax - pow)
      return kMax;
    total += pow;
  }
  return total;
}

std::vector<std::size_t> canonical_rotation(std::span<const std::size_t> word) {
  std::vector<std::size_t> best(word.begin(), word.end());
  std::vector<std::size_t> rot(word.size());
  for (std::size_t r = 1; r < word.size(); ++r) {
    for (std::size_t j = 0; j < word.size(); ++j)
      rot[j] = word[(j + r) % word.size()];
    if (rot < best)
      best = rot;
  }
  return best;
}

Rational word_trace(const std::vector<RationalMatrix> &mats, std::span<const std::size_t> word) {
  if (word.empty())
    throw std::invalid_argument("word_trace: empty word");
  RationalMatrix prod = mats.at(word[0]);
  for (std::size_t j = 1; j < word.size(); ++j)
    prod = prod * mats.at(word[j]);
  return prod.trace();
}

namespace {

// Integer images of a set of rational matrices, M_i = scale * A_i, when every
// entry fits comfortably in 64 bits.
struct IntegerImage {
  bool usable = false;
  std::size_t dim = 0;
  mpz_class scale = 1;
  std::vector<std::vector<std::int64_t>> mats;
};

IntegerImage integer_image(const std::vector<RationalMatrix> &mats) {
  IntegerImage img;
  if (mats.empty())
    return img;
  img.dim = mats.front().rows();
  for (const auto &m : mats)
    for (const auto &x : m.data())
      img.scale = lcm(img.scale, mpz_class(x.get_den()));
  for (const auto &m : mats) {
    std::vector<std::int64_t> flat;
    flat.reserve(m.data().size());
    for (const auto &x : m.data()) {
      const mpz_class v = x.get_num() * (img.scale / x.get_den());
      if (!v.fits_slong_p() || abs(v) > mpz_class(1L << 40))
        return {};
      flat.push_back(v.get_si());
    }
    img.mats.push_back(std::move(flat));
  }
  img.usable = true;
  return img;
}

// Incremental product of a word's prefix using checked int64 arithmetic.
class PrefixProducts {
public:
  PrefixProducts(const IntegerImage &img, std::size_t length)
      : img_(img), n_(img.dim), levels_(length, std::vector<std::int64_t>(img.dim * img.dim)) {}

  void invalidate_from(std::size_t pos) { valid_ = std::min(valid_, pos); }

  /// tr(prod M_{w_j}); false on overflow.
  bool trace(std::span<const std::size_t> word, std::int64_t &out) {
    const std::size_t L = word.size();
    for (std::size_t j = valid_; j + 1 < L; ++j) {
      const auto &m = img_.mats[word[j]];
      if (j == 0) {
        levels_[0] = m;
        continue;
      }
      const auto &prev = levels_[j - 1];
      auto &cur = levels_[j];
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
          std::int64_t s = 0;
          for (std::size_t c = 0; c < n_; ++c) {
            std::int64_t prod;
            if (__builtin_mul_overflow(prev[a * n_ + c], m[c * n_ + b], &prod) || __builtin_add_overflow(s, prod, &s)) {
              valid_ = 0;
              return false;
            }
          }
          cur[a * n_ + b] = s;
        }
    }
    valid_ = L - 1;
    const auto &last = img_.mats[word[L - 1]];
    const auto &pre = levels_[L - 2];
    std::int64_t t = 0;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) {
        std::int64_t prod;
        if (__builtin_mul_overflow(pre[a * n_ + b], last[b * n_ + a], &prod) || __builtin_add_overflow(t, prod, &t))
          return false;
      }
    out = t;
    return true;
  }

private:
  const IntegerImage &img_;
  std::size_t n_;
  std::vector<std::vector<std::int64_t>> levels_;
  std::size_t valid_ = 0;
};

class TraceEvaluator {
public:
  TraceEvaluator(const std::vector<RationalMatrix> &mats, const IntegerImage &img, std::size_t length)
      : mats_(mats), img_(img), prefix_(img, length), length_(length) {
    if (img_.usable) {
      mpz_pow_ui(denominator_.get_mpz_t(), img_.scale.get_mpz_t(), static_cast<unsigned long>(length));
    }
  }

  void invalidate_from(std::size_t pos) { prefix_.invalidate_from(pos); }

  Rational operator()(std::span<const std::size_t> word) {
    if (mats_.empty() || mats_.front().rows() == 0)
      return 0;
    std::int64_t t;
    if (img_.usable && prefix_.trace(word, t))
      return Rational(mpz_class(static_cast<long>(t)), denominator_);
    return word_trace(mats_, word);
  }

private:
  const std::vector<RationalMatrix> &mats_;
  const IntegerImage &img_;
  PrefixProducts prefix_;
  std::size_t length_;
  mpz_class denominator_ = 1;
};

struct Representative {
  std::vector<std::size_t> word;
  std::uint64_t orbit = 0;
  Rational trace_d;
  Rational trace_f;
};

// Word is its own minimal rotation: returns the orbit size (period), else 0.
std::uint64_t representative_orbit(const std::vector<std::size_t> &w) {
  const std::size_t L = w.size();
  for (std::size_t r = 1; r < L; ++r) {
    for (std::size_t j = 0; j < L; ++j) {
      const std::size_t x = w[(j + r) % L];
      if (x < w[j])
        return 0;
      if (x > w[j])
        goto next_rotation;
    }
    return r; // rotation by r reproduces the word
  next_rotation:;
  }
  return L;
}

std::vector<Representative> enumerate_range(const HolonomyRealization &hol, const IntegerImage &img_d,
                                            const IntegerImage &img_f, std::size_t length, std::uint64_t lo,
                                            std::uint64_t hi) {
  const std::size_t p = hol.p;
  std::vector<Representative> out;
  if (lo >= hi)
    return out;
  std::vector<std::size_t> w(length);
  {
    std::uint64_t code = lo;
    for (std::size_t j = length; j-- > 0;) {
      w[j] = code % p;
      code /= p;
    }
  }
  TraceEvaluator tr_d(hol.D, img_d, length);
  TraceEvaluator tr_f(hol.F, img_f, length);
  for (std::uint64_t code = lo; code < hi; ++code) {
    if (const auto orbit = representative_orbit(w)) {
      Representative r;
      r.word = w;
      r.orbit = orbit;
      r.trace_d = tr_d(w);
      r.trace_f = tr_f(w);
      out.push_back(std::move(r));
    }
    // odometer increment, least significant digit last
    std::size_t j = length;
    while (j-- > 0) {
      if (++w[j] < p)
        break;
      w[j] = 0;
    }
    const std::size_t changed = j == static_cast<std::size_t>(-1) ? 0 : j;
    tr_d.invalidate_from(changed);
    tr_f.invalidate_from(changed);
  }
  return out;
}

} // namespace

OmegaPolynomial integrand_log_expansion(const HolonomyRealization &hol, std::size_t K, const ExpansionOptions &options) {
  const std::size_t p = hol.p;
  OmegaPolynomial L(p, K);
  if (p == 0 || K == 0)
    return L;
  const auto cost = enumeration_cost(p, K);
  if (cost > options.word_budget)
    throw OrderTooLarge("order " + std::to_string(K) + " with p = " + std::to_string(p) + " needs " +
                        (cost == std::numeric_limits<std::uint64_t>::max() ? std::string("> 2^64")
                                                                           : std::to_string(cost)) +
                        " index words, over the budget of " + std::to_string(options.word_budget) +
                        "; lower the order or use the numeric average");

  const auto c = log_sinh_ratio_series(K);
  const IntegerImage img_d = integer_image(hol.D);
  const IntegerImage img_f = integer_image(hol.F);
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());

  for (std::size_t m = 1; m <= K; ++m) {
    const std::size_t length = 2 * m;
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < length; ++j)
      total *= p;
    const unsigned w_count = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, total / 4096)));
    std::vector<std::vector<Representative>> parts(w_count);
    if (w_count == 1) {
      parts[0] = enumerate_range(hol, img_d, img_f, length, 0, total);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(w_count);
      for (unsigned t = 0; t < w_count; ++t) {
        const std::uint64_t lo = total * t / w_count;
        const std::uint64_t hi = total * (t + 1) / w_count;
        threads.emplace_back([&, t, lo, hi] {
          try {
            parts[t] = enumerate_range(hol, img_d, img_f, length, lo, hi);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto &th : threads)
        th.join();
      for (auto &e : errors)
        if (e)
          std::rethrow_exception(e);
    }

    mpz_class pow4 = 1;
    pow4 <<= static_cast<mp_bitcnt_t>(2 * m);
    const Rational weight = c[m - 1] / Rational(pow4) / 2;
    std::vector<unsigned> exps(p);
    for (const auto &part : parts)
      for (const auto &rep : part) {
        const Rational diff = rep.trace_f - rep.trace_d;
        if (is_zero(diff))
          continue;
        std::fill(exps.begin(), exps.end(), 0u);
        for (auto i : rep.word)
          ++exps[i];
        L.add(m, exps, weight * Rational(static_cast<unsigned long>(rep.orbit)) * diff);
      }
  }
  return L;
}

OmegaPolynomial exponentiate_with_prefactor(const OmegaPolynomial &L, const Rational &R, const Rational &R_H,
                                            std::size_t K) {
  if (L.order() < K)
    throw OrderMismatch("exponentiate_with_prefactor: log-integrand order " + std::to_string(L.order()) +
                        " is below " + std::to_string(K));
  const std::size_t p = L.p();
  OmegaPolynomial log_part(p, K);
  for (const auto &[m, c] : L.terms())
    log_part.add(m, c);

  // sum_{j<=K} L^j / j!; L has no grade-0 part so j <= K suffices.
  OmegaPolynomial expl = OmegaPolynomial::constant(p, K, 1);
  OmegaPolynomial power = OmegaPolynomial::constant(p, K, 1);
  for (std::size_t j = 1; j <= K; ++j) {
    power = power * log_part;
    power *= Rational(1, static_cast<unsigned long>(j));
    if (power.terms().empty())
      break;
    expl = expl + power;
  }

  const TSeries pre = TSeries::exp_linear(R / 8 + R_H / 6, K);
  OmegaPolynomial prefactor(p, K);
  for (std::size_t k = 0; k <= K; ++k)
    prefactor.add(k, std::vector<unsigned>(p, 0), pre[k]);
  return prefactor * expl;
}

} // namespace heatgen
