#include "heatgen/curvature_algebra.hpp"

#include "heatgen/errors.hpp"

#include <sstream>

namespace heatgen {

namespace {

std::string idx(std::initializer_list<std::size_t> ids) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (auto i : ids) {
    if (!first)
      os << ',';
    os << i;
    first = false;
  }
  os << ')';
  return os.str();
}

ValidationCheck pass_check(const char *name, std::string detail = "ok") { return {name, true, std::move(detail)}; }

} // namespace

void check_space(const SpaceSpec &spec) {
  const auto n = spec.n;
  const auto p = spec.p;
  if (n == 0)
    throw InvalidSpace("space '" + spec.name + "': tangent dimension n must be positive");
  if (p > n * (n - 1) / 2)
    throw InvalidSpace("space '" + spec.name + "': p exceeds n(n-1)/2");
  if (spec.g.rows() != n || spec.g.cols() != n)
    throw InvalidSpace("space '" + spec.name + "': g must be n x n");
  if (spec.beta.rows() != p || spec.beta.cols() != p)
    throw InvalidSpace("space '" + spec.name + "': beta must be p x p");
  if (spec.E.size() != p)
    throw InvalidSpace("space '" + spec.name + "': expected p curvature generators");
  if (!spec.g.is_symmetric())
    throw InvalidSpace("space '" + spec.name + "': g is not symmetric");
  if (!spec.g.is_positive_definite())
    throw InvalidSpace("space '" + spec.name + "': g is not positive definite");
  if (!spec.beta.is_symmetric())
    throw InvalidSpace("space '" + spec.name + "': beta is not symmetric");
  if (p > 0 && !spec.beta.is_positive_definite())
    throw InvalidSpace("space '" + spec.name + "': beta is not positive definite");
  for (std::size_t i = 0; i < p; ++i) {
    if (spec.E[i].rows() != n || spec.E[i].cols() != n)
      throw InvalidSpace("space '" + spec.name + "': generator E[" + std::to_string(i) + "] must be n x n");
    if (!spec.E[i].is_antisymmetric())
      throw InvalidSpace("space '" + spec.name + "': generator E[" + std::to_string(i) + "] is not antisymmetric");
  }
  if (p > 0) {
    RationalMatrix basis(n * n, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < n * n; ++k)
        basis(k, i) = spec.E[i].data()[k];
    if (basis.rank() < p)
      throw InvalidSpace("space '" + spec.name + "': curvature generators are linearly dependent (redundant holonomy generators)");
  }
}

HolonomyRealization derive_holonomy(const SpaceSpec &spec) {
  check_space(spec);
  const auto n = spec.n;
  const auto p = spec.p;
  const RationalMatrix g_inv = spec.g.inverse();

  HolonomyRealization hol;
  hol.n = n;
  hol.p = p;

  // (D_i)^a_b = -beta_ik E^k_cb g^ca
  hol.D.assign(p, RationalMatrix(n, n));
  for (std::size_t i = 0; i < p; ++i) {
    RationalMatrix lowered(n, n); // beta_ik E^k_cb
    for (std::size_t k = 0; k < p; ++k)
      if (!is_zero(spec.beta(i, k)))
        lowered += spec.beta(i, k) * spec.E[k];
    hol.D[i] = Rational(-1) * (g_inv * lowered);
  }

  if (p > 0) {
    RationalMatrix basis(n * n, p);
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < n * n; ++k)
        basis(k, j) = hol.D[j].data()[k];
    if (basis.rank() < p)
      throw DegenerateBasis("space '" + spec.name + "': holonomy generators D_j are linearly dependent");

    hol.F.assign(p, RationalMatrix(p, p));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t k = i + 1; k < p; ++k) {
        const RationalMatrix comm = commutator(hol.D[i], hol.D[k]);
        const auto coeffs = solve_exact(basis, comm.data());
        if (!coeffs)
          throw CommutatorOutsideSpan("space '" + spec.name + "': [D_" + std::to_string(i) + ", D_" +
                                      std::to_string(k) + "] is not in the span of the D_j");
        for (std::size_t j = 0; j < p; ++j) {
          hol.F[i](j, k) = (*coeffs)[j];
          hol.F[k](j, i) = -(*coeffs)[j];
        }
      }
    }
  }

  const std::size_t N = n + p;
  hol.gamma = RationalMatrix(N, N);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      hol.gamma(a, b) = spec.g(a, b);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < p; ++k)
      hol.gamma(n + i, n + k) = spec.beta(i, k);

  // Non-vanishing structure constants:
  //   C^i_ab = E^i_ab,  C^a_ib = -C^a_bi = D^a_ib,  C^i_kl = F^i_kl.
  hol.C.assign(N, RationalMatrix(N, N));
  for (std::size_t a = 0; a < n; ++a) {
    // C_a = [[0, Tbar_a], [T_a, 0]] with (T_a)^j_c = E^j_ac, (Tbar_a)^b_i = -D^b_ia
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t c = 0; c < n; ++c)
        hol.C[a](n + j, c) = spec.E[j](a, c);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < p; ++i)
        hol.C[a](b, n + i) = -hol.D[i](b, a);
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        hol.C[n + i](a, b) = hol.D[i](a, b);
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        hol.C[n + i](n + j, n + k) = hol.F[i](j, k);
  }
  return hol;
}

bool ValidationReport::passed() const {
  for (const auto &c : checks)
    if (!c.pass)
      return false;
  return true;
}

const ValidationCheck *ValidationReport::find(const std::string &name) const {
  for (const auto &c : checks)
    if (c.name == name)
      return &c;
  return nullptr;
}

std::string ValidationReport::failures() const {
  std::string out;
  for (const auto &c : checks) {
    if (c.pass)
      continue;
    if (!out.empty())
      out += ", ";
    out += c.name;
  }
  return out;
}

Tensor4 reconstruct_riemann(const SpaceSpec &spec) {
  const auto n = spec.n;
  Tensor4 r(n);
  for (std::size_t i = 0; i < spec.p; ++i)
    for (std::size_t k = 0; k < spec.p; ++k) {
      const Rational &b = spec.beta(i, k);
      if (is_zero(b))
        continue;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t bb = 0; bb < n; ++bb) {
          const Rational &e1 = spec.E[i](a, bb);
          if (is_zero(e1))
            continue;
          for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
              if (!is_zero(spec.E[k](c, d)))
                r(a, bb, c, d) += b * e1 * spec.E[k](c, d);
        }
    }
  return r;
}

Tensor4 raise_all(const Tensor4 &lower, const RationalMatrix &g_inv) {
  const auto n = lower.dim();
  Tensor4 cur = lower;
  for (int slot = 0; slot < 4; ++slot) {
    Tensor4 next(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            Rational sum = 0;
            for (std::size_t e = 0; e < n; ++e) {
              const std::size_t sl[4] = {a, b, c, d};
              std::size_t src[4] = {a, b, c, d};
              src[slot] = e;
              const Rational &ginv = g_inv(sl[slot], e);
              if (!is_zero(ginv))
                sum += ginv * cur(src[0], src[1], src[2], src[3]);
            }
            next(a, b, c, d) = sum;
          }
    cur = std::move(next);
  }
  return cur;
}

ValidationReport validate_symmetric_space(const SpaceSpec &spec, const HolonomyRealization &hol) {
  ValidationReport report;
  const auto n = spec.n;
  const auto p = spec.p;
  const std::size_t N = n + p;
  const Tensor4 riem = reconstruct_riemann(spec);
  const RationalMatrix g_inv = spec.g.inverse();

  {
    ValidationCheck chk = pass_check(kCheckRiemannSymmetries);
    for (std::size_t a = 0; a < n && chk.pass; ++a)
      for (std::size_t b = 0; b < n && chk.pass; ++b)
        for (std::size_t c = 0; c < n && chk.pass; ++c)
          for (std::size_t d = 0; d < n && chk.pass; ++d) {
            const Rational &v = riem(a, b, c, d);
            if (v != -riem(b, a, c, d) || v != -riem(a, b, d, c)) {
              chk = {kCheckRiemannSymmetries, false, "antisymmetry fails at " + idx({a, b, c, d})};
            } else if (v != riem(c, d, a, b)) {
              chk = {kCheckRiemannSymmetries, false, "pair symmetry fails at " + idx({a, b, c, d})};
            } else if (!is_zero(v + riem(a, c, d, b) + riem(a, d, b, c))) {
              chk = {kCheckRiemannSymmetries, false, "first Bianchi identity fails at " + idx({a, b, c, d})};
            }
          }
    report.checks.push_back(std::move(chk));
  }

  {
    // R_fgea R^e_bcd - R_fgeb R^e_acd + R_fgec R^e_dab - R_fged R^e_cab = 0
    Tensor4 mixed(n); // R^e_bcd
    for (std::size_t e = 0; e < n; ++e)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            Rational s = 0;
            for (std::size_t h = 0; h < n; ++h)
              if (!is_zero(g_inv(e, h)))
                s += g_inv(e, h) * riem(h, b, c, d);
            mixed(e, b, c, d) = s;
          }
    auto contract = [&](std::size_t f, std::size_t g, std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
      Rational s = 0;
      for (std::size_t e = 0; e < n; ++e) {
        const Rational &l = riem(f, g, e, x);
        if (!is_zero(l) && !is_zero(mixed(e, y, z, w)))
          s += l * mixed(e, y, z, w);
      }
      return s;
    };
    ValidationCheck chk = pass_check(kCheckIntegrability);
    for (std::size_t f = 0; f < n && chk.pass; ++f)
      for (std::size_t g = f + 1; g < n && chk.pass; ++g)
        for (std::size_t a = 0; a < n && chk.pass; ++a)
          for (std::size_t b = 0; b < n && chk.pass; ++b)
            for (std::size_t c = 0; c < n && chk.pass; ++c)
              for (std::size_t d = 0; d < n && chk.pass; ++d) {
                const Rational v = contract(f, g, a, b, c, d) - contract(f, g, b, a, c, d) +
                                   contract(f, g, c, d, a, b) - contract(f, g, d, c, a, b);
                if (!is_zero(v))
                  chk = {kCheckIntegrability, false,
                         "residual " + to_string(v) + " at (f,g,a,b,c,d)=" + idx({f, g, a, b, c, d})};
              }
    report.checks.push_back(std::move(chk));
  }

  {
    // E^i_bc D^c_ka - E^i_ac D^c_kb = E^j_ab F^i_jk
    ValidationCheck chk = pass_check(kCheckHolonomyInvariance);
    for (std::size_t i = 0; i < p && chk.pass; ++i)
      for (std::size_t k = 0; k < p && chk.pass; ++k)
        for (std::size_t a = 0; a < n && chk.pass; ++a)
          for (std::size_t b = 0; b < n && chk.pass; ++b) {
            Rational lhs = 0;
            for (std::size_t c = 0; c < n; ++c)
              lhs += spec.E[i](b, c) * hol.D[k](c, a) - spec.E[i](a, c) * hol.D[k](c, b);
            Rational rhs = 0;
            for (std::size_t j = 0; j < p; ++j)
              rhs += spec.E[j](a, b) * hol.F[j](i, k);
            if (lhs != rhs)
              chk = {kCheckHolonomyInvariance, false,
                     "lhs " + to_string(lhs) + " != rhs " + to_string(rhs) + " at (i,k,a,b)=" + idx({i, k, a, b})};
          }
    report.checks.push_back(std::move(chk));
  }

  {
    // C^E_AB C^F_EC + C^E_BC C^F_EA + C^E_CA C^F_EB = 0
    auto term = [&](std::size_t f, std::size_t a, std::size_t b, std::size_t c) {
      Rational s = 0;
      for (std::size_t e = 0; e < N; ++e) {
        const Rational &x = hol.structure_constant(e, a, b);
        if (!is_zero(x) && !is_zero(hol.structure_constant(f, e, c)))
          s += x * hol.structure_constant(f, e, c);
      }
      return s;
    };
    ValidationCheck chk = pass_check(kCheckJacobi);
    for (std::size_t a = 0; a < N && chk.pass; ++a)
      for (std::size_t b = a + 1; b < N && chk.pass; ++b)
        for (std::size_t c = b + 1; c < N && chk.pass; ++c)
          for (std::size_t f = 0; f < N && chk.pass; ++f) {
            const Rational v = term(f, a, b, c) + term(f, b, c, a) + term(f, c, a, b);
            if (!is_zero(v))
              chk = {kCheckJacobi, false, "residual " + to_string(v) + " at (F;A,B,C)=" + idx({f, a, b, c})};
          }
    report.checks.push_back(std::move(chk));
  }

  {
    ValidationCheck chk = pass_check(kCheckAdjointClosure);
    for (std::size_t a = 0; a < N && chk.pass; ++a)
      for (std::size_t b = a + 1; b < N && chk.pass; ++b) {
        RationalMatrix diff = commutator(hol.C[a], hol.C[b]);
        for (std::size_t c = 0; c < N; ++c) {
          const Rational &s = hol.structure_constant(c, a, b);
          if (!is_zero(s))
            diff -= s * hol.C[c];
        }
        if (!diff.is_zero())
          chk = {kCheckAdjointClosure, false, "[C_A, C_B] != C^C_AB C_C at (A,B)=" + idx({a, b})};
      }
    report.checks.push_back(std::move(chk));
  }

  return report;
}

CurvatureReport curvature_scalars(const SpaceSpec &spec, const HolonomyRealization &hol) {
  const auto n = spec.n;
  const auto p = spec.p;
  const std::size_t N = n + p;
  CurvatureReport out;
  out.riemann = reconstruct_riemann(spec);
  const RationalMatrix g_inv = spec.g.inverse();

  out.ricci = RationalMatrix(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Rational s = 0;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          if (!is_zero(g_inv(c, d)))
            s += g_inv(c, d) * out.riemann(d, a, c, b);
      out.ricci(a, b) = s;
    }
  out.R = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      out.R += g_inv(a, b) * out.ricci(a, b);

  out.R_H = 0;
  if (p > 0) {
    const RationalMatrix beta_inv = spec.beta.inverse();
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < p; ++k)
        if (!is_zero(beta_inv(i, k)))
          out.R_H += beta_inv(i, k) * (hol.F[i] * hol.F[k]).trace();
    out.R_H *= Rational(-1, 4);
  }

  const RationalMatrix gamma_inv = hol.gamma.inverse();
  Rational rg = 0;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      if (!is_zero(gamma_inv(a, b)))
        rg += gamma_inv(a, b) * (hol.C[a] * hol.C[b]).trace();
  rg *= Rational(-1, 4);
  out.R_G_direct = rg;
  out.R_G = Rational(3, 4) * out.R + out.R_H;
  if (out.R_G != out.R_G_direct)
    throw InternalInconsistency("space '" + spec.name + "': R_G from gamma and C is " + to_string(out.R_G_direct) +
                                " but 3/4 R + R_H is " + to_string(out.R_G));
  return out;
}

} // namespace heatgen
