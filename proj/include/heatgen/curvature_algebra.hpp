#pragma once

// Curvature data of a compact symmetric space and the Lie-algebraic
// structure derived from it. Everything here is exact; there are no
// tolerances.
//
// Index conventions (frame indices a,b,... in 0..n-1, holonomy indices
// i,j,... in 0..p-1, isometry indices A = (a, i) in 0..n+p-1):
//   R_abcd           = beta_ik E^i_ab E^k_cd
//   (D_i)^a_b        = -beta_ik E^k_cb g^ca
//   [D_i, D_k]       = F^j_ik D_j,          (F_i)^j_k = F^j_ik
//   (C_A)^B_C        = C^B_AC

#include "heatgen/rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace heatgen {

/// Raw algebraic input describing a symmetric space.
struct SpaceSpec {
  std::string name;
  std::size_t n = 0;
  std::size_t p = 0;
  RationalMatrix g;              // frame metric g_ab, n x n
  RationalMatrix beta;           // holonomy metric beta_ik, p x p
  std::vector<RationalMatrix> E; // p antisymmetric n x n generators E^i_ab

  friend bool operator==(const SpaceSpec &, const SpaceSpec &) = default;
};

/// Throws InvalidSpace naming the first violated invariant.
void check_space(const SpaceSpec &spec);

/// Dense rank-4 array with every index in 0..n-1.
class Tensor4 {
public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n) {}

  std::size_t dim() const { return n_; }
  Rational &operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  const Rational &operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  std::span<const Rational> data() const { return data_; }

  friend bool operator==(const Tensor4 &, const Tensor4 &) = default;

private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

struct HolonomyRealization {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<RationalMatrix> D;
  std::vector<RationalMatrix> F;
  RationalMatrix gamma; // blockdiag(g, beta)
  std::vector<RationalMatrix> C;

  std::size_t isometry_dim() const { return n + p; }

  /// C^upper_{lower1 lower2}.
  const Rational &structure_constant(std::size_t upper, std::size_t lower1, std::size_t lower2) const {
    return C[lower1](upper, lower2);
  }
};

/// Computes D by contraction, F by an exact linear solve and assembles gamma
/// and the adjoint matrices C_A. Throws DegenerateBasis or
/// CommutatorOutsideSpan.
HolonomyRealization derive_holonomy(const SpaceSpec &spec);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  const ValidationCheck *find(const std::string &name) const;
  /// Comma-separated names of failed checks.
  std::string failures() const;
};

// Check names used in ValidationReport.
inline constexpr const char *kCheckRiemannSymmetries = "riemann-symmetries";
inline constexpr const char *kCheckIntegrability = "curvature-integrability";
inline constexpr const char *kCheckHolonomyInvariance = "holonomy-invariance";
inline constexpr const char *kCheckJacobi = "jacobi";
inline constexpr const char *kCheckAdjointClosure = "adjoint-closure";

/// Exact evaluation of the identities that characterise a symmetric space.
/// Failures are recorded in the report, never thrown.
ValidationReport validate_symmetric_space(const SpaceSpec &spec, const HolonomyRealization &hol);

/// R_abcd = beta_ik E^i_ab E^k_cd.
Tensor4 reconstruct_riemann(const SpaceSpec &spec);

/// Raises every index of a covariant rank-4 tensor with the inverse metric.
Tensor4 raise_all(const Tensor4 &lower, const RationalMatrix &g_inv);

struct CurvatureReport {
  Tensor4 riemann;
  RationalMatrix ricci; // R_ab = R^c_acb
  Rational R;
  Rational R_H;
  Rational R_G;        // -1/4 gamma^AB C^C_AD C^D_BC
  Rational R_G_direct; // same quantity, kept for reporting
};

/// Throws InternalInconsistency when R_G from its definition differs from
/// 3/4 R + R_H.
CurvatureReport curvature_scalars(const SpaceSpec &spec, const HolonomyRealization &hol);

} // namespace heatgen
