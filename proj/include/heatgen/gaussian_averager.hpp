#pragma once

// Gaussian averages over the holonomy variables omega with the normalised
// weight exp(-1/4 <omega, beta omega>), so that Cov(omega^i, omega^j) =
// 2 beta^{ij}. Two exact engines (Wick pairing and creation/annihilation
// normal ordering) plus floating-point quadrature / Monte Carlo of the full
// heat-kernel integrand.

#include "heatgen/curvature_algebra.hpp"
#include "heatgen/series_engine.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <vector>

namespace heatgen {

/// Multiset of holonomy indices, kept sorted.
class MomentKey {
public:
  MomentKey(std::size_t p, std::vector<std::size_t> indices);
  static MomentKey from_exponents(std::span<const unsigned> exponents);

  std::size_t p() const { return p_; }
  std::size_t degree() const { return indices_.size(); }
  const std::vector<std::size_t> &indices() const { return indices_; }

private:
  std::size_t p_;
  std::vector<std::size_t> indices_;
};

/// Sum over all perfect matchings of the key of prod 2 beta^{ab}; odd keys
/// give 0 and the empty key gives 1.
Rational wick_moment(const MomentKey &key, const RationalMatrix &beta_inv);

/// Vacuum expectation <0| b^{i_1} ... b^{i_2k} exp(lambda beta^{jk} b*_j b*_k) |0>
/// evaluated by letting each annihilator act as d/db* on the truncated
/// exponential. lambda is calibrated once so the degree-2 moment matches the
/// Wick engine.
class FockEngine {
public:
  explicit FockEngine(RationalMatrix beta_inv);

  Rational moment(const MomentKey &key) const;
  /// Uncalibrated moment (lambda = 1).
  Rational raw_moment(const MomentKey &key) const;
  const Rational &calibration() const { return lambda_; }

private:
  using State = std::map<std::vector<unsigned>, Rational>;
  const State &exponential_part(std::size_t k) const;

  RationalMatrix beta_inv_;
  std::size_t p_;
  Rational lambda_ = 1;
  mutable std::map<std::size_t, State> cache_;
};

Rational fock_moment(const MomentKey &key, const RationalMatrix &beta_inv);

/// Termwise Wick average; the t-grade of every term is kept.
TSeries average(const OmegaPolynomial &poly, const RationalMatrix &beta_inv);

// ---------------------------------------------------------------------------
// Floating-point evaluation

enum class NumericMethod { Quadrature, MonteCarlo };

/// Quadrature for p <= 3, Monte Carlo above.
NumericMethod default_method(std::size_t p);

struct NumericOptions {
  NumericMethod method = NumericMethod::MonteCarlo;
  std::size_t samples = 200'000;    // Monte Carlo
  std::size_t nodes = 0;            // Gauss-Hermite nodes per axis; 0 = automatic
  std::uint64_t seed = 1;
  double margin = 0.01;             // ball radius is pi - margin
  unsigned workers = 0;             // 0 = hardware concurrency
  double max_truncated_fraction = 1e-3;
};

struct NumericResult {
  double value = 0.0;     // (4 pi t)^{n/2} U^diag(t)
  double std_error = 0.0; // MC standard error, or |Q(N) - Q(N/2)| for quadrature
  double truncated_mass = 0.0;
  std::size_t truncated_points = 0;
  std::size_t evaluations = 0;
  double prefactor = 1.0; // exp{(R/8 + R_H/6) t}
};

/// Throws NonPositiveT, or SingularityHit when more than
/// max_truncated_fraction of the Gaussian mass lies outside the pole-free ball.
NumericResult numeric_average(const SpaceSpec &spec, const HolonomyRealization &hol, double t,
                              const NumericOptions &options);

Eigen::MatrixXd to_eigen(const RationalMatrix &m);

/// sinh(X)/X as a matrix function (Taylor series with scaling and squaring).
Eigen::MatrixXd sinhc(const Eigen::MatrixXd &x);

struct DetFactorizationSample {
  double lhs = 0.0; // det_G over the full adjoint matrix C(omega)
  double rhs = 0.0; // det_TM(D) * det_H(F)
  double rel_error = 0.0;
  bool pass = false;
};

struct DetFactorizationReport {
  std::vector<DetFactorizationSample> samples;
  double max_rel_error = 0.0;
  bool passed() const;
};

/// Random rational omegas k/1000, k uniform in [-1000, 1000].
std::vector<std::vector<Rational>> random_omegas(std::size_t p, std::size_t count, std::uint64_t seed);

DetFactorizationReport check_det_factorization(const HolonomyRealization &hol,
                                               const std::vector<std::vector<Rational>> &omegas, double tol = 1e-10);

} // namespace heatgen
