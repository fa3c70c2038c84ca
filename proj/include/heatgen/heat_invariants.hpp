#pragma once

// Top-level pipeline: exact heat kernel coefficients a_0..a_K of the Laplacian
// on a symmetric space, normalised so that
//   U^diag(t) ~ (4 pi t)^{-n/2} sum_k a_k t^k,
// together with the independent checks used to trust them.

#include "heatgen/curvature_algebra.hpp"
#include "heatgen/gaussian_averager.hpp"
#include "heatgen/series_engine.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heatgen {

struct HeatCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct HeatReport {
  std::string space;
  std::size_t order = 0;
  std::vector<Rational> a;
  std::vector<HeatCheck> checks;
  ValidationReport validation;
  std::map<std::string, double> timing_ms;

  bool passed() const;
  TSeries series() const { return TSeries(a); }
};

/// derive_holonomy -> integrand_log_expansion -> exponentiate_with_prefactor
/// -> average. Throws ValidationError for data that are not a symmetric
/// space and propagates OrderTooLarge.
HeatReport heat_coefficients(const SpaceSpec &spec, std::size_t K, const ExpansionOptions &options = {});

struct GilkeyCoefficients {
  Rational a1;
  Rational a2;
};

/// a1 = R/6, a2 = R^2/72 - Ric^2/180 + Riem^2/180 (Delta R = 0 for parallel
/// curvature), by exact contraction.
GilkeyCoefficients gilkey_reference(const SpaceSpec &spec, const CurvatureReport &curvature);
GilkeyCoefficients gilkey_reference(const SpaceSpec &spec);

/// Cauchy product of the factors' coefficient lists up to order K. Throws
/// OrderMismatch if a factor was computed to a lower order.
std::vector<Rational> product_factorize(std::span<const HeatReport> factors, std::size_t K);

/// U^diag(t) on the unit sphere S^n from its Laplace spectrum
/// l(l+n-1), l >= 0. Valid for n in 2..6; throws NonPositiveT.
double sphere_spectral_trace(std::size_t n, double t);

struct SpectralFit {
  double a0 = 0.0;
  double a1 = 0.0;
};

/// Least-squares fit of (4 pi t)^{n/2} U^diag(t) at small t; validates the
/// spectrum formula against a0 = 1, a1 = n(n-1)/6.
SpectralFit fit_sphere_spectrum(std::size_t n);

/// n when the datum is the unit round sphere S^n with identity frame metric.
std::optional<std::size_t> unit_sphere_dimension(const SpaceSpec &spec);

struct CompareOptions {
  ExpansionOptions expansion;
  std::size_t samples = 200'000;
  std::uint64_t seed = 1;
  bool numeric = true;
  double spectral_tolerance = 1e-3;
};

/// Runs the pipeline and attaches every applicable cross-check. Failures are
/// report entries, not exceptions.
HeatReport compare(const SpaceSpec &spec, std::size_t K, std::span<const double> t_grid,
                   const CompareOptions &options = {});

} // namespace heatgen
