#include "heatgen/heat_invariants.hpp"

#include "heatgen/errors.hpp"
#include "heatgen/space_catalog.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace heatgen {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string fmt_short(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<Rational> &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + to_string(v[i]);
  return s + "]";
}

} // namespace

bool HeatReport::passed() const {
  if (!validation.passed())
    return false;
  for (const auto &c : checks)
    if (!c.pass)
      return false;
  return true;
}

HeatReport heat_coefficients(const SpaceSpec &spec, std::size_t K, const ExpansionOptions &options) {
  const auto start = Clock::now();
  HeatReport report;
  report.space = spec.name;
  report.order = K;

  auto stage = Clock::now();
  HolonomyRealization hol;
  try {
    hol = derive_holonomy(spec);
  } catch (const InvalidSpace &) {
    throw;
  } catch (const Error &e) {
    throw ValidationError(e.what());
  }
  report.validation = validate_symmetric_space(spec, hol);
  if (!report.validation.passed())
    throw ValidationError("space '" + spec.name + "' is not a symmetric space datum (" + report.validation.failures() +
                          ")");
  const CurvatureReport curv = curvature_scalars(spec, hol);
  report.timing_ms["derive"] = elapsed_ms(stage);

  stage = Clock::now();
  const OmegaPolynomial log_integrand = integrand_log_expansion(hol, K, options);
  report.timing_ms["expand"] = elapsed_ms(stage);

  stage = Clock::now();
  const OmegaPolynomial integrand = exponentiate_with_prefactor(log_integrand, curv.R, curv.R_H, K);
  report.timing_ms["exponentiate"] = elapsed_ms(stage);

  stage = Clock::now();
  const RationalMatrix beta_inv = spec.p ? spec.beta.inverse() : RationalMatrix(0, 0);
  report.a = average(integrand, beta_inv).coeffs();
  report.timing_ms["average"] = elapsed_ms(stage);

  report.checks.push_back({"a0", report.a[0] == 1, "a0 = " + to_string(report.a[0])});
  const TSeries expected = TSeries::exp_linear(curv.R_G / 6, K);
  report.checks.push_back({"prefactor-identity", integrand.at_zero() == expected,
                           "integrand at omega = 0 vs exp(t R_G / 6), R_G = " + to_string(curv.R_G)});
  report.timing_ms["total"] = elapsed_ms(start);
  return report;
}

GilkeyCoefficients gilkey_reference(const SpaceSpec &spec, const CurvatureReport &curvature) {
  const RationalMatrix g_inv = spec.g.inverse();
  const auto n = spec.n;
  // Ric_ab Ric^ab
  const RationalMatrix ric_up = g_inv * curvature.ricci * g_inv;
  Rational ric2 = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      ric2 += curvature.ricci(a, b) * ric_up(a, b);
  const Tensor4 up = raise_all(curvature.riemann, g_inv);
  Rational riem2 = 0;
  const auto lo = curvature.riemann.data();
  const auto hi = up.data();
  for (std::size_t k = 0; k < lo.size(); ++k)
    riem2 += lo[k] * hi[k];
  const Rational &R = curvature.R;
  return {R / 6, R * R / 72 - ric2 / 180 + riem2 / 180};
}

GilkeyCoefficients gilkey_reference(const SpaceSpec &spec) {
  const auto hol = derive_holonomy(spec);
  return gilkey_reference(spec, curvature_scalars(spec, hol));
}

std::vector<Rational> product_factorize(std::span<const HeatReport> factors, std::size_t K) {
  std::vector<Rational> acc(K + 1);
  acc[0] = 1;
  for (const auto &f : factors) {
    if (f.a.size() < K + 1)
      throw OrderMismatch("factor '" + f.space + "' has order " + std::to_string(f.order) + ", need " +
                          std::to_string(K));
    std::vector<Rational> next(K + 1);
    for (std::size_t i = 0; i <= K; ++i)
      for (std::size_t j = 0; i + j <= K; ++j)
        next[i + j] += acc[i] * f.a[j];
    acc = std::move(next);
  }
  return acc;
}

double sphere_spectral_trace(std::size_t n, double t) {
  if (!(t > 0.0))
    throw NonPositiveT("t must be positive, got " + std::to_string(t));
  if (n < 2 || n > 6)
    throw std::invalid_argument("sphere_spectral_trace: n must be in 2..6");
  const double nd = static_cast<double>(n);
  const double volume = 2.0 * std::pow(std::numbers::pi, (nd + 1) / 2) / std::tgamma((nd + 1) / 2);
  // mult(l) = (2l+n-1) (l+n-2)! / (l! (n-1)!)
  const double peak = std::sqrt(nd / t); // terms decrease once l(l+n-1) t outgrows the polynomial growth
  double total = 0.0;
  for (std::size_t l = 0;; ++l) {
    const double ld = static_cast<double>(l);
    const double mult =
        (2 * ld + nd - 1) * std::exp(std::lgamma(ld + nd - 1) - std::lgamma(ld + 1) - std::lgamma(nd));
    const double term = mult * std::exp(-t * ld * (ld + nd - 1));
    total += term;
    if (ld > peak && term < 1e-16 * total)
      break;
  }
  return total / volume;
}

SpectralFit fit_sphere_spectrum(std::size_t n) {
  constexpr int kPoints = 12;
  constexpr int kDegree = 4;
  const double nd = static_cast<double>(n);
  Eigen::MatrixXd design(kPoints, kDegree + 1);
  Eigen::VectorXd y(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double t = 0.002 * (i + 1);
    y(i) = std::pow(4 * std::numbers::pi * t, nd / 2) * sphere_spectral_trace(n, t);
    for (int d = 0; d <= kDegree; ++d)
      design(i, d) = std::pow(t, d);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
  return {coef(0), coef(1)};
}

std::optional<std::size_t> unit_sphere_dimension(const SpaceSpec &spec) {
  const auto n = spec.n;
  if (n < 2 || spec.g != RationalMatrix::identity(n))
    return std::nullopt;
  const Tensor4 r = reconstruct_riemann(spec);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const int expected = (a == c && b == d ? 1 : 0) - (a == d && b == c ? 1 : 0);
          if (r(a, b, c, d) != expected)
            return std::nullopt;
        }
  return n;
}

HeatReport compare(const SpaceSpec &spec, std::size_t K, std::span<const double> t_grid, const CompareOptions &options) {
  const auto start = Clock::now();
  HeatReport report = heat_coefficients(spec, K, options.expansion);
  const auto hol = derive_holonomy(spec);
  const auto curv = curvature_scalars(spec, hol);
  const auto ref = gilkey_reference(spec, curv);

  if (K >= 1)
    report.checks.push_back({"a1-gilkey", report.a[1] == ref.a1,
                             "pipeline " + to_string(report.a[1]) + ", R/6 = " + to_string(ref.a1)});
  if (K >= 2)
    report.checks.push_back({"a2-gilkey", report.a[2] == ref.a2,
                             "pipeline " + to_string(report.a[2]) + ", curvature contraction " + to_string(ref.a2)});

  const TSeries series = report.series();
  const double last_term_coeff = std::abs(report.a[K].get_d());

  if (options.numeric) {
    const auto t0 = Clock::now();
    NumericOptions nopt;
    nopt.method = default_method(spec.p);
    nopt.samples = options.samples;
    nopt.seed = options.seed;
    for (const double t : t_grid) {
      const std::string name =
          "numeric t=" + fmt_short(t) + (nopt.method == NumericMethod::Quadrature ? " (quadrature)" : " (mc)");
      try {
        const auto res = numeric_average(spec, hol, t, nopt);
        const double expected = series.evaluate(t);
        const double remainder = last_term_coeff * std::pow(t, static_cast<double>(K));
        const double diff = std::abs(res.value - expected);
        const double tol = 3 * res.std_error + remainder + 1e-12;
        report.checks.push_back({name, diff <= tol,
                                 "series " + fmt_double(expected) + ", numeric " + fmt_double(res.value) + " +- " +
                                     fmt_double(res.std_error) + ", remainder " + fmt_double(remainder) +
                                     ", truncated mass " + fmt_double(res.truncated_mass)});
      } catch (const Error &e) {
        report.checks.push_back({name, false, e.what()});
      }
    }
    report.timing_ms["numeric"] = elapsed_ms(t0);
  }

  if (const auto sn = unit_sphere_dimension(spec); sn && *sn <= 6) {
    const auto t0 = Clock::now();
    const std::size_t n = *sn;
    const SpectralFit fit = fit_sphere_spectrum(n);
    const double a1_expected = static_cast<double>(n * (n - 1)) / 6.0;
    report.checks.push_back({"spectral-fit", std::abs(fit.a0 - 1) < 1e-6 && std::abs(fit.a1 - a1_expected) < 1e-4,
                             "fitted a0 " + fmt_double(fit.a0) + ", a1 " + fmt_double(fit.a1)});
    for (const double t : t_grid) {
      const double spectral = sphere_spectral_trace(n, t);
      const double asymptotic = std::pow(4 * std::numbers::pi * t, -static_cast<double>(n) / 2) * series.evaluate(t);
      const double rel = std::abs(asymptotic - spectral) / std::abs(spectral);
      report.checks.push_back({"spectral t=" + fmt_short(t), rel < options.spectral_tolerance,
                               "spectral " + fmt_double(spectral) + ", series " + fmt_double(asymptotic) +
                                   ", relative error " + fmt_double(rel)});
    }
    report.timing_ms["spectral"] = elapsed_ms(t0);
  }

  if (const auto factors = split_product(spec); factors.size() > 1) {
    const auto t0 = Clock::now();
    std::vector<HeatReport> parts;
    for (const auto &f : factors)
      parts.push_back(heat_coefficients(f, K, options.expansion));
    const auto conv = product_factorize(parts, K);
    report.checks.push_back({"product-factorization", conv == report.a,
                             std::to_string(factors.size()) + " factors, convolution " + fmt_list(conv)});
    report.timing_ms["product"] = elapsed_ms(t0);
  }

  report.timing_ms["total"] = elapsed_ms(start);
  return report;
}

} // namespace heatgen
