#include "heatgen/errors.hpp"
#include "heatgen/gaussian_averager.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

namespace heatgen {

Eigen::MatrixXd to_eigen(const RationalMatrix &m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c).get_d();
  return out;
}

Eigen::MatrixXd sinhc(const Eigen::MatrixXd &x) {
  const auto n = x.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  if (n == 0)
    return id;
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25)
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Eigen::MatrixXd y = x / std::ldexp(1.0, squarings);
  const Eigen::MatrixXd y2 = y * y;

  // sinh(Y)/Y and cosh(Y) to ||Y|| <= 1/4; 12 terms is below double epsilon.
  Eigen::MatrixXd s = id, c = id, term = id;
  double fs = 1.0, fc = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term = term * y2;
    fc /= (2.0 * k - 1) * (2.0 * k);
    fs /= (2.0 * k) * (2.0 * k + 1);
    s += fs * term;
    c += fc * term;
  }
  // sinhc(2Y) = sinhc(Y) cosh(Y),  cosh(2Y) = 2 cosh(Y)^2 - 1
  for (int k = 0; k < squarings; ++k) {
    s = s * c;
    c = 2.0 * c * c - id;
  }
  return s;
}

bool DetFactorizationReport::passed() const {
  for (const auto &s : samples)
    if (!s.pass)
      return false;
  return true;
}

std::vector<std::vector<Rational>> random_omegas(std::size_t p, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  std::vector<std::vector<Rational>> out(count, std::vector<Rational>(p));
  for (auto &w : out)
    for (auto &x : w)
      x = Rational(dist(gen), 1000);
  return out;
}

DetFactorizationReport check_det_factorization(const HolonomyRealization &hol,
                                               const std::vector<std::vector<Rational>> &omegas, double tol) {
  const auto n = static_cast<Eigen::Index>(hol.n);
  const auto p = hol.p;
  const auto N = static_cast<Eigen::Index>(hol.isometry_dim());
  std::vector<Eigen::MatrixXd> c_hol, d, f;
  for (std::size_t i = 0; i < p; ++i) {
    c_hol.push_back(to_eigen(hol.C[hol.n + i]));
    d.push_back(to_eigen(hol.D[i]));
    f.push_back(to_eigen(hol.F[i]));
  }
  DetFactorizationReport report;
  for (const auto &w : omegas) {
    Eigen::MatrixXd cw = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd dw = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd fw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
      const double wi = w.at(i).get_d();
      cw += wi * c_hol[i];
      dw += wi * d[i];
      fw += wi * f[i];
    }
    DetFactorizationSample s;
    s.lhs = sinhc(0.5 * cw).determinant();
    s.rhs = sinhc(0.5 * dw).determinant() * (p ? sinhc(0.5 * fw).determinant() : 1.0);
    s.rel_error = s.lhs == 0.0 ? std::abs(s.rhs) : std::abs(s.lhs - s.rhs) / std::abs(s.lhs);
    s.pass = s.rel_error < tol;
    report.max_rel_error = std::max(report.max_rel_error, s.rel_error);
    report.samples.push_back(s);
  }
  return report;
}

NumericMethod default_method(std::size_t p) { return p <= 3 ? NumericMethod::Quadrature : NumericMethod::MonteCarlo; }

namespace {

class Integrand {
public:
  Integrand(const HolonomyRealization &hol, double t, double margin)
      : half_root_t_(0.5 * std::sqrt(t)), limit_(std::numbers::pi - margin) {
    for (std::size_t i = 0; i < hol.p; ++i) {
      d_.push_back(to_eigen(hol.D[i]));
      f_.push_back(to_eigen(hol.F[i]));
    }
    n_ = static_cast<Eigen::Index>(hol.n);
    p_ = static_cast<Eigen::Index>(hol.p);
  }

  /// Integrand value, or nullopt when omega lies outside the pole-free ball.
  std::optional<double> operator()(const Eigen::VectorXd &omega) const {
    Eigen::MatrixXd xd = Eigen::MatrixXd::Zero(n_, n_);
    Eigen::MatrixXd xf = Eigen::MatrixXd::Zero(p_, p_);
    for (Eigen::Index i = 0; i < p_; ++i) {
      xd += omega(i) * d_[static_cast<std::size_t>(i)];
      xf += omega(i) * f_[static_cast<std::size_t>(i)];
    }
    xd *= half_root_t_;
    xf *= half_root_t_;
    if (spectral_norm(xd) >= limit_ || spectral_norm(xf) >= limit_)
      return std::nullopt;
    const double det_d = sinhc(xd).determinant();
    const double det_f = sinhc(xf).determinant();
    if (det_d <= 0.0 || det_f <= 0.0)
      return std::nullopt;
    return std::sqrt(det_f / det_d);
  }

private:
  static double spectral_norm(const Eigen::MatrixXd &x) {
    if (x.size() == 0)
      return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    return svd.singularValues()(0);
  }

  double half_root_t_;
  double limit_;
  Eigen::Index n_ = 0, p_ = 0;
  std::vector<Eigen::MatrixXd> d_, f_;
};

// Accumulates f - 1 to keep the variance estimate well conditioned.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  std::size_t truncated = 0;
};

struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights; // for weight exp(-x^2)
};

GaussHermite gauss_hermite(std::size_t count) {
  // Golub-Welsch on the Jacobi matrix of the physicists' Hermite polynomials.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  for (std::size_t k = 1; k < count; ++k) {
    const double b = std::sqrt(0.5 * static_cast<double>(k));
    jac(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussHermite gh;
  for (std::size_t k = 0; k < count; ++k) {
    gh.nodes.push_back(es.eigenvalues()(static_cast<Eigen::Index>(k)));
    const double v0 = es.eigenvectors()(0, static_cast<Eigen::Index>(k));
    gh.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return gh;
}

struct QuadratureResult {
  double mean = 0.0;
  double truncated_mass = 0.0;
  std::size_t truncated = 0;
  std::size_t evaluations = 0;
};

QuadratureResult tensor_quadrature(const Integrand &f, const Eigen::MatrixXd &transform, std::size_t nodes) {
  const auto p = static_cast<std::size_t>(transform.rows());
  const GaussHermite gh = gauss_hermite(nodes);
  const double norm = std::pow(std::numbers::pi, -0.5 * static_cast<double>(p));
  std::vector<std::size_t> digit(p, 0);
  QuadratureResult out;
  Eigen::VectorXd x(static_cast<Eigen::Index>(p));
  long double acc = 0.0L;
  while (true) {
    double w = norm;
    for (std::size_t i = 0; i < p; ++i) {
      x(static_cast<Eigen::Index>(i)) = std::numbers::sqrt2 * gh.nodes[digit[i]];
      w *= gh.weights[digit[i]];
    }
    const auto v = f(transform * x);
    ++out.evaluations;
    if (v) {
      acc += static_cast<long double>(w) * static_cast<long double>(*v);
    } else {
      out.truncated_mass += w;
      ++out.truncated;
    }
    std::size_t i = 0;
    while (i < p && ++digit[i] == nodes) {
      digit[i] = 0;
      ++i;
    }
    if (i == p)
      break;
  }
  out.mean = static_cast<double>(acc);
  return out;
}

constexpr std::size_t kBlockSize = 4096;

Accumulator mc_block(const Integrand &f, const Eigen::MatrixXd &transform, std::uint64_t seed, std::size_t block,
                     std::size_t count) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal;
  const auto p = transform.rows();
  Eigen::VectorXd z(p);
  Accumulator acc;
  for (std::size_t s = 0; s < count; ++s) {
    for (Eigen::Index i = 0; i < p; ++i)
      z(i) = normal(gen);
    const auto v = f(transform * z);
    const double d = (v ? *v : 0.0) - 1.0;
    acc.sum += d;
    acc.sum_sq += d * d;
    ++acc.count;
    if (!v)
      ++acc.truncated;
  }
  return acc;
}

} // namespace

NumericResult numeric_average(const SpaceSpec &spec, const HolonomyRealization &hol, double t,
                              const NumericOptions &options) {
  if (!(t > 0.0))
    throw NonPositiveT("t must be positive, got " + std::to_string(t));
  const auto curv = curvature_scalars(spec, hol);
  NumericResult res;
  res.prefactor = std::exp(Rational(curv.R / 8 + curv.R_H / 6).get_d() * t);
  const std::size_t p = hol.p;
  if (p == 0) {
    res.value = res.prefactor;
    res.evaluations = 1;
    return res;
  }

  // omega = A z with A A^T = 2 beta^{-1}: z standard normal maps onto the weight.
  const Eigen::MatrixXd cov = 2.0 * to_eigen(spec.beta.inverse());
  const Eigen::MatrixXd transform = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  const Integrand f(hol, t, options.margin);

  double mean = 0.0, se = 0.0;
  if (options.method == NumericMethod::Quadrature) {
    std::size_t nodes = options.nodes;
    if (nodes == 0)
      nodes = p == 1 ? 64 : p == 2 ? 48 : p == 3 ? 28 : 12;
    const auto fine = tensor_quadrature(f, transform, nodes);
    const auto coarse = tensor_quadrature(f, transform, std::max<std::size_t>(2, nodes / 2));
    mean = fine.mean;
    se = std::abs(fine.mean - coarse.mean);
    res.truncated_mass = fine.truncated_mass;
    res.truncated_points = fine.truncated;
    res.evaluations = fine.evaluations + coarse.evaluations;
  } else {
    if (options.samples < 2)
      throw std::invalid_argument("Monte Carlo needs at least two samples");
    const std::size_t blocks = (options.samples + kBlockSize - 1) / kBlockSize;
    std::vector<Accumulator> parts(blocks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(
        blocks, options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency())));
    auto run = [&](unsigned w) {
      for (std::size_t b = w; b < blocks; b += workers) {
        const std::size_t count = std::min(kBlockSize, options.samples - b * kBlockSize);
        parts[b] = mc_block(f, transform, options.seed, b, count);
      }
    };
    if (workers <= 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w)
        threads.emplace_back(run, w);
      for (auto &th : threads)
        th.join();
    }
    Accumulator total;
    for (const auto &a : parts) {
      total.sum += a.sum;
      total.sum_sq += a.sum_sq;
      total.count += a.count;
      total.truncated += a.truncated;
    }
    const double nn = static_cast<double>(total.count);
    const double dm = total.sum / nn;
    const double var = std::max(0.0, (total.sum_sq - nn * dm * dm) / (nn - 1.0));
    mean = 1.0 + dm;
    se = std::sqrt(var / nn);
    res.truncated_points = total.truncated;
    res.truncated_mass = static_cast<double>(total.truncated) / nn;
    res.evaluations = total.count;
  }
  if (res.truncated_mass > options.max_truncated_fraction)
    throw SingularityHit("t = " + std::to_string(t) + ": " + std::to_string(res.truncated_points) +
                         " points lie outside the pole-free ball (truncated mass " +
                         std::to_string(res.truncated_mass) + "); use a smaller t");
  res.value = res.prefactor * mean;
  res.std_error = res.prefactor * se;
  return res;
}

} // namespace heatgen
