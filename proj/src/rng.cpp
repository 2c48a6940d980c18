#include "ssgibbs/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace ssgibbs {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu),
                    static_cast<std::uint32_t>(stream >> 32)};
  gen_.seed(seq);
}

double RandomStream::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_pos() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be >= 1");
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
}

double RandomStream::normal(double mean, double sd) {
  // Box-Muller, cosine branch only: two uniforms per draw, no cached state.
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RandomStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform_pos()) / rate;
}

double RandomStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Boost transform: G(shape) ~ G(shape+1) * U^{1/shape}.
    const double g = gamma(shape + 1.0, 1.0);
    const double u = uniform_pos();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double RandomStream::inv_gamma(double shape, double scale) {
  const double g = gamma(shape, scale);
  return 1.0 / g;
}

double RandomStream::beta(double a, double b) {
  const double ga = gamma(a, 1.0);
  const double gb = gamma(b, 1.0);
  double x = ga / (ga + gb);
  // Keep the draw strictly inside (0,1) so log-odds stay finite.
  if (x < 1e-300) x = 1e-300;
  if (x > 1.0 - 1e-16) x = 1.0 - 1e-16;
  return x;
}

bool RandomStream::bernoulli(double prob) { return uniform() < prob; }

double RandomStream::inverse_gaussian(double mu, double lambda) {
  if (!(mu > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("inverse_gaussian: mu and lambda must be positive");
  const double z = normal();
  const double nu = z * z;
  const double w = mu * nu;
  const double x = mu * (1.0 + (w - std::sqrt(w * (4.0 * lambda + w))) / (2.0 * lambda));
  double draw;
  if (uniform() <= mu / (mu + x)) {
    draw = x;
  } else {
    draw = mu * mu / x;
  }
  if (!std::isfinite(draw) || draw <= 0.0) draw = mu;
  return draw;
}

double RandomStream::gig_half(double a, double b) {
  if (!(a > 0.0)) throw std::invalid_argument("gig_half: a must be positive");
  if (b < 1e-12) b = 1e-12;
  const double mu = std::sqrt(a / b);
  const double omega = inverse_gaussian(mu, a);
  double x = 1.0 / omega;
  if (!std::isfinite(x)) x = 1e300;
  return x;
}

Eigen::VectorXd RandomStream::mvn_from_precision(const Eigen::MatrixXd& precision,
                                                 const Eigen::VectorXd& linear_term) {
  const Eigen::Index k = precision.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mvn_from_precision: Cholesky factorization failed");
  Eigen::VectorXd mean = llt.solve(linear_term);
  Eigen::VectorXd eps(k);
  for (Eigen::Index i = 0; i < k; ++i) eps(i) = normal();
  // x = R^{-1} eps with R = L^T, so cov(x) = precision^{-1}.
  llt.matrixU().solveInPlace(eps);
  return mean + eps;
}

}  // namespace ssgibbs
