#ifndef SSGIBBS_RNG_HPP
#define SSGIBBS_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ssgibbs {

// Random-variate generation for every distribution the sampler needs.
//
// Parameterizations used throughout:
//   exponential(rate)        mean = 1/rate
//   gamma(shape, rate)       mean = shape/rate
//   inv_gamma(shape, scale)  mean = scale/(shape-1) for shape > 1
//   inverse_gaussian(mu, lambda)
//       density ∝ x^{-3/2} exp[-lambda (x-mu)^2 / (2 mu^2 x)]
//       mean = mu, variance = mu^3/lambda.
//       Mean of a reciprocal draw is 1/mu + 1/lambda.
//   gig_half(a, b)           GIG(p=1/2, a, b), density ∝ x^{-1/2} exp[-(a x + b/x)/2],
//       drawn as the reciprocal of an inverse-Gaussian variate.
//
// All transforms are implemented on top of a single 64-bit generator so a
// fixed (seed, stream) pair reproduces the identical draw sequence within
// one build. One stream per chain; streams are never shared.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1); safe for log().
  double uniform_pos();
  // Uniform integer in {0, ..., n-1}, n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  double normal(double mean = 0.0, double sd = 1.0);
  double exponential(double rate);
  double gamma(double shape, double rate);
  double inv_gamma(double shape, double scale);
  double beta(double a, double b);
  bool bernoulli(double prob);

  // Michael-Schucany-Haas: one chi-square(1) draw, one uniform choice
  // between the two roots. Non-finite or non-positive output falls back
  // to mu.
  double inverse_gaussian(double mu, double lambda);

  // tau^2 ~ GIG(1/2, a, b) via 1/IG(sqrt(a/b), a). b is clamped at 1e-12
  // before forming the IG mean so near-zero coefficients stay finite.
  double gig_half(double a, double b);

  // Draw from N(m, P^{-1}) where P m = linear_term, via a fresh Cholesky
  // P = R^T R and x = m + R^{-1} eps. Throws on factorization failure.
  Eigen::VectorXd mvn_from_precision(const Eigen::MatrixXd& precision,
                                     const Eigen::VectorXd& linear_term);

 private:
  std::mt19937_64 gen_;
};

}  // namespace ssgibbs

#endif  // SSGIBBS_RNG_HPP
