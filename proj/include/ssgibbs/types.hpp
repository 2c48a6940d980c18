#ifndef SSGIBBS_TYPES_HPP
#define SSGIBBS_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ssgibbs/rng.hpp"

namespace ssgibbs {

// Prior hyperparameters. All fields strictly positive.
//   lambda1  Laplace rate scale controlling overall sparsity of the slab.
//   a_kappa, b_kappa    Gamma(shape, rate) prior on the global precision kappa^2.
//   a_sigma, b_sigma    InvGamma(shape, scale) prior on the noise variance sigma^2.
//   alpha_a, beta_a     Gamma prior on a_pi.
//   alpha_b, beta_b     Gamma prior on b_pi. A smaller beta_b encourages larger
//                       b_pi and hence sparser models.
//   sigma_prop          log-scale random-walk step for the (a_pi, b_pi) move.
struct Hyperparameters {
  double lambda1 = 1.0;
  double a_kappa = 1.0;
  double b_kappa = 1.0;
  double a_sigma = 1.0;
  double b_sigma = 1.0;
  double alpha_a = 1.0;
  double beta_a = 1.0;
  double alpha_b = 1.0;
  double beta_b = 0.1;
  double sigma_prop = 0.5;
};

enum class ScanMode { random_scan, full_sweep };

// Everything the chain samples. `active` lists the indices with z_j = 1 in
// stable insertion order; `beta_active` is aligned with it. tau2 has length p.
struct ModelState {
  std::vector<std::uint8_t> z;
  std::vector<int> active;
  std::vector<double> beta_active;
  std::vector<double> tau2;
  double kappa2 = 1.0;
  double sigma2 = 1.0;
  double pi = 0.5;
  double a_pi = 1.0;
  double b_pi = 1.0;
};

struct ChainConfig {
  Hyperparameters hyper;
  double epsilon = 0.1;      // defensive mixing weight, in (0,1)
  int m = 500;               // coordinates scanned per iteration
  int n_iter = 10000;
  int burn_in = 2000;
  int thin = 1;
  int k_target = 20;         // initial expected model size
  ScanMode scan_mode = ScanMode::random_scan;
  std::uint64_t seed = 1;
  bool standardize = false;
};

struct Dataset {
  Eigen::MatrixXd X;                              // n x p
  Eigen::VectorXd y;                              // length n
  std::optional<std::vector<std::string>> names;  // length p when present
  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

// Checks every invariant on (config, data) and throws std::invalid_argument
// naming the offending field. Returns normally when the pair is valid.
void validate(const ChainConfig& config, const Dataset& data);

// Draws the initial state: an active set of size min(k_target, p) chosen
// uniformly without replacement, beta_j ~ N(0, 0.1^2) on it, tau2_j ~
// Exp(rate 3*lambda1^2) everywhere, pi = k_target/p, a_pi = 1,
// b_pi = a_pi*(p/k_target - 1) floored at 1e-6, kappa2 = sigma2 = 1.
ModelState initialize_state(const ChainConfig& config, Eigen::Index p, RandomStream& rng);

}  // namespace ssgibbs

#endif  // SSGIBBS_TYPES_HPP
