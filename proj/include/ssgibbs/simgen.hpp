#ifndef SSGIBBS_SIMGEN_HPP
#define SSGIBBS_SIMGEN_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ssgibbs/rng.hpp"
#include "ssgibbs/types.hpp"

namespace ssgibbs {

// Block-correlated Gaussian benchmark: rows of X are N(0, Sigma + jitter I)
// with Sigma block-diagonal, unit diagonal and off-diagonal rho_block inside
// blocks of block_size. The truth occupies the first block: +1 on the first
// k_true/2 coordinates, -1 on the next k_true/2.
struct SimSpec {
  Eigen::Index n = 500;
  Eigen::Index p = 10000;
  int block_size = 20;
  double rho_block = 0.3;
  int k_true = 10;
  double sigma2_true = 1.0;
  std::uint64_t seed = 1;
};

struct SimInstance {
  Dataset data;
  Eigen::VectorXd beta_true;
  std::vector<int> truth;  // 0-based indices of nonzero coefficients
  double jitter_used = 0.0;
  double snr = 0.0;            // closed form k_true (1 - rho) / sigma2
  double pve = 0.0;            // closed form
  double pve_empirical = 0.0;  // from the realized instance
};

// Draws the design block by block: each block's covariance is factorized
// independently (identical in law to factorizing the full block-diagonal
// Sigma). Jitter starts at 0, then 1e-8, x10 per Cholesky failure, capped at
// 1e-3; the cap is unreachable for rho_block < 1.
std::pair<Eigen::MatrixXd, double> gen_design(const SimSpec& spec, RandomStream& rng);

// Balanced +-1 coefficient vector; throws for odd k_true.
Eigen::VectorXd true_beta(const SimSpec& spec);

Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                             double sigma2, RandomStream& rng);

// (snr, pve) from the closed form beta' Sigma beta = k_true (1 - rho).
std::pair<double, double> snr_pve(const SimSpec& spec);

SimInstance generate(const SimSpec& spec);

}  // namespace ssgibbs

#endif  // SSGIBBS_SIMGEN_HPP
