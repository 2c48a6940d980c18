#ifndef SSGIBBS_GRAM_HPP
#define SSGIBBS_GRAM_HPP

#include <vector>

#include <Eigen/Dense>

#include "ssgibbs/types.hpp"

namespace ssgibbs {

// Length-p marginal statistics; the only precomputation the random-scan
// sampler needs. Memory stays O(p).
//   s_j   = x_j' y
//   t_j   = ||x_j||^2
//   c_y   = y' y
//   rho_j = |s_j| / sqrt(t_j * c_y), absolute marginal correlation.
// Zero-norm columns get rho_j = 0 and are flagged degenerate so the
// defensive mixture still assigns them positive scan mass.
struct MarginalStats {
  Eigen::VectorXd s;
  Eigen::VectorXd t;
  double c_y = 0.0;
  Eigen::VectorXd rho;
  std::vector<std::uint8_t> degenerate;
};

enum class GramMode { onthefly, full };

// Full mode stores G0 = X'X for the full-sweep baseline; on-the-fly mode
// stores nothing beyond the O(p) statistics.
struct GramBackend {
  GramMode mode = GramMode::onthefly;
  Eigen::MatrixXd G0;  // p x p, populated only in full mode
};

MarginalStats precompute_marginals(const Dataset& data);

// X_A' x_j in O(n|A|); empty active set yields an empty vector.
Eigen::VectorXd cross_product_active(const Dataset& data, const std::vector<int>& active,
                                     int j);

// Builds G0 = X'X. Refuses when p exceeds the cap (p^2 storage guard);
// callers that cannot raise the cap should use on-the-fly mode instead.
GramBackend build_full_gram(const Dataset& data, Eigen::Index p_cap = 5000);

// Center and scale columns of X (and y) in place; sd uses n-1. Zero-variance
// columns are centered only. Returns per-column degeneracy flags.
std::vector<std::uint8_t> standardize_inplace(Dataset& data);

}  // namespace ssgibbs

#endif  // SSGIBBS_GRAM_HPP
