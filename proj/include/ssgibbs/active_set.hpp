#ifndef SSGIBBS_ACTIVE_SET_HPP
#define SSGIBBS_ACTIVE_SET_HPP

#include <vector>

#include <Eigen/Dense>

#include "ssgibbs/types.hpp"

namespace ssgibbs {

// Proposals below this Schur-complement floor are rejected for stability.
inline constexpr double kSchurFloor = 1e-12;

// Add-move quantities for candidate j (not in the active set):
//   s = kappa^2/tau2_j + t_j/sigma^2 - g' M^{-1} g   (Schur complement)
//   u = h0_j/sigma^2 - g' M^{-1} h_A                 (residual score)
//   delta_loglik = -1/2 (log(tau2_j/kappa^2) + log s - u^2/s)
// `ok` is false when s <= kSchurFloor (near-collinear candidate).
struct AddProposal {
  int j = -1;
  double s = 0.0;
  double u = 0.0;
  double delta_loglik = 0.0;
  bool ok = false;
  double t_j = 0.0;
  double h0_j = 0.0;
  double tau2_j = 0.0;
  Eigen::VectorXd g0_col;  // unscaled G0_{A,j}, kept for the accepted update
  Eigen::VectorXd Minv_g;  // M^{-1} g (scaled), reused by apply_add
};

// Drop-move quantities for active j. s = 1/g where g is the diagonal entry
// of M^{-1} at j; delta_q = q(A) - q(A \ {j}).
struct DropProposal {
  int j = -1;
  double s = 0.0;
  double delta_q = 0.0;
  double delta_loglik = 0.0;
  bool needs_refresh = false;  // set when g <= 0 numerically
};

// Maintains the active-set precision workspace
//   M = diag(kappa^2/tau2_j)_{j in A} + G0_AA / sigma^2
// together with M^{-1}, log|M| and the quadratic form q(A) = h_A' M^{-1} h_A
// (h_A = h0_A / sigma^2), under rank-one add/drop updates. G0_AA and h0_A are
// stored unscaled; only the active block is ever rescaled when sigma^2
// changes. Members keep insertion order; dropping an index preserves the
// relative order of the survivors.
class ActiveSetWorkspace {
 public:
  ActiveSetWorkspace() = default;

  // Fresh Cholesky build; throws std::runtime_error naming the active set
  // when M is not positive definite.
  static ActiveSetWorkspace build(std::vector<int> active, Eigen::MatrixXd G0_AA,
                                  Eigen::VectorXd h0_A, double sigma2, double kappa2,
                                  std::vector<double> tau2_A);

  // Rebuild M^{-1}, log|M| and q(A) from the stored members at the given
  // scales, discarding drift from accumulated rank-one updates.
  void refresh(double sigma2, double kappa2, const std::vector<double>& tau2_A);

  AddProposal propose_add(int j, const Eigen::VectorXd& g0_col, double t_j, double h0_j,
                          double tau2_j) const;
  void apply_add(const AddProposal& proposal);

  DropProposal propose_drop(int j) const;
  void apply_drop(int j);

  // Collapsed log-likelihood in the M-based form
  //   -1/2 (n log sigma^2 + sum_A log(tau2_j/kappa^2) + log|M|
  //         + c_y/sigma^2 - q(A)),
  // additive constant omitted.
  double collapsed_loglik(Eigen::Index n, double c_y) const;

  const std::vector<int>& active() const { return active_; }
  int size() const { return static_cast<int>(active_.size()); }
  int position_of(int j) const;
  double logdetM() const { return logdetM_; }
  double qA() const { return qA_; }
  double sigma2() const { return sigma2_; }
  double kappa2() const { return kappa2_; }
  const std::vector<double>& tau2_A() const { return tau2_A_; }
  const Eigen::MatrixXd& M_inv() const { return M_inv_; }
  const Eigen::MatrixXd& G0_AA() const { return G0_AA_; }
  const Eigen::VectorXd& h0_A() const { return h0_A_; }

 private:
  std::vector<int> active_;
  Eigen::MatrixXd G0_AA_;
  Eigen::VectorXd h0_A_;
  Eigen::VectorXd hA_;  // h0_A / sigma^2, kept in sync
  Eigen::MatrixXd M_inv_;
  double logdetM_ = 0.0;
  double qA_ = 0.0;
  double sigma2_ = 1.0;
  double kappa2_ = 1.0;
  std::vector<double> tau2_A_;

  void factorize();
};

// Direct n x n oracle evaluation of the collapsed log-likelihood,
//   -1/2 (log|S| + y' S^{-1} y),  S = sigma^2 I + X_A D_A X_A',
// with the same constant convention as ActiveSetWorkspace::collapsed_loglik.
// Intended for small n (test oracle); throws on factorization failure.
double direct_loglik(const Dataset& data, const std::vector<int>& active, double sigma2,
                     double kappa2, const std::vector<double>& tau2_A);

}  // namespace ssgibbs

#endif  // SSGIBBS_ACTIVE_SET_HPP
