#ifndef SSGIBBS_SELECTION_HPP
#define SSGIBBS_SELECTION_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ssgibbs {

// Posterior summary of one chain. pip_j is the kept-sample mean of z_j;
// beta_mean/beta_sd are moments of beta_j over kept samples with zeros
// counted while j is inactive. Indices in `selected` are 0-based ascending.
struct PipSummary {
  Eigen::VectorXd pip;
  std::vector<std::uint64_t> visits;
  Eigen::VectorXd beta_mean;
  Eigen::VectorXd beta_sd;
  double k_hat = 0.0;
  int k_star = 1;
  double t_hat = 0.0;
  std::vector<int> selected;
};

struct KhatResult {
  double k_hat = 0.0;
  int k_star = 1;
  double t_hat = 0.0;
  std::vector<int> selected;
};

// Posterior-mean-size rule: k_hat = sum_j pip_j, k_star = max{1, min[p,
// round(k_hat)]}, t_hat = k_star-th largest PIP, selected = {j : pip_j >=
// t_hat} with ties at t_hat all included. When t_hat == 0 the threshold is
// vacuous, so only enough zero-PIP indices (lowest first) are added to
// reach k_star.
KhatResult khat_rule(const Eigen::VectorXd& pip);

// Median probability model: {j : pip_j >= 0.5}.
std::vector<int> median_model(const Eigen::VectorXd& pip);

struct SelectionMetrics {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double sensitivity = 0.0;
  double precision = 0.0;
};

// Empty-selection conventions: precision = 1 when both sets are empty,
// 0 when only the selection is; sensitivity = 1 for an empty truth set.
SelectionMetrics selection_metrics(const std::vector<int>& selected,
                                   const std::vector<int>& truth);

// Population signal marginal correlation |1-rho| / sqrt(11 - 10 rho) for the
// balanced +-1, k=10, block-20 benchmark design.
double theoretical_signal_rho(double rho_block);

// Expected absolute null sample correlation sqrt(2/(pi n)).
double null_rho_bar(Eigen::Index n);

// Mean of the top-k0 rho values over the mean of the remaining p-k0.
double empirical_R(const Eigen::VectorXd& rho, int k0);

struct TuningReport {
  double rho_signal = std::numeric_limits<double>::quiet_NaN();
  double rho_null_bar = std::numeric_limits<double>::quiet_NaN();
  double R = 0.0;
  double c = 0.0;              // (1 - epsilon) R + epsilon
  double expected_visits = 0.0;  // n_iter * m * c / p
  bool feasible = false;         // expected_visits >= 1000
};

TuningReport visit_budget(double p, double epsilon, double R, double n_iter, double m);

struct MRecommendation {
  int m = 1;
  bool feasible = false;
  double required_n_iter = 0.0;  // when even m = p falls short
};

// Smallest m with n_iter * m * c / p >= v_target, capped at p.
MRecommendation recommend_m(double p, double epsilon, double R, double n_iter,
                            double v_target = 1000.0);

}  // namespace ssgibbs

#endif  // SSGIBBS_SELECTION_HPP
