#include "ssgibbs/active_set.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace ssgibbs {

namespace {

// Copy of `m` with row/column k removed.
Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, int k) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd out(n - 1, n - 1);
  for (Eigen::Index r = 0, ro = 0; r < n; ++r) {
    if (r == k) continue;
    for (Eigen::Index c = 0, co = 0; c < n; ++c) {
      if (c == k) continue;
      out(ro, co) = m(r, c);
      ++co;
    }
    ++ro;
  }
  return out;
}

Eigen::VectorXd drop_entry(const Eigen::VectorXd& v, int k) {
  const Eigen::Index n = v.size();
  Eigen::VectorXd out(n - 1);
  for (Eigen::Index i = 0, o = 0; i < n; ++i) {
    if (i == k) continue;
    out(o++) = v(i);
  }
  return out;
}

}  // namespace

void ActiveSetWorkspace::factorize() {
  const int k = size();
  hA_ = h0_A_ / sigma2_;
  if (k == 0) {
    M_inv_.resize(0, 0);
    logdetM_ = 0.0;
    qA_ = 0.0;
    return;
  }
  Eigen::MatrixXd M = G0_AA_ / sigma2_;
  for (int i = 0; i < k; ++i) M(i, i) += kappa2_ / tau2_A_[i];
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    std::ostringstream oss;
    oss << "active-set precision matrix not positive definite; active = {";
    for (int i = 0; i < k; ++i) oss << (i ? "," : "") << active_[i];
    oss << "}";
    throw std::runtime_error(oss.str());
  }
  const Eigen::MatrixXd L = llt.matrixL();
  logdetM_ = 2.0 * L.diagonal().array().log().sum();
  M_inv_ = llt.solve(Eigen::MatrixXd::Identity(k, k));
  qA_ = hA_.dot(M_inv_ * hA_);
}

ActiveSetWorkspace ActiveSetWorkspace::build(std::vector<int> active, Eigen::MatrixXd G0_AA,
                                             Eigen::VectorXd h0_A, double sigma2,
                                             double kappa2, std::vector<double> tau2_A) {
  ActiveSetWorkspace ws;
  ws.active_ = std::move(active);
  ws.G0_AA_ = std::move(G0_AA);
  ws.h0_A_ = std::move(h0_A);
  ws.sigma2_ = sigma2;
  ws.kappa2_ = kappa2;
  ws.tau2_A_ = std::move(tau2_A);
  ws.factorize();
  return ws;
}

void ActiveSetWorkspace::refresh(double sigma2, double kappa2,
                                 const std::vector<double>& tau2_A) {
  sigma2_ = sigma2;
  kappa2_ = kappa2;
  tau2_A_ = tau2_A;
  factorize();
}

int ActiveSetWorkspace::position_of(int j) const {
  for (int i = 0; i < size(); ++i)
    if (active_[i] == j) return i;
  return -1;
}

AddProposal ActiveSetWorkspace::propose_add(int j, const Eigen::VectorXd& g0_col, double t_j,
                                            double h0_j, double tau2_j) const {
  AddProposal prop;
  prop.j = j;
  prop.t_j = t_j;
  prop.h0_j = h0_j;
  prop.tau2_j = tau2_j;
  prop.g0_col = g0_col;

  const double d_inv = kappa2_ / tau2_j;
  const double G_jj = t_j / sigma2_;
  const double h_j = h0_j / sigma2_;
  double s, u;
  if (size() == 0) {
    s = d_inv + G_jj;
    u = h_j;
  } else {
    const Eigen::VectorXd g = g0_col / sigma2_;
    prop.Minv_g = M_inv_ * g;
    s = d_inv + G_jj - g.dot(prop.Minv_g);
    u = h_j - prop.Minv_g.dot(hA_);
  }
  prop.s = s;
  prop.u = u;
  if (s > kSchurFloor) {
    prop.ok = true;
    prop.delta_loglik = -0.5 * (std::log(tau2_j / kappa2_) + std::log(s) - u * u / s);
  }
  return prop;
}

void ActiveSetWorkspace::apply_add(const AddProposal& proposal) {
  if (!proposal.ok)
    throw std::invalid_argument("apply_add: proposal was rejected for stability");
  const int k = size();
  const double inv_s = 1.0 / proposal.s;

  Eigen::MatrixXd Minv_new(k + 1, k + 1);
  if (k > 0) {
    const Eigen::VectorXd& t = proposal.Minv_g;
    Minv_new.topLeftCorner(k, k) = M_inv_ + inv_s * (t * t.transpose());
    Minv_new.topRightCorner(k, 1) = -inv_s * t;
    Minv_new.bottomLeftCorner(1, k) = (-inv_s * t).transpose();
  }
  Minv_new(k, k) = inv_s;
  M_inv_ = std::move(Minv_new);

  G0_AA_.conservativeResize(k + 1, k + 1);
  if (k > 0) {
    G0_AA_.topRightCorner(k, 1) = proposal.g0_col;
    G0_AA_.bottomLeftCorner(1, k) = proposal.g0_col.transpose();
  }
  G0_AA_(k, k) = proposal.t_j;

  h0_A_.conservativeResize(k + 1);
  h0_A_(k) = proposal.h0_j;
  hA_.conservativeResize(k + 1);
  hA_(k) = proposal.h0_j / sigma2_;

  tau2_A_.push_back(proposal.tau2_j);
  active_.push_back(proposal.j);

  logdetM_ += std::log(proposal.s);
  qA_ += proposal.u * proposal.u * inv_s;
}

DropProposal ActiveSetWorkspace::propose_drop(int j) const {
  const int k = position_of(j);
  if (k < 0) throw std::invalid_argument("propose_drop: index not in active set");
  DropProposal prop;
  prop.j = j;

  const double g = M_inv_(k, k);
  if (!(g > 0.0)) {
    prop.needs_refresh = true;
    return prop;
  }
  const double s = 1.0 / g;
  const double h_m = hA_(k);
  double fh = 0.0;
  for (int i = 0; i < size(); ++i)
    if (i != k) fh += M_inv_(i, k) * hA_(i);

  prop.s = s;
  prop.delta_q = 2.0 * h_m * fh + g * h_m * h_m + fh * fh / g;
  prop.delta_loglik =
      -0.5 * (-std::log(tau2_A_[k] / kappa2_) - std::log(s) + prop.delta_q);
  return prop;
}

void ActiveSetWorkspace::apply_drop(int j) {
  const int k = position_of(j);
  if (k < 0) throw std::invalid_argument("apply_drop: index not in active set");
  const int n = size();

  const double g = M_inv_(k, k);
  if (!(g > 0.0))
    throw std::runtime_error("apply_drop: non-positive pivot; refresh the workspace");
  const DropProposal prop = propose_drop(j);

  Eigen::VectorXd f(n - 1);
  for (int i = 0, o = 0; i < n; ++i)
    if (i != k) f(o++) = M_inv_(i, k);

  Eigen::MatrixXd E = drop_row_col(M_inv_, k);
  E.noalias() -= (1.0 / g) * (f * f.transpose());
  M_inv_ = std::move(E);

  G0_AA_ = drop_row_col(G0_AA_, k);
  h0_A_ = drop_entry(h0_A_, k);
  hA_ = drop_entry(hA_, k);
  tau2_A_.erase(tau2_A_.begin() + k);
  active_.erase(active_.begin() + k);

  logdetM_ -= std::log(prop.s);
  qA_ -= prop.delta_q;
  if (size() == 0) {
    // Round-trip to the vacuous workspace is exact by definition.
    logdetM_ = 0.0;
    qA_ = 0.0;
  }
}

double ActiveSetWorkspace::collapsed_loglik(Eigen::Index n, double c_y) const {
  double sum_log_d = 0.0;
  for (double t2 : tau2_A_) sum_log_d += std::log(t2 / kappa2_);
  return -0.5 * (static_cast<double>(n) * std::log(sigma2_) + sum_log_d + logdetM_ +
                 c_y / sigma2_ - qA_);
}

double direct_loglik(const Dataset& data, const std::vector<int>& active, double sigma2,
                     double kappa2, const std::vector<double>& tau2_A) {
  const Eigen::Index n = data.n();
  Eigen::MatrixXd S = sigma2 * Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < active.size(); ++i) {
    const auto xa = data.X.col(active[i]);
    const double d = tau2_A[i] / kappa2;
    S.noalias() += d * (xa * xa.transpose());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("direct_loglik: S factorization failed");
  const Eigen::MatrixXd L = llt.matrixL();
  const double logdetS = 2.0 * L.diagonal().array().log().sum();
  const double quad = data.y.dot(llt.solve(data.y));
  return -0.5 * (logdetS + quad);
}

}  // namespace ssgibbs
