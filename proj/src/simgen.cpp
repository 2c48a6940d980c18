#include "ssgibbs/simgen.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace ssgibbs {

namespace {

void check_spec(const SimSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("simgen: n must be >= 2");
  if (spec.p < 1) throw std::invalid_argument("simgen: p must be >= 1");
  if (!(spec.rho_block >= 0.0 && spec.rho_block < 1.0))
    throw std::invalid_argument("simgen: rho_block must lie in [0,1)");
  if (spec.k_true < 1 || spec.k_true > spec.block_size ||
      static_cast<Eigen::Index>(spec.block_size) > spec.p)
    throw std::invalid_argument("simgen: need k_true <= block_size <= p");
  if (spec.sigma2_true < 0.0)
    throw std::invalid_argument("simgen: sigma2_true must be nonnegative");
}

// Lower Cholesky factor of the equicorrelated block, with adaptive jitter.
Eigen::MatrixXd block_factor(int size, double rho, double& jitter) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(size, size, rho);
  sigma.diagonal().setOnes();
  for (;;) {
    Eigen::MatrixXd attempt = sigma;
    attempt.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    if (jitter == 0.0) {
      jitter = 1e-8;
    } else if (jitter < 1e-3) {
      jitter = std::min(jitter * 10.0, 1e-3);
    } else {
      throw std::runtime_error("simgen: jitter cap 1e-3 exceeded");
    }
  }
}

}  // namespace

std::pair<Eigen::MatrixXd, double> gen_design(const SimSpec& spec, RandomStream& rng) {
  check_spec(spec);
  const Eigen::Index n = spec.n;
  const Eigen::Index p = spec.p;
  const int b = spec.block_size;

  double jitter = 0.0;
  const Eigen::MatrixXd L_full = block_factor(b, spec.rho_block, jitter);
  Eigen::MatrixXd X(n, p);
  Eigen::MatrixXd Z(n, b);

  for (Eigen::Index start = 0; start < p; start += b) {
    const int width = static_cast<int>(std::min<Eigen::Index>(b, p - start));
    for (int c = 0; c < width; ++c)
      for (Eigen::Index r = 0; r < n; ++r) Z(r, c) = rng.normal();
    if (width == b) {
      X.middleCols(start, width).noalias() = Z * L_full.transpose();
    } else {
      double trailing_jitter = jitter;  // smaller equicorrelated block is PD too
      const Eigen::MatrixXd L_part = block_factor(width, spec.rho_block, trailing_jitter);
      X.middleCols(start, width).noalias() = Z.leftCols(width) * L_part.transpose();
    }
  }
  return {std::move(X), jitter};
}

Eigen::VectorXd true_beta(const SimSpec& spec) {
  check_spec(spec);
  if (spec.k_true % 2 != 0)
    throw std::invalid_argument("true_beta: k_true must be even for the balanced pattern");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(spec.p);
  for (int j = 0; j < spec.k_true / 2; ++j) beta(j) = 1.0;
  for (int j = spec.k_true / 2; j < spec.k_true; ++j) beta(j) = -1.0;
  return beta;
}

Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                             double sigma2, RandomStream& rng) {
  if (X.cols() != beta.size())
    throw std::invalid_argument("gen_response: X and beta dimension mismatch");
  Eigen::VectorXd y = X * beta;
  if (sigma2 > 0.0) {
    const double sd = std::sqrt(sigma2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += rng.normal(0.0, sd);
  }
  return y;
}

std::pair<double, double> snr_pve(const SimSpec& spec) {
  check_spec(spec);
  const double var_signal = spec.k_true * (1.0 - spec.rho_block);
  const double snr = var_signal / spec.sigma2_true;
  const double pve = var_signal / (var_signal + spec.sigma2_true);
  return {snr, pve};
}

SimInstance generate(const SimSpec& spec) {
  RandomStream rng(spec.seed);
  SimInstance inst;
  auto [X, jitter] = gen_design(spec, rng);
  inst.beta_true = true_beta(spec);
  Eigen::VectorXd signal = X * inst.beta_true;
  inst.data.X = std::move(X);
  inst.data.y = signal;
  if (spec.sigma2_true > 0.0) {
    const double sd = std::sqrt(spec.sigma2_true);
    for (Eigen::Index i = 0; i < inst.data.y.size(); ++i)
      inst.data.y(i) += rng.normal(0.0, sd);
  }
  inst.jitter_used = jitter;
  for (int j = 0; j < spec.k_true; ++j) inst.truth.push_back(j);
  std::tie(inst.snr, inst.pve) = snr_pve(spec);

  const Eigen::VectorXd noise = inst.data.y - signal;
  const auto var = [](const Eigen::VectorXd& v) {
    const double m = v.mean();
    return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
  };
  const double vs = var(signal);
  const double vn = var(noise);
  inst.pve_empirical = vs / (vs + vn);
  return inst;
}

}  // namespace ssgibbs
