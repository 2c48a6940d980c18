#include "ssgibbs/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssgibbs {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void validate(const ChainConfig& config, const Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  require(n >= 2, "dataset: n must be >= 2");
  require(p >= 1, "dataset: p must be >= 1");
  require(data.y.size() == n, "dataset: X and y dimension mismatch");
  if (data.names) require(static_cast<Eigen::Index>(data.names->size()) == p,
                          "dataset: names length must equal p");
  require(data.X.allFinite(), "dataset: X contains non-finite entries");
  require(data.y.allFinite(), "dataset: y contains non-finite entries");

  const Hyperparameters& h = config.hyper;
  require(h.lambda1 > 0, "hyper: lambda1 must be positive");
  require(h.a_kappa > 0 && h.b_kappa > 0, "hyper: a_kappa/b_kappa must be positive");
  require(h.a_sigma > 0 && h.b_sigma > 0, "hyper: a_sigma/b_sigma must be positive");
  require(h.alpha_a > 0 && h.beta_a > 0, "hyper: alpha_a/beta_a must be positive");
  require(h.alpha_b > 0 && h.beta_b > 0, "hyper: alpha_b/beta_b must be positive");
  require(h.sigma_prop > 0, "hyper: sigma_prop must be positive");

  require(config.epsilon > 0.0 && config.epsilon < 1.0,
          "config: epsilon must lie in (0,1)");
  require(config.m >= 1, "config: m must be >= 1");
  require(config.m <= p, "config: m exceeds p");
  require(config.n_iter >= 1, "config: n_iter must be >= 1");
  require(config.burn_in >= 0 && config.burn_in < config.n_iter,
          "config: burn_in must be < n_iter");
  require(config.thin >= 1, "config: thin must be >= 1");
  require(config.k_target >= 1, "config: k_target must be >= 1");
  require(config.k_target <= p, "config: k_target exceeds p");
}

ModelState initialize_state(const ChainConfig& config, Eigen::Index p, RandomStream& rng) {
  const int k = static_cast<int>(std::min<Eigen::Index>(config.k_target, p));
  ModelState state;
  state.z.assign(p, 0);
  state.tau2.resize(p);

  // Partial Fisher-Yates for k distinct uniform indices.
  std::vector<int> pool(p);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const std::uint64_t r = i + rng.uniform_below(p - i);
    std::swap(pool[i], pool[r]);
  }
  state.active.assign(pool.begin(), pool.begin() + k);
  std::sort(state.active.begin(), state.active.end());
  for (int j : state.active) state.z[j] = 1;

  state.beta_active.resize(k);
  for (int i = 0; i < k; ++i) state.beta_active[i] = rng.normal(0.0, 0.1);

  const double lam2 = config.hyper.lambda1 * config.hyper.lambda1;
  for (Eigen::Index j = 0; j < p; ++j) state.tau2[j] = rng.exponential(3.0 * lam2);

  state.pi = static_cast<double>(config.k_target) / static_cast<double>(p);
  state.a_pi = 1.0;
  state.b_pi = state.a_pi * (static_cast<double>(p) / config.k_target - 1.0);
  if (state.b_pi < 1e-6) state.b_pi = 1e-6;  // k_target == p would give a degenerate Beta
  state.kappa2 = 1.0;
  state.sigma2 = 1.0;
  return state;
}

}  // namespace ssgibbs
