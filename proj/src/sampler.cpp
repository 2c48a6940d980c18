#include "ssgibbs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssgibbs {

ScanWeights compute_weights(const Eigen::VectorXd& rho, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("compute_weights: epsilon must lie in (0,1)");
  const Eigen::Index p = rho.size();
  ScanWeights sw;
  sw.epsilon = epsilon;
  sw.w.resize(p);

  long double acc = 0.0L;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (rho(j) < 0.0) throw std::invalid_argument("compute_weights: negative rho");
    acc += rho(j);
  }
  sw.rho_sum = static_cast<double>(acc);

  const double floor = epsilon / static_cast<double>(p);
  if (sw.rho_sum == 0.0) {
    sw.w.setConstant(1.0 / static_cast<double>(p));
  } else {
    const double scale = (1.0 - epsilon) / sw.rho_sum;
    for (Eigen::Index j = 0; j < p; ++j) sw.w(j) = scale * rho(j) + floor;
  }
  return sw;
}

WeightedSampler::WeightedSampler(const Eigen::VectorXd& w) {
  n_ = static_cast<int>(w.size());
  while (tree_size_ < n_) tree_size_ <<= 1;
  tree_.assign(2 * tree_size_, 0.0);
  weights_.assign(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    weights_[i] = w(i);
    tree_[tree_size_ + i] = w(i);
  }
  for (int i = tree_size_ - 1; i >= 1; --i) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
  total_ = tree_[1];
}

void WeightedSampler::add(int i, double delta) {
  int node = tree_size_ + i;
  tree_[node] += delta;
  for (node >>= 1; node >= 1; node >>= 1) tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
  total_ = tree_[1];
}

int WeightedSampler::find(double r) const {
  int node = 1;
  while (node < tree_size_) {
    const double left = tree_[2 * node];
    if (r < left) {
      node = 2 * node;
    } else {
      r -= left;
      node = 2 * node + 1;
    }
  }
  int idx = node - tree_size_;
  if (idx >= n_) idx = n_ - 1;  // rounding guard at the right edge
  return idx;
}

void WeightedSampler::sample_without_replacement(int m, RandomStream& rng,
                                                 std::vector<int>& out) {
  if (m < 1 || m > n_)
    throw std::invalid_argument("sample_without_replacement: m out of range");
  out.clear();
  out.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double r = rng.uniform() * total_;
    int idx = find(r);
    if (weights_[idx] == 0.0) {
      // fell on a removed leaf through rounding; take the next live index
      int probe = idx;
      do {
        probe = (probe + 1) % n_;
      } while (weights_[probe] == 0.0);
      idx = probe;
    }
    out.push_back(idx);
    add(idx, -weights_[idx]);
  }
  for (int idx : out) add(idx, weights_[idx]);
}

std::vector<int> sample_coordinates(const ScanWeights& weights, int m, RandomStream& rng) {
  WeightedSampler sampler(weights.w);
  std::vector<int> out;
  sampler.sample_without_replacement(m, rng, out);
  return out;
}

namespace {

double log_prior_odds(double pi) { return std::log(pi) - std::log1p(-pi); }

Eigen::VectorXd gram_column_active(const ActiveSetWorkspace& ws, int j,
                                   const Dataset& data, const GramBackend* gram) {
  if (gram != nullptr && gram->mode == GramMode::full) {
    const int k = ws.size();
    Eigen::VectorXd col(k);
    for (int i = 0; i < k; ++i) col(i) = gram->G0(ws.active()[i], j);
    return col;
  }
  return cross_product_active(data, ws.active(), j);
}

// Shared state bookkeeping for an accepted flip.
void record_add(ModelState& state, int j) {
  state.z[j] = 1;
  state.active.push_back(j);
  state.beta_active.push_back(0.0);  // redrawn in update_beta_active
}

void record_drop(ModelState& state, int position, int j) {
  state.z[j] = 0;
  state.active.erase(state.active.begin() + position);
  state.beta_active.erase(state.beta_active.begin() + position);
}

}  // namespace

void gibbs_update_coordinate(ActiveSetWorkspace& ws, ModelState& state, int j,
                             const MarginalStats& marginals, const Dataset& data,
                             const GramBackend* gram, RandomStream& rng,
                             ChainCounters& counters) {
  const double odds = log_prior_odds(state.pi);
  if (state.z[j] == 0) {
    const Eigen::VectorXd g0_col = gram_column_active(ws, j, data, gram);
    const AddProposal prop =
        ws.propose_add(j, g0_col, marginals.t(j), marginals.s(j), state.tau2[j]);
    if (!prop.ok) {
      ++counters.skipped_stability;
      return;
    }
    ++counters.gibbs_updates;
    const double ell = prop.delta_loglik + odds;
    const bool include = rng.bernoulli(1.0 / (1.0 + std::exp(-ell)));
    if (include) {
      ws.apply_add(prop);
      record_add(state, j);
      ++counters.gibbs_flips;
    }
  } else {
    const DropProposal prop = ws.propose_drop(j);
    if (prop.needs_refresh) {
      ++counters.skipped_stability;
      return;
    }
    ++counters.gibbs_updates;
    // Log-odds of keeping j versus removing it.
    const double ell = -prop.delta_loglik + odds;
    const bool keep = rng.bernoulli(1.0 / (1.0 + std::exp(-ell)));
    if (!keep) {
      const int pos = ws.position_of(j);
      ws.apply_drop(j);
      record_drop(state, pos, j);
      ++counters.gibbs_flips;
    }
  }
}

void mh_flip_coordinate(ActiveSetWorkspace& ws, ModelState& state, int j,
                        const MarginalStats& marginals, const Dataset& data,
                        const GramBackend* gram, RandomStream& rng,
                        ChainCounters& counters) {
  const double odds = log_prior_odds(state.pi);
  if (state.z[j] == 0) {
    const Eigen::VectorXd g0_col = gram_column_active(ws, j, data, gram);
    const AddProposal prop =
        ws.propose_add(j, g0_col, marginals.t(j), marginals.s(j), state.tau2[j]);
    if (!prop.ok) {
      ++counters.skipped_stability;
      return;
    }
    ++counters.mh_proposals;
    const double log_r = prop.delta_loglik + odds;
    if (std::log(rng.uniform_pos()) < log_r) {
      ws.apply_add(prop);
      record_add(state, j);
      ++counters.mh_accepts;
    }
  } else {
    const DropProposal prop = ws.propose_drop(j);
    if (prop.needs_refresh) {
      ++counters.skipped_stability;
      return;
    }
    ++counters.mh_proposals;
    const double log_r = prop.delta_loglik - odds;
    if (std::log(rng.uniform_pos()) < log_r) {
      const int pos = ws.position_of(j);
      ws.apply_drop(j);
      record_drop(state, pos, j);
      ++counters.mh_accepts;
    }
  }
}

void update_beta_active(ActiveSetWorkspace& ws, ModelState& state, RandomStream& rng) {
  const int k = ws.size();
  if (k == 0) {
    state.beta_active.clear();
    return;
  }
  const auto draw = [&]() {
    Eigen::MatrixXd prec = ws.G0_AA() / state.sigma2;
    for (int i = 0; i < k; ++i) prec(i, i) += state.kappa2 / ws.tau2_A()[i];
    const Eigen::VectorXd linear = ws.h0_A() / state.sigma2;
    return rng.mvn_from_precision(prec, linear);
  };
  Eigen::VectorXd beta;
  try {
    beta = draw();
  } catch (const std::runtime_error&) {
    ws.refresh(state.sigma2, state.kappa2, ws.tau2_A());
    beta = draw();  // second failure propagates
  }
  state.beta_active.assign(beta.data(), beta.data() + k);
}

void update_tau2(ModelState& state, const Hyperparameters& hyper, RandomStream& rng) {
  const double lam2 = hyper.lambda1 * hyper.lambda1;
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    const double beta2 = std::max(state.beta_active[i] * state.beta_active[i], 1e-12);
    state.tau2[state.active[i]] = rng.gig_half(lam2, state.kappa2 * beta2);
  }
  const Eigen::Index p = static_cast<Eigen::Index>(state.z.size());
  for (Eigen::Index j = 0; j < p; ++j)
    if (!state.z[j]) state.tau2[j] = rng.exponential(lam2 / 2.0);
}

void update_kappa2(ModelState& state, const Hyperparameters& hyper, RandomStream& rng) {
  double rate = hyper.b_kappa;
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    const double b = state.beta_active[i];
    rate += 0.5 * b * b / state.tau2[state.active[i]];
  }
  const double shape = hyper.a_kappa + 0.5 * static_cast<double>(state.active.size());
  state.kappa2 = rng.gamma(shape, rate);
}

double sse_from_gram(const ActiveSetWorkspace& ws, const std::vector<double>& beta,
                     double c_y, ChainCounters& counters) {
  const int k = ws.size();
  Eigen::Map<const Eigen::VectorXd> b(beta.data(), k);
  double sse = c_y;
  if (k > 0) sse += -2.0 * b.dot(ws.h0_A()) + b.dot(ws.G0_AA() * b);
  if (sse < 0.0) {
    sse = 0.0;
    ++counters.sse_clamped;
  }
  return sse;
}

void update_sigma2(ModelState& state, const ActiveSetWorkspace& ws, double c_y,
                   Eigen::Index n, const Hyperparameters& hyper, RandomStream& rng,
                   ChainCounters& counters) {
  const double sse = sse_from_gram(ws, state.beta_active, c_y, counters);
  state.sigma2 =
      rng.inv_gamma(hyper.a_sigma + 0.5 * static_cast<double>(n), hyper.b_sigma + 0.5 * sse);
}

void update_pi(ModelState& state, Eigen::Index p, RandomStream& rng) {
  const double k = static_cast<double>(state.active.size());
  state.pi = rng.beta(state.a_pi + k, state.b_pi + (static_cast<double>(p) - k));
}

namespace {

// log Beta(pi | a, b) plus Gamma prior kernels for a and b.
double ab_log_target(double a, double b, double pi, const Hyperparameters& h) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(pi) +
         (b - 1.0) * std::log1p(-pi) + (h.alpha_a - 1.0) * std::log(a) - h.beta_a * a +
         (h.alpha_b - 1.0) * std::log(b) - h.beta_b * b;
}

}  // namespace

void update_ab_pi(ModelState& state, const Hyperparameters& hyper, RandomStream& rng,
                  ChainCounters& counters) {
  const double log_a = std::log(state.a_pi);
  const double log_b = std::log(state.b_pi);
  const double log_a_star = log_a + rng.normal(0.0, hyper.sigma_prop);
  const double log_b_star = log_b + rng.normal(0.0, hyper.sigma_prop);
  const double a_star = std::exp(log_a_star);
  const double b_star = std::exp(log_b_star);

  ++counters.abpi_proposals;
  // Log-normal proposal correction: the density of the proposed point carries
  // a -log(a*) term and the reverse move a -log(a), leaving +log(a*) - log(a)
  // in the ratio (same for b).
  const double log_r = ab_log_target(a_star, b_star, state.pi, hyper) -
                       ab_log_target(state.a_pi, state.b_pi, state.pi, hyper) +
                       (log_a_star + log_b_star) - (log_a + log_b);
  if (std::log(rng.uniform_pos()) < log_r) {
    state.a_pi = a_star;
    state.b_pi = b_star;
    ++counters.abpi_accepts;
  }
}

namespace {

std::vector<double> gather_tau2_active(const ModelState& state) {
  std::vector<double> out(state.active.size());
  for (std::size_t i = 0; i < state.active.size(); ++i)
    out[i] = state.tau2[state.active[i]];
  return out;
}

ActiveSetWorkspace build_workspace_for(const ModelState& state, const Dataset& data,
                                       const MarginalStats& marginals,
                                       const GramBackend* gram) {
  const int k = static_cast<int>(state.active.size());
  Eigen::MatrixXd G0_AA(k, k);
  Eigen::VectorXd h0_A(k);
  for (int i = 0; i < k; ++i) {
    const int a = state.active[i];
    h0_A(i) = marginals.s(a);
    if (gram != nullptr && gram->mode == GramMode::full) {
      for (int l = 0; l <= i; ++l) {
        G0_AA(i, l) = gram->G0(state.active[l], a);
        G0_AA(l, i) = G0_AA(i, l);
      }
    } else {
      const auto xa = data.X.col(a);
      for (int l = 0; l <= i; ++l) {
        G0_AA(i, l) = data.X.col(state.active[l]).dot(xa);
        G0_AA(l, i) = G0_AA(i, l);
      }
    }
  }
  return ActiveSetWorkspace::build(state.active, std::move(G0_AA), std::move(h0_A),
                                   state.sigma2, state.kappa2, gather_tau2_active(state));
}

}  // namespace

ChainOutput run_chain(const ChainConfig& config, const Dataset& data,
                      const std::optional<std::vector<int>>& truth, std::uint64_t stream,
                      const GramBackend* gram) {
  validate(config, data);
  Dataset local;
  const Dataset* d = &data;
  if (config.standardize) {
    local = data;
    standardize_inplace(local);
    d = &local;
  }
  const Eigen::Index n = d->n();
  const Eigen::Index p = d->p();

  const MarginalStats marginals = precompute_marginals(*d);
  RandomStream rng(config.seed, stream);
  ModelState state = initialize_state(config, p, rng);

  ChainOutput out;
  if (config.scan_mode == ScanMode::random_scan)
    out.weights = compute_weights(marginals.rho, config.epsilon);
  WeightedSampler sampler(config.scan_mode == ScanMode::random_scan
                              ? out.weights.w
                              : Eigen::VectorXd::Ones(1));

  ActiveSetWorkspace ws = build_workspace_for(state, *d, marginals, gram);

  std::vector<std::uint64_t> visits(p, 0);
  std::vector<std::uint64_t> inclusion_counts(p, 0);
  std::vector<double> beta_sum(p, 0.0), beta_sum2(p, 0.0);
  long double sigma2_acc = 0.0L;
  std::vector<int> scan_buf;

  for (int it = 1; it <= config.n_iter; ++it) {
    ws.refresh(state.sigma2, state.kappa2, gather_tau2_active(state));

    if (config.scan_mode == ScanMode::random_scan) {
      sampler.sample_without_replacement(config.m, rng, scan_buf);
      for (int j : scan_buf) {
        ++visits[j];
        gibbs_update_coordinate(ws, state, j, marginals, *d, gram, rng, out.counters);
      }
    } else {
      for (int j = 0; j < p; ++j) {
        ++visits[j];
        mh_flip_coordinate(ws, state, j, marginals, *d, gram, rng, out.counters);
      }
    }

    update_beta_active(ws, state, rng);
    update_tau2(state, config.hyper, rng);
    update_sigma2(state, ws, marginals.c_y, n, config.hyper, rng, out.counters);
    update_kappa2(state, config.hyper, rng);
    update_pi(state, p, rng);
    update_ab_pi(state, config.hyper, rng, out.counters);

    const bool kept = it > config.burn_in && (it - config.burn_in - 1) % config.thin == 0;
    if (kept) {
      ++out.n_kept;
      for (std::size_t i = 0; i < state.active.size(); ++i) {
        const int j = state.active[i];
        const double b = state.beta_active[i];
        ++inclusion_counts[j];
        beta_sum[j] += b;
        beta_sum2[j] += b * b;
      }
      sigma2_acc += state.sigma2;
      out.trace.push_back({it, static_cast<int>(state.active.size()), state.sigma2,
                           state.pi});
    }
  }

  PipSummary& pips = out.pips;
  pips.pip.resize(p);
  pips.beta_mean.resize(p);
  pips.beta_sd.resize(p);
  pips.visits = std::move(visits);
  const double nk = static_cast<double>(out.n_kept);
  for (Eigen::Index j = 0; j < p; ++j) {
    pips.pip(j) = static_cast<double>(inclusion_counts[j]) / nk;
    pips.beta_mean(j) = beta_sum[j] / nk;
    const double var = beta_sum2[j] / nk - pips.beta_mean(j) * pips.beta_mean(j);
    pips.beta_sd(j) = std::sqrt(std::max(0.0, var));
  }
  const KhatResult kr = khat_rule(pips.pip);
  pips.k_hat = kr.k_hat;
  pips.k_star = kr.k_star;
  pips.t_hat = kr.t_hat;
  pips.selected = kr.selected;
  out.sigma2_mean = static_cast<double>(sigma2_acc / out.n_kept);

  if (truth) {
    out.metrics_khat = selection_metrics(pips.selected, *truth);
    out.metrics_median = selection_metrics(median_model(pips.pip), *truth);
  }
  return out;
}

}  // namespace ssgibbs
