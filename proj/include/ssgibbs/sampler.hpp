#ifndef SSGIBBS_SAMPLER_HPP
#define SSGIBBS_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ssgibbs/active_set.hpp"
#include "ssgibbs/gram.hpp"
#include "ssgibbs/rng.hpp"
#include "ssgibbs/selection.hpp"
#include "ssgibbs/types.hpp"

namespace ssgibbs {

// Defensive-mixture scan weights, built once before iteration 0 and never
// touched again: w_j = (1-eps) rho_j / sum(rho) + eps/p, or uniform when
// sum(rho) = 0. State-independent by construction.
struct ScanWeights {
  Eigen::VectorXd w;
  double epsilon = 0.0;
  double rho_sum = 0.0;
};

ScanWeights compute_weights(const Eigen::VectorXd& rho, double epsilon);

// Sequential weighted sampling without replacement (draw, zero out, repeat),
// backed by a Fenwick tree so each draw costs O(log p). Weights are restored
// after every batch.
class WeightedSampler {
 public:
  explicit WeightedSampler(const Eigen::VectorXd& w);
  void sample_without_replacement(int m, RandomStream& rng, std::vector<int>& out);

 private:
  int n_ = 0;
  int tree_size_ = 1;
  std::vector<double> tree_;
  std::vector<double> weights_;
  double total_ = 0.0;

  void add(int i, double delta);
  int find(double r) const;
};

// Convenience wrapper over WeightedSampler for one-off draws.
std::vector<int> sample_coordinates(const ScanWeights& weights, int m, RandomStream& rng);

struct ChainCounters {
  std::uint64_t gibbs_updates = 0;
  std::uint64_t gibbs_flips = 0;
  std::uint64_t mh_proposals = 0;
  std::uint64_t mh_accepts = 0;
  std::uint64_t skipped_stability = 0;
  std::uint64_t abpi_proposals = 0;
  std::uint64_t abpi_accepts = 0;
  std::uint64_t sse_clamped = 0;
};

// Exact Gibbs update of z_j from its full conditional. Computes the log-odds
// from an add proposal (inactive j) or drop proposal (active j) plus the
// Bernoulli prior odds, draws z_j, and applies the rank-one update when the
// draw flips the coordinate. Coordinates hitting the Schur safeguard are
// skipped and counted, leaving the state unchanged. Pass a full Gram backend
// to read G0_{A,j} from storage instead of computing it on the fly.
void gibbs_update_coordinate(ActiveSetWorkspace& ws, ModelState& state, int j,
                             const MarginalStats& marginals, const Dataset& data,
                             const GramBackend* gram, RandomStream& rng,
                             ChainCounters& counters);

// Metropolis-Hastings flip of z_j (full-sweep baseline): log r is the change
// in collapsed log-likelihood plus the prior odds; the proposal ratio cancels.
void mh_flip_coordinate(ActiveSetWorkspace& ws, ModelState& state, int j,
                        const MarginalStats& marginals, const Dataset& data,
                        const GramBackend* gram, RandomStream& rng,
                        ChainCounters& counters);

// Conditional-parameter updates. Each consumes the current state and draws
// from the full conditional stated in the docs of the corresponding sampler.
void update_beta_active(ActiveSetWorkspace& ws, ModelState& state, RandomStream& rng);
void update_tau2(ModelState& state, const Hyperparameters& hyper, RandomStream& rng);
void update_kappa2(ModelState& state, const Hyperparameters& hyper, RandomStream& rng);
void update_sigma2(ModelState& state, const ActiveSetWorkspace& ws, double c_y,
                   Eigen::Index n, const Hyperparameters& hyper, RandomStream& rng,
                   ChainCounters& counters);
void update_pi(ModelState& state, Eigen::Index p, RandomStream& rng);
void update_ab_pi(ModelState& state, const Hyperparameters& hyper, RandomStream& rng,
                  ChainCounters& counters);

// Residual sum of squares from cached Gram pieces:
// c_y - 2 beta' h0_A + beta' G0_AA beta, clamped at zero.
double sse_from_gram(const ActiveSetWorkspace& ws, const std::vector<double>& beta,
                     double c_y, ChainCounters& counters);

struct TraceRow {
  int iteration = 0;
  int active_size = 0;
  double sigma2 = 0.0;
  double pi = 0.0;
};

struct ChainOutput {
  PipSummary pips;
  ChainCounters counters;
  std::vector<TraceRow> trace;
  int n_kept = 0;
  double sigma2_mean = 0.0;
  ScanWeights weights;  // random-scan only; empty vector in full-sweep mode
  std::optional<SelectionMetrics> metrics_khat;
  std::optional<SelectionMetrics> metrics_median;
};

// Runs one chain. Per iteration: rebuild the workspace at the current scales,
// scan z (random scan draws m coordinates from the fixed weights; full sweep
// walks all p in index order), then update beta_A, tau^2, sigma^2, kappa^2,
// pi and (a_pi, b_pi). Post burn-in, thinned iterations feed the PIP counts
// and running beta moments. Deterministic given (seed, stream).
ChainOutput run_chain(const ChainConfig& config, const Dataset& data,
                      const std::optional<std::vector<int>>& truth = std::nullopt,
                      std::uint64_t stream = 0, const GramBackend* gram = nullptr);

}  // namespace ssgibbs

#endif  // SSGIBBS_SAMPLER_HPP
