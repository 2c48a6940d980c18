// Large-scale benchmark harness: runs the block-correlated selection
// benchmark at full size (default p = 1e5, n = 500, m = 1000,
// n_iter = 30000) and prints per-replicate metrics plus mean (sd) rows for
// both selection rules. Not part of the test gate; expect tens of minutes
// per replicate at the default size.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "ssgibbs/sampler.hpp"
#include "ssgibbs/simgen.hpp"

using namespace ssgibbs;

namespace {

struct MeanSd {
  double mean = 0.0, sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  double s = 0, s2 = 0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(v.size());
  const double mean = s / n;
  const double var = n > 1 ? (s2 - n * mean * mean) / (n - 1) : 0.0;
  return {mean, std::sqrt(std::max(0.0, var))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"full-scale selection benchmark (long-running, not a test gate)"};
  SimSpec spec;
  spec.n = 500;
  spec.p = 100000;
  spec.rho_block = 0.3;
  ChainConfig cfg;
  cfg.epsilon = 0.1;
  cfg.m = 1000;
  cfg.n_iter = 30000;
  cfg.burn_in = 6000;
  cfg.k_target = 20;
  int replicates = 1;
  std::uint64_t seed0 = 1;

  app.add_option("--n", spec.n)->capture_default_str();
  app.add_option("--p", spec.p)->capture_default_str();
  app.add_option("--rho", spec.rho_block)->capture_default_str();
  app.add_option("--m", cfg.m)->capture_default_str();
  app.add_option("--n-iter", cfg.n_iter)->capture_default_str();
  app.add_option("--burn-in", cfg.burn_in)->capture_default_str();
  app.add_option("--k-target", cfg.k_target)->capture_default_str();
  app.add_option("--replicates", replicates)->capture_default_str();
  app.add_option("--seed", seed0, "base seed; replicate r uses seed + r")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::vector<double> kh_tp, kh_fp, kh_sens, kh_prec;
  std::vector<double> md_tp, md_fp, md_sens, md_prec, khats, minutes;

  for (int rep = 0; rep < replicates; ++rep) {
    spec.seed = seed0 + 1000 + rep;
    cfg.seed = seed0 + rep;
    const auto t0 = std::chrono::steady_clock::now();
    const SimInstance inst = generate(spec);
    const double gen_s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0).count();
    std::printf("rep %d: generated n=%lld p=%lld rho=%.1f (%.1f s, jitter %g, "
                "PVE %.3f)\n",
                rep, static_cast<long long>(spec.n), static_cast<long long>(spec.p),
                spec.rho_block, gen_s, inst.jitter_used, inst.pve_empirical);
    std::fflush(stdout);

    const auto t1 = std::chrono::steady_clock::now();
    const ChainOutput out = run_chain(cfg, inst.data, inst.truth);
    const double mins = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t1).count() / 60.0;

    const SelectionMetrics& kh = *out.metrics_khat;
    const SelectionMetrics& md = *out.metrics_median;
    std::printf("rep %d: khat-rule TP=%d FP=%d sens=%.3f prec=%.3f | median TP=%d "
                "FP=%d sens=%.3f prec=%.3f | k_hat=%.2f | %.1f min | skipped=%llu\n",
                rep, kh.tp, kh.fp, kh.sensitivity, kh.precision, md.tp, md.fp,
                md.sensitivity, md.precision, out.pips.k_hat, mins,
                static_cast<unsigned long long>(out.counters.skipped_stability));
    std::fflush(stdout);

    kh_tp.push_back(kh.tp);
    kh_fp.push_back(kh.fp);
    kh_sens.push_back(kh.sensitivity);
    kh_prec.push_back(kh.precision);
    md_tp.push_back(md.tp);
    md_fp.push_back(md.fp);
    md_sens.push_back(md.sensitivity);
    md_prec.push_back(md.precision);
    khats.push_back(out.pips.k_hat);
    minutes.push_back(mins);
  }

  const auto row = [](const char* name, const std::vector<double>& tp,
                      const std::vector<double>& fp, const std::vector<double>& sens,
                      const std::vector<double>& prec) {
    const MeanSd a = mean_sd(tp), b = mean_sd(fp), c = mean_sd(sens), d = mean_sd(prec);
    std::printf("%-10s TP %.1f (%.1f)  FP %.1f (%.1f)  Sensitivity %.3f (%.3f)  "
                "Precision %.3f (%.3f)\n",
                name, a.mean, a.sd, b.mean, b.sd, c.mean, c.sd, d.mean, d.sd);
  };
  std::printf("\nmeans over %d replicate(s), sd in parentheses:\n", replicates);
  row("khat-rule", kh_tp, kh_fp, kh_sens, kh_prec);
  row("median", md_tp, md_fp, md_sens, md_prec);
  const MeanSd k = mean_sd(khats), t = mean_sd(minutes);
  std::printf("k_hat %.2f (%.2f), minutes/replicate %.1f (%.1f)\n", k.mean, k.sd,
              t.mean, t.sd);
  return 0;
}
