// Command-line front end: simulate | tune | run | select.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssgibbs/io.hpp"
#include "ssgibbs/sampler.hpp"
#include "ssgibbs/selection.hpp"
#include "ssgibbs/simgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ssgibbs;

namespace {

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SimulateArgs {
  SimSpec spec;
  std::string out = ".";
};

int cmd_simulate(const SimulateArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimInstance inst = generate(args.spec);
  const double gen_seconds = elapsed_since(t0);

  fs::create_directories(args.out);
  const auto path = [&](const char* name) { return (fs::path(args.out) / name).string(); };
  const auto t1 = std::chrono::steady_clock::now();
  write_matrix_csv(path("X.csv"), inst.data.X, std::nullopt);
  write_vector_csv(path("y.csv"), inst.data.y);
  write_index_csv(path("truth.csv"), inst.truth);

  json manifest;
  manifest["schema"] = "ssgibbs.manifest/1";
  manifest["version"] = "0.1.0";
  manifest["command"] = "simulate";
  manifest["sim"] = {{"n", args.spec.n},
                     {"p", args.spec.p},
                     {"block_size", args.spec.block_size},
                     {"rho_block", args.spec.rho_block},
                     {"k_true", args.spec.k_true},
                     {"sigma2_true", args.spec.sigma2_true},
                     {"seed", args.spec.seed}};
  manifest["dataset"] = {{"n", inst.data.n()},
                         {"p", inst.data.p()},
                         {"hash", dataset_hash(inst.data)}};
  manifest["jitter_used"] = inst.jitter_used;
  manifest["snr"] = inst.snr;
  manifest["pve"] = inst.pve;
  manifest["pve_empirical"] = inst.pve_empirical;
  manifest["timing_seconds"] = {{"generate", gen_seconds}, {"write", elapsed_since(t1)}};
  manifest["outputs"] = {"X.csv", "y.csv", "truth.csv"};
  write_text_file(path("manifest.json"), manifest.dump(2) + "\n");

  std::printf("wrote %s/{X.csv,y.csv,truth.csv,manifest.json} (n=%lld, p=%lld, hash=%s)\n",
              args.out.c_str(), static_cast<long long>(inst.data.n()),
              static_cast<long long>(inst.data.p()), dataset_hash(inst.data).c_str());
  return 0;
}

struct TuneArgs {
  double p = 0;
  double epsilon = 0.1;
  double n_iter = 10000;
  double m = 0;  // 0: report the recommendation only
  double v_target = 1000;
  double rho_signal = -1, rho_null = -1;
  double rho_block = -1;
  double n = 500;
  std::string x_path, y_path;
  int k0 = 20;
  bool standardize = true;
  std::string out;
};

int cmd_tune(const TuneArgs& args) {
  double R, rho_signal = std::nan(""), rho_null = std::nan("");
  double p = args.p;
  if (!args.x_path.empty()) {
    Dataset data = read_dataset_csv(args.x_path, args.y_path);
    if (args.standardize) standardize_inplace(data);
    const MarginalStats ms = precompute_marginals(data);
    R = empirical_R(ms.rho, args.k0);
    p = static_cast<double>(data.p());
  } else if (args.rho_signal >= 0 && args.rho_null > 0) {
    rho_signal = args.rho_signal;
    rho_null = args.rho_null;
    R = rho_signal / rho_null;
  } else if (args.rho_block >= 0) {
    rho_signal = theoretical_signal_rho(args.rho_block);
    rho_null = null_rho_bar(static_cast<Eigen::Index>(args.n));
    R = rho_signal / rho_null;
  } else {
    std::fprintf(stderr,
                 "tune: provide --x/--y, or --rho-signal/--rho-null, or --rho-block\n");
    return 1;
  }
  if (p <= 0) {
    std::fprintf(stderr, "tune: --p is required when no dataset is given\n");
    return 1;
  }

  TuningReport report =
      visit_budget(p, args.epsilon, R, args.n_iter, args.m > 0 ? args.m : 1);
  report.rho_signal = rho_signal;
  report.rho_null_bar = rho_null;
  const MRecommendation rec = recommend_m(p, args.epsilon, R, args.n_iter, args.v_target);

  // display rounds to one decimal; tuning.json keeps full precision
  std::printf("signal-to-null ratio R = %.1f (full precision %.6g)\n", R, R);
  std::printf("effective concentration c = (1-eps) R + eps = %.1f\n", report.c);
  if (args.m > 0) {
    std::printf("expected signal visits V = n_iter * m * c / p = %.0f (%s)\n",
                report.expected_visits,
                report.feasible ? "feasible" : "below the 1000-visit target");
  }
  if (rec.feasible) {
    std::printf("smallest m with V >= %.0f: m = %d\n", args.v_target, rec.m);
  } else {
    std::printf("infeasible even at m = p; need n_iter >= %.0f\n", rec.required_n_iter);
  }

  if (!args.out.empty()) {
    fs::create_directories(args.out);
    json j;
    j["schema"] = "ssgibbs.tuning/1";
    j["p"] = p;
    j["epsilon"] = args.epsilon;
    j["n_iter"] = args.n_iter;
    j["R"] = R;
    if (std::isfinite(rho_signal)) j["rho_signal"] = rho_signal;
    if (std::isfinite(rho_null)) j["rho_null_bar"] = rho_null;
    j["c"] = report.c;
    if (args.m > 0) {
      j["m"] = args.m;
      j["expected_visits"] = report.expected_visits;
      j["feasible"] = report.feasible;
    }
    j["recommended_m"] = rec.m;
    j["recommendation_feasible"] = rec.feasible;
    j["v_target"] = args.v_target;
    write_text_file((fs::path(args.out) / "tuning.json").string(), j.dump(2) + "\n");
  }
  return 0;
}

struct RunArgs {
  std::string x_path, y_path, truth_path;
  std::string out = ".";
  std::string config_path;
  ChainConfig config;
  int replicates = 1;
  bool write_trace = false;
  Eigen::Index gram_cap = 5000;
};

// Fill config fields from a JSON file (a manifest.json "config" block works
// too); explicitly passed flags win.
void apply_config_file(const std::string& path, CLI::App* run_app, RunArgs& args) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json j = json::parse(in);
  if (j.contains("config")) j = j["config"];

  const auto take = [&](const char* flag, const char* key, auto& field) {
    if (run_app->count(flag) == 0 && j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  take("--epsilon", "epsilon", args.config.epsilon);
  take("--m", "m", args.config.m);
  take("--n-iter", "n_iter", args.config.n_iter);
  take("--burn-in", "burn_in", args.config.burn_in);
  take("--thin", "thin", args.config.thin);
  take("--k-target", "k_target", args.config.k_target);
  take("--seed", "seed", args.config.seed);
  take("--standardize", "standardize", args.config.standardize);
  if (run_app->count("--scan") == 0 && j.contains("scan_mode"))
    args.config.scan_mode =
        j["scan_mode"] == "full-sweep" ? ScanMode::full_sweep : ScanMode::random_scan;
  if (j.contains("hyper")) {
    const json& h = j["hyper"];
    Hyperparameters& hp = args.config.hyper;
    const auto hyper_take = [&](const char* flag, const char* key, double& field) {
      if (run_app->count(flag) == 0 && h.contains(key)) field = h[key];
    };
    hyper_take("--lambda1", "lambda1", hp.lambda1);
    hyper_take("--a-kappa", "a_kappa", hp.a_kappa);
    hyper_take("--b-kappa", "b_kappa", hp.b_kappa);
    hyper_take("--a-sigma", "a_sigma", hp.a_sigma);
    hyper_take("--b-sigma", "b_sigma", hp.b_sigma);
    hyper_take("--alpha-a", "alpha_a", hp.alpha_a);
    hyper_take("--beta-a", "beta_a", hp.beta_a);
    hyper_take("--alpha-b", "alpha_b", hp.alpha_b);
    hyper_take("--beta-b", "beta_b", hp.beta_b);
    hyper_take("--sigma-prop", "sigma_prop", hp.sigma_prop);
  }
}

void write_run_outputs(const std::string& dir, const ChainOutput& out,
                       const ChainConfig& config, const Dataset& data,
                       const std::string& run_id, bool write_trace,
                       const std::vector<PhaseTiming>& timings) {
  static std::mutex io_mutex;
  const std::lock_guard<std::mutex> lock(io_mutex);
  fs::create_directories(dir);
  const auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
  write_pip_csv(path("pip.csv"), out.pips, data.names, run_id);
  write_text_file(path("summary.json"), summary_json(out, run_id, data.n(), data.p()));
  std::vector<std::string> outputs{"pip.csv", "summary.json"};
  if (write_trace) {
    write_trace_csv(path("trace.csv"), out.trace, run_id);
    outputs.push_back("trace.csv");
  }
  write_text_file(path("manifest.json"), manifest_json(config, data, run_id, timings, outputs));
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

template <typename Get>
MeanSd mean_sd(const std::vector<ChainOutput>& outs, Get get) {
  double s = 0, s2 = 0;
  for (const auto& o : outs) {
    const double v = get(o);
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(outs.size());
  const double mean = s / n;
  const double var = n > 1 ? (s2 - n * mean * mean) / (n - 1) : 0.0;
  return {mean, std::sqrt(std::max(0.0, var))};
}

int cmd_run(CLI::App* run_app, RunArgs& args) {
  if (!args.config_path.empty()) apply_config_file(args.config_path, run_app, args);

  const auto t0 = std::chrono::steady_clock::now();
  Dataset data = read_dataset_csv(args.x_path, args.y_path);
  std::optional<std::vector<int>> truth;
  if (!args.truth_path.empty()) truth = read_index_csv(args.truth_path);
  const double load_seconds = elapsed_since(t0);

  validate(args.config, data);

  GramBackend gram;
  const GramBackend* gram_ptr = nullptr;
  if (args.config.scan_mode == ScanMode::full_sweep) {
    gram = build_full_gram(data, args.gram_cap);  // throws past the memory guard
    gram_ptr = &gram;
  }

  const std::string base_run_id = run_id_for(args.config, dataset_hash(data));

  if (args.replicates <= 1) {
    const auto t1 = std::chrono::steady_clock::now();
    const ChainOutput out = run_chain(args.config, data, truth, 0, gram_ptr);
    const double run_seconds = elapsed_since(t1);
    write_run_outputs(args.out, out, args.config, data, base_run_id, args.write_trace,
                      {{"load", load_seconds}, {"run", run_seconds}});
    std::printf("run %s: k_hat = %.3f, k_star = %d, |median| = %zu, sigma2_mean = %.4f\n",
                base_run_id.c_str(), out.pips.k_hat, out.pips.k_star,
                median_model(out.pips.pip).size(), out.sigma2_mean);
    if (out.metrics_median) {
      std::printf("  khat rule:    TP=%d FP=%d FN=%d sens=%.3f prec=%.3f\n",
                  out.metrics_khat->tp, out.metrics_khat->fp, out.metrics_khat->fn,
                  out.metrics_khat->sensitivity, out.metrics_khat->precision);
      std::printf("  median model: TP=%d FP=%d FN=%d sens=%.3f prec=%.3f\n",
                  out.metrics_median->tp, out.metrics_median->fp, out.metrics_median->fn,
                  out.metrics_median->sensitivity, out.metrics_median->precision);
    }
    return 0;
  }

  // independent chains, one stream per replicate, merged afterwards
  std::vector<ChainOutput> outs(args.replicates);
  std::vector<double> run_seconds(args.replicates, 0.0);
  std::vector<std::thread> threads;
  threads.reserve(args.replicates);
  for (int r = 0; r < args.replicates; ++r) {
    threads.emplace_back([&, r] {
      const auto t1 = std::chrono::steady_clock::now();
      outs[r] = run_chain(args.config, data, truth, static_cast<std::uint64_t>(r), gram_ptr);
      run_seconds[r] = elapsed_since(t1);
    });
  }
  for (auto& t : threads) t.join();

  json agg;
  agg["schema"] = "ssgibbs.aggregate/1";
  agg["replicates"] = args.replicates;
  agg["run_id"] = base_run_id;
  json reps = json::array();
  for (int r = 0; r < args.replicates; ++r) {
    char rep_name[16];
    std::snprintf(rep_name, sizeof(rep_name), "rep_%03d", r);
    write_run_outputs((fs::path(args.out) / rep_name).string(), outs[r], args.config,
                      data, base_run_id + "-" + rep_name, args.write_trace,
                      {{"load", load_seconds}, {"run", run_seconds[r]}});
    json rep;
    rep["dir"] = rep_name;
    rep["k_hat"] = outs[r].pips.k_hat;
    rep["sigma2_mean"] = outs[r].sigma2_mean;
    rep["seconds"] = run_seconds[r];
    if (outs[r].metrics_khat) {
      rep["khat_rule"] = {{"tp", outs[r].metrics_khat->tp},
                          {"fp", outs[r].metrics_khat->fp},
                          {"sensitivity", outs[r].metrics_khat->sensitivity},
                          {"precision", outs[r].metrics_khat->precision}};
      rep["median"] = {{"tp", outs[r].metrics_median->tp},
                       {"fp", outs[r].metrics_median->fp},
                       {"sensitivity", outs[r].metrics_median->sensitivity},
                       {"precision", outs[r].metrics_median->precision}};
    }
    reps.push_back(rep);
  }
  agg["per_replicate"] = reps;
  if (truth) {
    // means with standard deviations, one block per selection rule
    json khat_rule, median;
    const auto put = [&](json& dst, const char* name, auto get) {
      const MeanSd ms = mean_sd(outs, get);
      dst[name] = {{"mean", ms.mean}, {"sd", ms.sd}};
    };
    put(khat_rule, "tp", [](const ChainOutput& o) { return double(o.metrics_khat->tp); });
    put(khat_rule, "fp", [](const ChainOutput& o) { return double(o.metrics_khat->fp); });
    put(khat_rule, "sensitivity",
        [](const ChainOutput& o) { return o.metrics_khat->sensitivity; });
    put(khat_rule, "precision",
        [](const ChainOutput& o) { return o.metrics_khat->precision; });
    put(median, "tp", [](const ChainOutput& o) { return double(o.metrics_median->tp); });
    put(median, "fp", [](const ChainOutput& o) { return double(o.metrics_median->fp); });
    put(median, "sensitivity",
        [](const ChainOutput& o) { return o.metrics_median->sensitivity; });
    put(median, "precision",
        [](const ChainOutput& o) { return o.metrics_median->precision; });
    agg["khat_rule"] = khat_rule;
    agg["median"] = median;
  }
  const MeanSd kh = mean_sd(outs, [](const ChainOutput& o) { return o.pips.k_hat; });
  agg["k_hat"] = {{"mean", kh.mean}, {"sd", kh.sd}};
  fs::create_directories(args.out);
  write_text_file((fs::path(args.out) / "aggregate.json").string(), agg.dump(2) + "\n");
  std::printf("wrote %d replicates and aggregate.json under %s\n", args.replicates,
              args.out.c_str());
  return 0;
}

struct SelectArgs {
  std::string pip_path, truth_path;
};

int cmd_select(const SelectArgs& args) {
  const Eigen::VectorXd pip = read_pip_column(args.pip_path);
  const std::vector<int> truth = read_index_csv(args.truth_path);

  const KhatResult kr = khat_rule(pip);
  const SelectionMetrics mk = selection_metrics(kr.selected, truth);
  const std::vector<int> med = median_model(pip);
  const SelectionMetrics mm = selection_metrics(med, truth);

  std::printf("rule        TP  FP  FN  sensitivity  precision\n");
  std::printf("khat-rule  %3d %3d %3d        %.3f      %.3f\n", mk.tp, mk.fp, mk.fn,
              mk.sensitivity, mk.precision);
  std::printf("median     %3d %3d %3d        %.3f      %.3f\n", mm.tp, mm.fp, mm.fn,
              mm.sensitivity, mm.precision);
  std::printf("k_hat = %.3f, k_star = %d, t_hat = %.4f\n", kr.k_hat, kr.k_star, kr.t_hat);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike-and-slab Bayesian variable selection via a symmetric "
               "random-scan collapsed Gibbs sampler"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a benchmark instance");
  simulate->add_option("--n", sim.spec.n, "observations")->capture_default_str();
  simulate->add_option("--p", sim.spec.p, "predictors")->capture_default_str();
  simulate->add_option("--block-size", sim.spec.block_size)->capture_default_str();
  simulate->add_option("--rho", sim.spec.rho_block, "within-block correlation, in [0,1)")
      ->check(CLI::Range(0.0, 0.9999999))
      ->capture_default_str();
  simulate->add_option("--k-true", sim.spec.k_true)->capture_default_str();
  simulate->add_option("--sigma2", sim.spec.sigma2_true)->capture_default_str();
  simulate->add_option("--seed", sim.spec.seed)->capture_default_str();
  simulate->add_option("--out", sim.out, "output directory")->capture_default_str();

  TuneArgs tune;
  CLI::App* tune_app = app.add_subcommand("tune", "visit-budget calculator");
  tune_app->add_option("--p", tune.p, "number of predictors");
  tune_app->add_option("--epsilon", tune.epsilon)->capture_default_str();
  tune_app->add_option("--n-iter", tune.n_iter)->capture_default_str();
  tune_app->add_option("--m", tune.m, "coordinates per iteration (for the V report)");
  tune_app->add_option("--v-target", tune.v_target)->capture_default_str();
  tune_app->add_option("--rho-signal", tune.rho_signal);
  tune_app->add_option("--rho-null", tune.rho_null);
  tune_app->add_option("--rho-block", tune.rho_block,
                       "use the closed forms for the benchmark design");
  tune_app->add_option("--n", tune.n, "observations (for the null correlation)")
      ->capture_default_str();
  tune_app->add_option("--x", tune.x_path, "estimate R from a dataset");
  tune_app->add_option("--y", tune.y_path);
  tune_app->add_option("--k0", tune.k0, "top scores treated as signal")
      ->capture_default_str();
  tune_app->add_flag("--standardize,!--no-standardize", tune.standardize,
                     "center and scale before estimating R");
  tune_app->add_option("--out", tune.out, "write tuning.json here");

  RunArgs run;
  CLI::App* run_app = app.add_subcommand("run", "run the sampler on a dataset");
  run_app->add_option("--x", run.x_path, "design matrix CSV")->required();
  run_app->add_option("--y", run.y_path, "response CSV")->required();
  run_app->add_option("--truth", run.truth_path, "1-based truth indices (optional)");
  run_app->add_option("--out", run.out)->capture_default_str();
  run_app->add_option("--config", run.config_path, "JSON config (flags take precedence)");
  run_app->add_option("--epsilon", run.config.epsilon)->capture_default_str();
  run_app->add_option("--m", run.config.m)->capture_default_str();
  run_app->add_option("--n-iter", run.config.n_iter)->capture_default_str();
  run_app->add_option("--burn-in", run.config.burn_in)->capture_default_str();
  run_app->add_option("--thin", run.config.thin)->capture_default_str();
  run_app->add_option("--k-target", run.config.k_target)->capture_default_str();
  run_app
      ->add_option_function<std::string>(
          "--scan",
          [&run](const std::string& v) {
            run.config.scan_mode =
                v == "full-sweep" ? ScanMode::full_sweep : ScanMode::random_scan;
          },
          "random-scan | full-sweep")
      ->check(CLI::IsMember({"random-scan", "full-sweep"}));
  run_app->add_option("--seed", run.config.seed)->capture_default_str();
  run_app->add_flag("--standardize", run.config.standardize,
                    "center and scale X and y before sampling");
  run_app->add_option("--replicates", run.replicates)->capture_default_str();
  run_app->add_flag("--trace", run.write_trace, "write trace.csv of kept iterations");
  run_app->add_option("--gram-cap", run.gram_cap,
                      "refuse full-sweep beyond this p (p^2 storage guard)")
      ->capture_default_str();
  Hyperparameters& hp = run.config.hyper;
  run_app->add_option("--lambda1", hp.lambda1)->capture_default_str();
  run_app->add_option("--a-kappa", hp.a_kappa)->capture_default_str();
  run_app->add_option("--b-kappa", hp.b_kappa)->capture_default_str();
  run_app->add_option("--a-sigma", hp.a_sigma)->capture_default_str();
  run_app->add_option("--b-sigma", hp.b_sigma)->capture_default_str();
  run_app->add_option("--alpha-a", hp.alpha_a)->capture_default_str();
  run_app->add_option("--beta-a", hp.beta_a)->capture_default_str();
  run_app->add_option("--alpha-b", hp.alpha_b)->capture_default_str();
  run_app->add_option("--beta-b", hp.beta_b)->capture_default_str();
  run_app->add_option("--sigma-prop", hp.sigma_prop)->capture_default_str();

  SelectArgs sel;
  CLI::App* select = app.add_subcommand("select", "selection metrics against a truth set");
  select->add_option("--pip", sel.pip_path, "pip.csv from a run")->required();
  select->add_option("--truth", sel.truth_path, "1-based truth indices")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (tune_app->parsed()) return cmd_tune(tune);
    if (run_app->parsed()) return cmd_run(run_app, run);
    if (select->parsed()) return cmd_select(sel);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
