#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ssgibbs/types.hpp"

using namespace ssgibbs;

namespace {

Dataset small_data(int n, int p) {
  Dataset d;
  d.X = Eigen::MatrixXd::Ones(n, p);
  d.y = Eigen::VectorXd::Ones(n);
  return d;
}

}  // namespace

TEST_CASE("validate accepts the benchmark-scale configuration") {
  Dataset d = small_data(500, 10000);
  ChainConfig cfg;
  cfg.m = 500;
  cfg.epsilon = 0.1;
  CHECK_NOTHROW(validate(cfg, d));
}

TEST_CASE("validate reports the offending field") {
  Dataset d = small_data(10, 5);
  ChainConfig cfg;
  cfg.m = 6;  // m = p + 1
  cfg.k_target = 3;
  CHECK_THROWS_WITH_AS(validate(cfg, d), "config: m exceeds p", std::invalid_argument);

  cfg.m = 5;
  cfg.epsilon = 0.0;
  CHECK_THROWS_WITH_AS(validate(cfg, d), "config: epsilon must lie in (0,1)",
                       std::invalid_argument);
  cfg.epsilon = 1.0;
  CHECK_THROWS(validate(cfg, d));
  cfg.epsilon = 0.1;

  cfg.burn_in = cfg.n_iter;
  CHECK_THROWS(validate(cfg, d));
  cfg.burn_in = 0;

  Dataset bad = small_data(10, 5);
  bad.y.resize(9);
  bad.y.setOnes();
  CHECK_THROWS_WITH_AS(validate(cfg, bad), "dataset: X and y dimension mismatch",
                       std::invalid_argument);

  bad = small_data(10, 5);
  bad.X(3, 2) = std::nan("");
  CHECK_THROWS(validate(cfg, bad));
}

TEST_CASE("initialize_state matches the documented initial law") {
  ChainConfig cfg;
  cfg.k_target = 20;
  RandomStream rng(1);
  const ModelState s = initialize_state(cfg, 10000, rng);

  CHECK(s.active.size() == 20);
  CHECK(s.beta_active.size() == 20);
  std::set<int> uniq(s.active.begin(), s.active.end());
  CHECK(uniq.size() == 20);
  int z_count = 0;
  for (auto b : s.z) z_count += b;
  CHECK(z_count == 20);
  for (double t2 : s.tau2) CHECK(t2 > 0.0);

  CHECK(s.pi == doctest::Approx(0.002));
  CHECK(s.a_pi == 1.0);
  CHECK(s.b_pi == doctest::Approx(499.0));
  CHECK(s.kappa2 == 1.0);
  CHECK(s.sigma2 == 1.0);
}

TEST_CASE("initialize_state riboflavin-scale arithmetic") {
  ChainConfig cfg;
  cfg.k_target = 20;
  RandomStream rng(2);
  const ModelState s = initialize_state(cfg, 4088, rng);
  CHECK(s.b_pi == doctest::Approx(203.4).epsilon(1e-12));
  CHECK(s.a_pi / (s.a_pi + s.b_pi) == doctest::Approx(0.0049).epsilon(0.01));
}

TEST_CASE("initialize_state floors the degenerate Beta parameter") {
  ChainConfig cfg;
  cfg.k_target = 1;
  RandomStream rng(3);
  const ModelState s = initialize_state(cfg, 1, rng);
  CHECK(s.active == std::vector<int>{0});
  CHECK(s.b_pi == 1e-6);
}

TEST_CASE("initialize_state is deterministic and caps the active set at p") {
  ChainConfig cfg;
  cfg.k_target = 20;
  RandomStream r1(9), r2(9);
  const ModelState a = initialize_state(cfg, 50, r1);
  const ModelState b = initialize_state(cfg, 50, r2);
  CHECK(a.active == b.active);
  CHECK(a.beta_active == b.beta_active);
  CHECK(a.tau2 == b.tau2);

  RandomStream r3(9);
  const ModelState c = initialize_state(cfg, 5, r3);
  CHECK(c.active.size() == 5);
  CHECK(c.beta_active.size() == 5);
}
