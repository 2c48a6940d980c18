#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ssgibbs/io.hpp"
#include "test_util.hpp"

using namespace ssgibbs;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ssgibbs_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("matrix and vector CSV round-trip bit-exactly") {
  TempDir tmp;
  RandomStream rng(81);
  Eigen::MatrixXd X(7, 4);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 4; ++c) X(r, c) = rng.normal() * std::pow(10.0, (r - 3) * 40);
  X(0, 0) = 1.0 / 3.0;
  X(1, 1) = -0.0;
  write_matrix_csv(tmp.file("X.csv"), X, std::nullopt);

  std::optional<std::vector<std::string>> names;
  const Eigen::MatrixXd back = read_matrix_csv(tmp.file("X.csv"), &names);
  CHECK_FALSE(names.has_value());
  CHECK(back == X);

  Eigen::VectorXd y(5);
  y << 1.0 / 7.0, -2.5e-300, 3.5e300, 0.0, 42.0;
  write_vector_csv(tmp.file("y.csv"), y);
  CHECK(read_vector_csv(tmp.file("y.csv")) == y);
}

TEST_CASE("header detection and dataset assembly") {
  TempDir tmp;
  Eigen::MatrixXd X(3, 2);
  X << 1, 2, 3, 4, 5, 6;
  std::vector<std::string> names{"YOAB_at", "1053_x"};
  write_matrix_csv(tmp.file("X.csv"), X, names);
  write_vector_csv(tmp.file("y.csv"), Eigen::VectorXd::Ones(3));

  const Dataset d = read_dataset_csv(tmp.file("X.csv"), tmp.file("y.csv"));
  CHECK(d.X == X);
  REQUIRE(d.names.has_value());
  CHECK((*d.names)[0] == "YOAB_at");
  CHECK((*d.names)[1] == "1053_x");

  write_vector_csv(tmp.file("y_short.csv"), Eigen::VectorXd::Ones(2));
  CHECK_THROWS(read_dataset_csv(tmp.file("X.csv"), tmp.file("y_short.csv")));
}

TEST_CASE("malformed CSV errors carry row and column context") {
  TempDir tmp;
  write_text_file(tmp.file("bad.csv"), "1.0,2.0\n3.0,oops\n");
  try {
    read_matrix_csv(tmp.file("bad.csv"), nullptr);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
    CHECK(msg.find("oops") != std::string::npos);
  }

  write_text_file(tmp.file("ragged.csv"), "1,2,3\n4,5\n");
  CHECK_THROWS(read_matrix_csv(tmp.file("ragged.csv"), nullptr));
}

TEST_CASE("index CSV is 1-based on disk") {
  TempDir tmp;
  const std::vector<int> idx{0, 4, 9};
  write_index_csv(tmp.file("truth.csv"), idx);
  CHECK(slurp(tmp.file("truth.csv")) == "1\n5\n10\n");
  CHECK(read_index_csv(tmp.file("truth.csv")) == idx);
}

TEST_CASE("pip CSV carries the manifest reference and round-trips the pip column") {
  TempDir tmp;
  PipSummary pips;
  pips.pip.resize(3);
  pips.pip << 0.875, 1.0 / 3.0, 0.0;
  pips.visits = {10, 20, 30};
  pips.beta_mean = Eigen::VectorXd::Zero(3);
  pips.beta_sd = Eigen::VectorXd::Zero(3);
  write_pip_csv(tmp.file("pip.csv"), pips, std::nullopt, "deadbeef00000000");

  const std::string content = slurp(tmp.file("pip.csv"));
  CHECK(content.find("# manifest: deadbeef00000000") == 0);
  CHECK(content.find("index,name,pip,visits,beta_mean,beta_sd") != std::string::npos);

  const Eigen::VectorXd pip_back = read_pip_column(tmp.file("pip.csv"));
  CHECK(pip_back == pips.pip);
}

TEST_CASE("hashes and run ids are deterministic and content-sensitive") {
  RandomStream rng(82);
  Dataset d = testutil::random_dataset(6, 3, rng);
  const std::string h1 = dataset_hash(d);
  CHECK(h1 == dataset_hash(d));
  Dataset d2 = d;
  d2.X(0, 0) += 1e-12;
  CHECK(h1 != dataset_hash(d2));

  ChainConfig cfg;
  const std::string r1 = run_id_for(cfg, h1);
  CHECK(r1 == run_id_for(cfg, h1));
  cfg.seed += 1;
  CHECK(r1 != run_id_for(cfg, h1));
}

TEST_CASE("summary JSON k_hat equals the written pip column sum") {
  TempDir tmp;
  ChainOutput out;
  out.pips.pip.resize(4);
  out.pips.pip << 0.9, 0.8, 0.7, 0.2;
  out.pips.visits = {1, 2, 3, 4};
  out.pips.beta_mean = Eigen::VectorXd::Zero(4);
  out.pips.beta_sd = Eigen::VectorXd::Zero(4);
  const KhatResult kr = khat_rule(out.pips.pip);
  out.pips.k_hat = kr.k_hat;
  out.pips.k_star = kr.k_star;
  out.pips.t_hat = kr.t_hat;
  out.pips.selected = kr.selected;
  out.n_kept = 10;

  write_pip_csv(tmp.file("pip.csv"), out.pips, std::nullopt, "run");
  const Eigen::VectorXd pip_back = read_pip_column(tmp.file("pip.csv"));
  CHECK(std::abs(pip_back.sum() - out.pips.k_hat) <= 1e-9);

  const std::string json = summary_json(out, "run", 20, 4);
  CHECK(json.find("\"manifest\": \"run\"") != std::string::npos);
  CHECK(json.find("\"k_star\": 3") != std::string::npos);
  CHECK(json.find("\"selected_khat\": [") != std::string::npos);
}

TEST_CASE("manifest echoes config, fingerprint, and timing") {
  RandomStream rng(83);
  const Dataset d = testutil::random_dataset(5, 2, rng);
  ChainConfig cfg;
  cfg.seed = 9;
  const std::string id = run_id_for(cfg, dataset_hash(d));
  const std::string m = manifest_json(cfg, d, id, {{"run", 1.5}}, {"pip.csv"});
  CHECK(m.find("\"run_id\": \"" + id + "\"") != std::string::npos);
  CHECK(m.find("\"n\": 5") != std::string::npos);
  CHECK(m.find("\"p\": 2") != std::string::npos);
  CHECK(m.find("\"seed\": 9") != std::string::npos);
  CHECK(m.find("\"lambda1\": 1.0") != std::string::npos);
  CHECK(m.find("\"outputs\": [") != std::string::npos);
}
