#ifndef SSGIBBS_IO_HPP
#define SSGIBBS_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ssgibbs/sampler.hpp"
#include "ssgibbs/selection.hpp"
#include "ssgibbs/types.hpp"

namespace ssgibbs {

// CSV conventions: comma-separated, '.' decimal point, doubles written with
// 17 significant digits so a read-back reproduces the matrix bit-exactly.
// X.csv may carry one header row of column names; y.csv is a single column;
// truth.csv holds 1-based indices, one per line. Lines starting with '#' are
// skipped on input.

Dataset read_dataset_csv(const std::string& x_path, const std::string& y_path);
Eigen::MatrixXd read_matrix_csv(const std::string& path,
                                std::optional<std::vector<std::string>>* names_out);
Eigen::VectorXd read_vector_csv(const std::string& path);
std::vector<int> read_index_csv(const std::string& path);  // 1-based file -> 0-based

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& X,
                      const std::optional<std::vector<std::string>>& names);
void write_vector_csv(const std::string& path, const Eigen::VectorXd& v);
void write_index_csv(const std::string& path, const std::vector<int>& idx);  // 0- -> 1-based

// pip.csv: "# manifest: <run id>" comment, header
// index,name,pip,visits,beta_mean,beta_sd, one row per predictor (1-based
// index).
void write_pip_csv(const std::string& path, const PipSummary& pips,
                   const std::optional<std::vector<std::string>>& names,
                   const std::string& run_id);
Eigen::VectorXd read_pip_column(const std::string& path);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::string& run_id);

// FNV-1a 64-bit over raw bytes; used for dataset fingerprints and run ids.
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t h = 0xcbf29ce484222325ull);
std::string dataset_hash(const Dataset& data);

// Round-trip-safe double formatting (17 significant digits).
std::string format_double(double x);

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

// config echo + dataset fingerprint + seed + timings, written as
// manifest.json. run_id is derived from (config, data hash, seed) and is the
// token other outputs of the same run carry.
std::string manifest_json(const ChainConfig& config, const Dataset& data,
                          const std::string& run_id,
                          const std::vector<PhaseTiming>& timings,
                          const std::vector<std::string>& outputs);
std::string run_id_for(const ChainConfig& config, const std::string& data_hash);

std::string summary_json(const ChainOutput& out, const std::string& run_id,
                         Eigen::Index n, Eigen::Index p);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ssgibbs

#endif  // SSGIBBS_IO_HPP
