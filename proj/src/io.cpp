#include "ssgibbs/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ssgibbs {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string dataset_hash(const Dataset& data) {
  std::uint64_t h = fnv1a64(data.X.data(), sizeof(double) * data.X.size());
  h = fnv1a64(data.y.data(), sizeof(double) * data.y.size(), h);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& field, double* out) {
  const char* s = field.c_str();
  char* end = nullptr;
  *out = std::strtod(s, &end);
  return end != s && *end == '\0';
}

double parse_double_or_throw(const std::string& field, const std::string& path,
                             std::size_t row, std::size_t col) {
  double v;
  if (!parse_double(field, &v))
    throw std::runtime_error(path + ": cannot parse '" + field + "' at row " +
                             std::to_string(row + 1) + ", column " + std::to_string(col + 1));
  return v;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(const std::string& path,
                                std::optional<std::vector<std::string>>* names_out) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");

  std::vector<std::string> first = split_csv(lines[0]);
  const std::size_t p = first.size();
  bool has_header = false;
  for (const auto& f : first) {
    double v;
    if (!parse_double(f, &v)) {
      has_header = true;
      break;
    }
  }
  if (names_out != nullptr)
    *names_out = has_header ? std::optional<std::vector<std::string>>(first) : std::nullopt;

  const std::size_t first_row = has_header ? 1 : 0;
  const std::size_t n = lines.size() - first_row;
  if (n == 0) throw std::runtime_error(path + ": no data rows");
  Eigen::MatrixXd X(n, p);
  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<std::string> fields = split_csv(lines[first_row + r]);
    if (fields.size() != p)
      throw std::runtime_error(path + ": row " + std::to_string(first_row + r + 1) +
                               " has " + std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(p));
    for (std::size_t c = 0; c < p; ++c)
      X(r, c) = parse_double_or_throw(fields[c], path, first_row + r, c);
  }
  return X;
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::size_t first_row = 0;
  if (!lines.empty()) {
    double v;
    if (!parse_double(lines[0], &v)) first_row = 1;  // single header token
  }
  if (lines.size() <= first_row) throw std::runtime_error(path + ": no data rows");
  Eigen::VectorXd y(lines.size() - first_row);
  for (std::size_t i = first_row; i < lines.size(); ++i)
    y(i - first_row) = parse_double_or_throw(lines[i], path, i, 0);
  return y;
}

Dataset read_dataset_csv(const std::string& x_path, const std::string& y_path) {
  Dataset data;
  std::optional<std::vector<std::string>> names;
  data.X = read_matrix_csv(x_path, &names);
  data.y = read_vector_csv(y_path);
  data.names = std::move(names);
  if (data.y.size() != data.X.rows())
    throw std::runtime_error(x_path + " and " + y_path + ": row count mismatch (" +
                             std::to_string(data.X.rows()) + " vs " +
                             std::to_string(data.y.size()) + ")");
  return data;
}

std::vector<int> read_index_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<int> idx;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    double v;
    if (!parse_double(lines[i], &v)) {
      if (i == 0) continue;  // header token
      throw std::runtime_error(path + ": cannot parse index '" + lines[i] + "'");
    }
    idx.push_back(static_cast<int>(v) - 1);
  }
  return idx;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& X,
                      const std::optional<std::vector<std::string>>& names) {
  std::string buf;
  buf.reserve(static_cast<std::size_t>(X.size()) * 20);
  if (names) {
    for (std::size_t j = 0; j < names->size(); ++j) {
      if (j) buf += ',';
      buf += (*names)[j];
    }
    buf += '\n';
  }
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      if (c) buf += ',';
      buf += format_double(X(r, c));
    }
    buf += '\n';
  }
  write_text_file(path, buf);
}

void write_vector_csv(const std::string& path, const Eigen::VectorXd& v) {
  std::string buf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    buf += format_double(v(i));
    buf += '\n';
  }
  write_text_file(path, buf);
}

void write_index_csv(const std::string& path, const std::vector<int>& idx) {
  std::string buf;
  for (int j : idx) {
    buf += std::to_string(j + 1);
    buf += '\n';
  }
  write_text_file(path, buf);
}

void write_pip_csv(const std::string& path, const PipSummary& pips,
                   const std::optional<std::vector<std::string>>& names,
                   const std::string& run_id) {
  std::string buf = "# manifest: " + run_id + "\n";
  buf += "index,name,pip,visits,beta_mean,beta_sd\n";
  for (Eigen::Index j = 0; j < pips.pip.size(); ++j) {
    buf += std::to_string(j + 1);
    buf += ',';
    buf += names ? (*names)[j] : "V" + std::to_string(j + 1);
    buf += ',';
    buf += format_double(pips.pip(j));
    buf += ',';
    buf += std::to_string(pips.visits[j]);
    buf += ',';
    buf += format_double(pips.beta_mean(j));
    buf += ',';
    buf += format_double(pips.beta_sd(j));
    buf += '\n';
  }
  write_text_file(path, buf);
}

Eigen::VectorXd read_pip_column(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  const std::vector<std::string> header = split_csv(lines[0]);
  std::size_t pip_col = 2;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == "pip") pip_col = c;
  Eigen::VectorXd pip(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split_csv(lines[r]);
    if (fields.size() <= pip_col)
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " too short");
    pip(r - 1) = parse_double_or_throw(fields[pip_col], path, r, pip_col);
  }
  return pip;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::string& run_id) {
  std::string buf = "# manifest: " + run_id + "\n";
  buf += "iteration,active_size,sigma2,pi\n";
  for (const TraceRow& row : trace) {
    buf += std::to_string(row.iteration);
    buf += ',';
    buf += std::to_string(row.active_size);
    buf += ',';
    buf += format_double(row.sigma2);
    buf += ',';
    buf += format_double(row.pi);
    buf += '\n';
  }
  write_text_file(path, buf);
}

namespace {

ordered_json config_json(const ChainConfig& config) {
  const Hyperparameters& h = config.hyper;
  ordered_json j;
  j["epsilon"] = config.epsilon;
  j["m"] = config.m;
  j["n_iter"] = config.n_iter;
  j["burn_in"] = config.burn_in;
  j["thin"] = config.thin;
  j["k_target"] = config.k_target;
  j["scan_mode"] = config.scan_mode == ScanMode::random_scan ? "random-scan" : "full-sweep";
  j["seed"] = config.seed;
  j["standardize"] = config.standardize;
  j["hyper"] = ordered_json{{"lambda1", h.lambda1},   {"a_kappa", h.a_kappa},
                            {"b_kappa", h.b_kappa},   {"a_sigma", h.a_sigma},
                            {"b_sigma", h.b_sigma},   {"alpha_a", h.alpha_a},
                            {"beta_a", h.beta_a},     {"alpha_b", h.alpha_b},
                            {"beta_b", h.beta_b},     {"sigma_prop", h.sigma_prop}};
  return j;
}

}  // namespace

std::string run_id_for(const ChainConfig& config, const std::string& data_hash) {
  const std::string blob = config_json(config).dump() + "|" + data_hash;
  const std::uint64_t h = fnv1a64(blob.data(), blob.size());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_json(const ChainConfig& config, const Dataset& data,
                          const std::string& run_id,
                          const std::vector<PhaseTiming>& timings,
                          const std::vector<std::string>& outputs) {
  ordered_json j;
  j["schema"] = "ssgibbs.manifest/1";
  j["version"] = "0.1.0";
  j["run_id"] = run_id;
  j["config"] = config_json(config);
  j["dataset"] = ordered_json{{"n", data.n()}, {"p", data.p()}, {"hash", dataset_hash(data)}};
  j["seed"] = config.seed;
  ordered_json t = ordered_json::object();
  for (const PhaseTiming& pt : timings) t[pt.phase] = pt.seconds;
  j["timing_seconds"] = t;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

namespace {

ordered_json metrics_json(const SelectionMetrics& m) {
  return ordered_json{{"tp", m.tp},
                      {"fp", m.fp},
                      {"fn", m.fn},
                      {"sensitivity", m.sensitivity},
                      {"precision", m.precision}};
}

std::vector<int> one_based(const std::vector<int>& idx) {
  std::vector<int> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = idx[i] + 1;
  return out;
}

}  // namespace

std::string summary_json(const ChainOutput& out, const std::string& run_id,
                         Eigen::Index n, Eigen::Index p) {
  ordered_json j;
  j["schema"] = "ssgibbs.summary/1";
  j["manifest"] = run_id;
  j["n"] = n;
  j["p"] = p;
  j["n_kept"] = out.n_kept;
  j["k_hat"] = out.pips.k_hat;
  j["k_star"] = out.pips.k_star;
  j["t_hat"] = out.pips.t_hat;
  j["selected_khat"] = one_based(out.pips.selected);
  j["selected_median"] = one_based(median_model(out.pips.pip));
  j["sigma2_mean"] = out.sigma2_mean;
  j["counters"] = ordered_json{{"gibbs_updates", out.counters.gibbs_updates},
                               {"gibbs_flips", out.counters.gibbs_flips},
                               {"mh_proposals", out.counters.mh_proposals},
                               {"mh_accepts", out.counters.mh_accepts},
                               {"skipped_stability", out.counters.skipped_stability},
                               {"abpi_proposals", out.counters.abpi_proposals},
                               {"abpi_accepts", out.counters.abpi_accepts},
                               {"sse_clamped", out.counters.sse_clamped}};
  if (out.metrics_khat) j["metrics_khat"] = metrics_json(*out.metrics_khat);
  if (out.metrics_median) j["metrics_median"] = metrics_json(*out.metrics_median);
  return j.dump(2) + "\n";
}

}  // namespace ssgibbs
