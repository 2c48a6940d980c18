#include "ssgibbs/gram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssgibbs {

MarginalStats precompute_marginals(const Dataset& data) {
  const Eigen::Index p = data.p();
  MarginalStats ms;
  ms.s = data.X.transpose() * data.y;
  ms.t = data.X.colwise().squaredNorm();
  ms.c_y = data.y.squaredNorm();
  ms.rho.resize(p);
  ms.degenerate.assign(p, 0);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double denom2 = ms.t(j) * ms.c_y;
    if (denom2 > 0.0) {
      ms.rho(j) = std::abs(ms.s(j)) / std::sqrt(denom2);
      if (ms.rho(j) > 1.0) ms.rho(j) = 1.0;  // rounding can nudge past 1
    } else {
      ms.rho(j) = 0.0;
      ms.degenerate[j] = 1;
    }
  }
  return ms;
}

Eigen::VectorXd cross_product_active(const Dataset& data, const std::vector<int>& active,
                                     int j) {
  if (j < 0 || j >= data.p())
    throw std::out_of_range("cross_product_active: column index out of range");
  Eigen::VectorXd out(static_cast<Eigen::Index>(active.size()));
  const auto xj = data.X.col(j);
  for (std::size_t i = 0; i < active.size(); ++i) {
    const int a = active[i];
    if (a < 0 || a >= data.p())
      throw std::out_of_range("cross_product_active: active index out of range");
    out(static_cast<Eigen::Index>(i)) = data.X.col(a).dot(xj);
  }
  return out;
}

GramBackend build_full_gram(const Dataset& data, Eigen::Index p_cap) {
  const Eigen::Index p = data.p();
  if (p > p_cap)
    throw std::runtime_error(
        "build_full_gram: p = " + std::to_string(p) + " exceeds the storage cap " +
        std::to_string(p_cap) + "; use on-the-fly mode or raise the cap");
  GramBackend backend;
  backend.mode = GramMode::full;
  backend.G0.setZero(p, p);
  backend.G0.selfadjointView<Eigen::Lower>().rankUpdate(data.X.transpose());
  backend.G0 = backend.G0.selfadjointView<Eigen::Lower>();
  return backend;
}

std::vector<std::uint8_t> standardize_inplace(Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  std::vector<std::uint8_t> degenerate(p, 0);
  const double denom = static_cast<double>(n - 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    auto col = data.X.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / denom);
    if (sd > 0.0) {
      col /= sd;
    } else {
      degenerate[j] = 1;
    }
  }
  const double ymean = data.y.mean();
  data.y.array() -= ymean;
  const double ysd = std::sqrt(data.y.squaredNorm() / denom);
  if (ysd > 0.0) data.y /= ysd;
  return degenerate;
}

}  // namespace ssgibbs
