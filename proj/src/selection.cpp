#include "ssgibbs/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssgibbs {

KhatResult khat_rule(const Eigen::VectorXd& pip) {
  const Eigen::Index p = pip.size();
  if (p == 0) throw std::invalid_argument("khat_rule: empty pip vector");

  KhatResult res;
  long double acc = 0.0L;
  for (Eigen::Index j = 0; j < p; ++j) acc += pip(j);
  res.k_hat = static_cast<double>(acc);
  res.k_star = static_cast<int>(
      std::max(1.0, std::min(static_cast<double>(p), std::round(res.k_hat))));

  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return pip(a) > pip(b); });
  res.t_hat = pip(order[res.k_star - 1]);

  if (res.t_hat > 0.0) {
    for (Eigen::Index j = 0; j < p; ++j)
      if (pip(j) >= res.t_hat) res.selected.push_back(static_cast<int>(j));
  } else {
    // Threshold zero selects everything; keep the positive-PIP indices and
    // pad with the lowest zero-PIP indices up to k_star.
    for (Eigen::Index j = 0; j < p; ++j)
      if (pip(j) > 0.0) res.selected.push_back(static_cast<int>(j));
    for (Eigen::Index j = 0; j < p && static_cast<int>(res.selected.size()) < res.k_star;
         ++j)
      if (pip(j) == 0.0) res.selected.push_back(static_cast<int>(j));
    std::sort(res.selected.begin(), res.selected.end());
  }
  return res;
}

std::vector<int> median_model(const Eigen::VectorXd& pip) {
  if (pip.size() == 0) throw std::invalid_argument("median_model: empty pip vector");
  std::vector<int> out;
  for (Eigen::Index j = 0; j < pip.size(); ++j)
    if (pip(j) >= 0.5) out.push_back(static_cast<int>(j));
  return out;
}

SelectionMetrics selection_metrics(const std::vector<int>& selected,
                                   const std::vector<int>& truth) {
  std::vector<int> sel = selected, tru = truth;
  std::sort(sel.begin(), sel.end());
  std::sort(tru.begin(), tru.end());
  std::vector<int> inter;
  std::set_intersection(sel.begin(), sel.end(), tru.begin(), tru.end(),
                        std::back_inserter(inter));
  SelectionMetrics m;
  m.tp = static_cast<int>(inter.size());
  m.fp = static_cast<int>(sel.size()) - m.tp;
  m.fn = static_cast<int>(tru.size()) - m.tp;
  m.sensitivity = tru.empty() ? 1.0 : static_cast<double>(m.tp) / tru.size();
  if (sel.empty()) {
    m.precision = tru.empty() ? 1.0 : 0.0;
  } else {
    m.precision = static_cast<double>(m.tp) / sel.size();
  }
  return m;
}

double theoretical_signal_rho(double rho_block) {
  if (!(rho_block >= 0.0 && rho_block < 1.0))
    throw std::invalid_argument("theoretical_signal_rho: rho must lie in [0,1)");
  return std::abs(1.0 - rho_block) / std::sqrt(11.0 - 10.0 * rho_block);
}

double null_rho_bar(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("null_rho_bar: n must be >= 2");
  return std::sqrt(2.0 / (M_PI * static_cast<double>(n)));
}

double empirical_R(const Eigen::VectorXd& rho, int k0) {
  const Eigen::Index p = rho.size();
  if (k0 < 1 || k0 >= p) throw std::invalid_argument("empirical_R: k0 out of range");
  std::vector<double> sorted(rho.data(), rho.data() + p);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double top = 0.0, rest = 0.0;
  for (int i = 0; i < k0; ++i) top += sorted[i];
  for (Eigen::Index i = k0; i < p; ++i) rest += sorted[i];
  top /= k0;
  rest /= static_cast<double>(p - k0);
  return top / rest;
}

TuningReport visit_budget(double p, double epsilon, double R, double n_iter, double m) {
  TuningReport report;
  report.R = R;
  report.c = (1.0 - epsilon) * R + epsilon;
  report.expected_visits = n_iter * m * report.c / p;
  report.feasible = report.expected_visits >= 1000.0;
  return report;
}

MRecommendation recommend_m(double p, double epsilon, double R, double n_iter,
                            double v_target) {
  const double c = (1.0 - epsilon) * R + epsilon;
  MRecommendation rec;
  const double m_needed = std::ceil(v_target * p / (c * n_iter));
  if (m_needed <= p) {
    rec.m = static_cast<int>(std::max(1.0, m_needed));
    rec.feasible = true;
  } else {
    rec.m = static_cast<int>(p);
    rec.feasible = false;
    rec.required_n_iter = std::ceil(v_target / c);
  }
  return rec;
}

}  // namespace ssgibbs
