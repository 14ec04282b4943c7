#include "ugrfs/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace ugrfs {

VectorXd label_midranks(const Eigen::Ref<const VectorXd>& scores) {
  const Index l = scores.size();
  VectorXd rank(l);
  for (Index j = 0; j < l; ++j) {
    Index greater = 0;
    Index tied = 0;
    for (Index k = 0; k < l; ++k) {
      if (k == j) continue;
      if (scores(k) > scores(j)) ++greater;
      else if (scores(k) == scores(j)) ++tied;
    }
    rank(j) = 1.0 + static_cast<double>(greater) + 0.5 * static_cast<double>(tied);
  }
  return rank;
}

MetricsReport compute_metrics(const MatrixXd& scores, const MatrixXd& bipartition, const MatrixXd& y_true) {
  if (scores.rows() != y_true.rows() || scores.cols() != y_true.cols() || bipartition.rows() != y_true.rows() ||
      bipartition.cols() != y_true.cols())
    throw std::invalid_argument("compute_metrics: scores, bipartition and labels must share a shape");

  const Index n = y_true.rows();
  const Index l = y_true.cols();
  MetricsReport m;
  if (n == 0 || l == 0) return m;

  Index mismatches = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < l; ++j)
      if ((bipartition(i, j) != 0.0) != (y_true(i, j) != 0.0)) ++mismatches;
  m.hamming_loss = static_cast<double>(mismatches) / static_cast<double>(n * l);

  double ap_sum = 0.0;
  double cov_sum = 0.0;
  double rl_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Index relevant = static_cast<Index>((y_true.row(i).array() != 0.0).count());
    if (relevant == 0 || relevant == l) continue;
    ++m.n_eval;
    const VectorXd s = scores.row(i).transpose();
    const VectorXd rank = label_midranks(s);
    // Midrank of each relevant label among the relevant labels alone, so a
    // block of tied relevant labels at the top scores precision 1.
    VectorXd relevant_rank = VectorXd::Zero(l);
    {
      VectorXd rel_scores(relevant);
      IndexList rel_index;
      for (Index j = 0; j < l; ++j)
        if (y_true(i, j) != 0.0) {
          rel_scores(static_cast<Index>(rel_index.size())) = s(j);
          rel_index.push_back(j);
        }
      const VectorXd r = label_midranks(rel_scores);
      for (std::size_t k = 0; k < rel_index.size(); ++k) relevant_rank(rel_index[k]) = r(static_cast<Index>(k));
    }

    double precision_sum = 0.0;
    double max_rank = 0.0;
    for (Index j = 0; j < l; ++j) {
      if (y_true(i, j) == 0.0) continue;
      precision_sum += relevant_rank(j) / rank(j);
      max_rank = std::max(max_rank, rank(j));
    }
    ap_sum += precision_sum / static_cast<double>(relevant);
    cov_sum += (max_rank - 1.0) / static_cast<double>(l);

    double misordered = 0.0;
    for (Index j = 0; j < l; ++j) {
      if (y_true(i, j) == 0.0) continue;
      for (Index k = 0; k < l; ++k) {
        if (y_true(i, k) != 0.0) continue;
        if (s(j) < s(k)) misordered += 1.0;
        else if (s(j) == s(k)) misordered += 0.5;
      }
    }
    rl_sum += misordered / static_cast<double>(relevant * (l - relevant));
  }
  if (m.n_eval > 0) {
    const auto ne = static_cast<double>(m.n_eval);
    m.ap = ap_sum / ne;
    m.coverage = cov_sum / ne;
    m.ranking_loss = rl_sum / ne;
  }
  return m;
}

}  // namespace ugrfs
