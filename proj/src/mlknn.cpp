#include "ugrfs/mlknn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ugrfs {

MatrixXd neighbor_label_counts(const MatrixXd& train_x, const MatrixXd& train_y, const MatrixXd& query, Index k,
                               bool exclude_self) {
  const Index n = train_x.rows();
  MatrixXd counts = MatrixXd::Zero(query.rows(), train_y.cols());
  std::vector<Index> idx;
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < query.rows(); ++i) {
    idx.clear();
    for (Index j = 0; j < n; ++j) {
      if (exclude_self && j == i) continue;
      dist[static_cast<std::size_t>(j)] = (train_x.row(j) - query.row(i)).squaredNorm();
      idx.push_back(j);
    }
    const auto cut = idx.begin() + std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(idx.size()));
    std::partial_sort(idx.begin(), cut, idx.end(), [&](Index a, Index b) {
      const double da = dist[static_cast<std::size_t>(a)];
      const double db = dist[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    });
    for (auto it = idx.begin(); it != cut; ++it) counts.row(i) += train_y.row(*it);
  }
  return counts;
}

MlknnModel mlknn_train(const MatrixXd& x, const MatrixXd& y, Index k, double s) {
  const Index n = x.rows();
  if (y.rows() != n) throw std::invalid_argument("mlknn_train: feature and label row counts differ");
  if (k < 1 || k >= n)
    throw std::invalid_argument("mlknn_train: k=" + std::to_string(k) + " must satisfy 1 <= k < n_train=" +
                                std::to_string(n));
  if (!(s > 0.0)) throw std::invalid_argument("mlknn_train: smoothing s must be positive");

  const Index l = y.cols();
  MlknnModel m;
  m.k = k;
  m.s = s;
  m.train_x = x;
  m.train_y = y;
  m.priors = ((y.colwise().sum().array() + s) / (2.0 * s + static_cast<double>(n))).transpose();

  const MatrixXd counts = neighbor_label_counts(x, y, x, k, true);
  MatrixXd hist_true = MatrixXd::Zero(k + 1, l);
  MatrixXd hist_false = MatrixXd::Zero(k + 1, l);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < l; ++j) {
      const auto r = static_cast<Index>(counts(i, j));
      if (y(i, j) == 1.0)
        hist_true(r, j) += 1.0;
      else
        hist_false(r, j) += 1.0;
    }
  const double kp1 = static_cast<double>(k + 1);
  m.cond_true.resize(k + 1, l);
  m.cond_false.resize(k + 1, l);
  for (Index j = 0; j < l; ++j) {
    const double tot_true = hist_true.col(j).sum();
    const double tot_false = hist_false.col(j).sum();
    m.cond_true.col(j) = (hist_true.col(j).array() + s) / (s * kp1 + tot_true);
    m.cond_false.col(j) = (hist_false.col(j).array() + s) / (s * kp1 + tot_false);
  }
  return m;
}

MlknnPrediction mlknn_predict(const MlknnModel& model, const MatrixXd& x) {
  if (x.cols() != model.train_x.cols())
    throw std::invalid_argument("mlknn_predict: query has " + std::to_string(x.cols()) + " features, model has " +
                                std::to_string(model.train_x.cols()));
  const MatrixXd counts = neighbor_label_counts(model.train_x, model.train_y, x, model.k, false);
  const Index l = model.train_y.cols();
  MlknnPrediction out;
  out.scores.resize(x.rows(), l);
  out.bipartition.resize(x.rows(), l);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < l; ++j) {
      const auto r = static_cast<Index>(counts(i, j));
      const double p1 = model.priors(j) * model.cond_true(r, j);
      const double p0 = (1.0 - model.priors(j)) * model.cond_false(r, j);
      out.scores(i, j) = p1 / (p1 + p0);
      out.bipartition(i, j) = p1 > p0 ? 1.0 : 0.0;
    }
  return out;
}

}  // namespace ugrfs
