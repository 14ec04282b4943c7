#ifndef UGRFS_GRAPH_HPP
#define UGRFS_GRAPH_HPP

#include "ugrfs/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ugrfs {

/// Affinity S, degree A = diag(rowsum S) and Laplacian L = A - S over m points.
template <typename Scalar>
struct GraphPair {
  Matrix<Scalar> affinity;
  Vector<Scalar> degree;  // diagonal of A
  Matrix<Scalar> laplacian;
  Scalar sigma{1};
  Index q{0};

  Index size() const { return affinity.rows(); }
};

/// Indices of the q nearest rows to row `i` (self excluded), by exact distance,
/// ties broken by ascending index.
template <typename Scalar>
IndexList nearest_neighbors(const Matrix<Scalar>& sq_dist, Index i, Index q) {
  IndexList candidates;
  candidates.reserve(static_cast<std::size_t>(sq_dist.cols()));
  for (Index j = 0; j < sq_dist.cols(); ++j)
    if (j != i) candidates.push_back(j);
  const auto cut = candidates.begin() + std::min<std::ptrdiff_t>(q, static_cast<std::ptrdiff_t>(candidates.size()));
  std::partial_sort(candidates.begin(), cut, candidates.end(), [&](Index a, Index b) {
    const Scalar da = sq_dist(i, a);
    const Scalar db = sq_dist(i, b);
    return da < db || (da == db && a < b);
  });
  candidates.erase(cut, candidates.end());
  return candidates;
}

/// Builds the degree vector and Laplacian from an affinity matrix.
template <typename Scalar>
GraphPair<Scalar> graph_from_affinity(Matrix<Scalar> affinity, Scalar sigma = Scalar(1), Index q = 0) {
  GraphPair<Scalar> g;
  g.degree = affinity.rowwise().sum();
  g.laplacian = -affinity;
  g.laplacian.diagonal() += g.degree;
  g.affinity = std::move(affinity);
  g.sigma = sigma;
  g.q = q;
  return g;
}

/// Gaussian affinity on the symmetric q-nearest-neighbour graph of the rows of
/// `points`: s_ij = exp(-|x_i - x_j|^2 / sigma^2) when either point is among the
/// other's q nearest neighbours, 0 otherwise. The diagonal is zero.
template <typename Derived>
GraphPair<typename Derived::Scalar> knn_affinity(const Eigen::MatrixBase<Derived>& points, Index q,
                                                 typename Derived::Scalar sigma) {
  using Scalar = typename Derived::Scalar;
  const Index m = points.rows();
  if (m < 2) throw std::invalid_argument("knn_affinity: need at least 2 points");
  if (q < 1 || q >= m)
    throw std::invalid_argument("knn_affinity: q=" + std::to_string(q) + " must satisfy 1 <= q < m=" + std::to_string(m));
  if (!(sigma > Scalar(0))) throw std::invalid_argument("knn_affinity: sigma must be positive");

  const Matrix<Scalar> sq = pairwise_sq_distances(points, points);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> linked =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, m, false);
  for (Index i = 0; i < m; ++i)
    for (Index j : nearest_neighbors(sq, i, q)) {
      linked(i, j) = true;
      linked(j, i) = true;
    }

  const Scalar inv_s2 = Scalar(1) / (sigma * sigma);
  Matrix<Scalar> s = Matrix<Scalar>::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (linked(i, j)) s(i, j) = std::exp(-sq(i, j) * inv_s2);
  return graph_from_affinity<Scalar>(std::move(s), sigma, q);
}

/// Tr(Y^T L Y), the graph smoothness of the columns of Y.
template <typename Scalar, typename Derived>
Scalar smoothness_trace(const GraphPair<Scalar>& graph, const Eigen::MatrixBase<Derived>& y) {
  if (y.rows() != graph.size())
    throw std::invalid_argument("smoothness_trace: Y has " + std::to_string(y.rows()) + " rows, graph has " +
                                std::to_string(graph.size()) + " nodes");
  return (graph.laplacian * y).cwiseProduct(y).sum();
}

}  // namespace ugrfs

#endif  // UGRFS_GRAPH_HPP
