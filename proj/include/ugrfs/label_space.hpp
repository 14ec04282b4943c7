#ifndef UGRFS_LABEL_SPACE_HPP
#define UGRFS_LABEL_SPACE_HPP

#include "ugrfs/graph.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ugrfs {

/// Gaussian lifting of the label rows. `augmented` is [rho, 1], n x (n+1); its
/// trailing ones column carries the bias of the global-view map.
template <typename Scalar>
struct LabelKernel {
  Matrix<Scalar> rho;
  Scalar avg_pdist{1};
  Matrix<Scalar> augmented;

  Index num_samples() const { return rho.rows(); }
};

template <typename Scalar>
struct GlobalDistribution {
  Matrix<Scalar> D;
  IndexList block_offsets;

  auto block(Index view, Index width) const { return D.middleCols(block_offsets[static_cast<std::size_t>(view)], width); }
};

/// rho_ij = exp(-|y_i - y_j|^2 / avg^2), avg being the mean Euclidean distance
/// over distinct unordered pairs (1 if every pair coincides).
template <typename Derived>
LabelKernel<typename Derived::Scalar> label_kernel(const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  const Index n = y.rows();
  if (n < 2) throw std::invalid_argument("label_kernel: need at least 2 samples");

  const Matrix<Scalar> sq = pairwise_sq_distances(y, y);
  Scalar dist_sum(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) dist_sum += std::sqrt(sq(i, j));
  const Scalar pairs = Scalar(n) * Scalar(n - 1) / Scalar(2);
  Scalar avg = dist_sum / pairs;
  if (!(avg > Scalar(0))) avg = Scalar(1);

  LabelKernel<Scalar> k;
  k.avg_pdist = avg;
  k.rho = (-sq.array() / (avg * avg)).exp().matrix();
  k.augmented.resize(n, n + 1);
  k.augmented.leftCols(n) = k.rho;
  k.augmented.col(n).setOnes();
  return k;
}

/// D^(i) = Y_x W_y^(i), concatenated in view order.
template <typename Scalar>
GlobalDistribution<Scalar> global_distribution(const LabelKernel<Scalar>& kernel,
                                               const std::vector<Matrix<Scalar>>& wy_blocks) {
  const Index n = kernel.num_samples();
  GlobalDistribution<Scalar> g;
  Index width = 0;
  for (const auto& b : wy_blocks) {
    if (b.rows() != n + 1)
      throw std::invalid_argument("global_distribution: W_y block has " + std::to_string(b.rows()) +
                                  " rows, expected " + std::to_string(n + 1));
    g.block_offsets.push_back(width);
    width += b.cols();
  }
  g.D.resize(n, width);
  for (std::size_t i = 0; i < wy_blocks.size(); ++i)
    g.D.middleCols(g.block_offsets[i], wy_blocks[i].cols()).noalias() = kernel.augmented * wy_blocks[i];
  return g;
}

/// The label graph L^Y: same construction as the feature graphs, on label rows.
template <typename Derived>
GraphPair<typename Derived::Scalar> label_laplacian(const Eigen::MatrixBase<Derived>& y, Index q,
                                                    typename Derived::Scalar sigma) {
  return knn_affinity(y, q, sigma);
}

}  // namespace ugrfs

#endif  // UGRFS_LABEL_SPACE_HPP
