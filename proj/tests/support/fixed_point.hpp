#ifndef UGRFS_TESTS_FIXED_POINT_HPP
#define UGRFS_TESTS_FIXED_POINT_HPP

// Integer-valued states whose multiplicative-update numerator and denominator
// coincide exactly. Entries are multiples of 2^8 or 2^10 so every product is
// an exactly representable integer and every denominator exceeds 2^27, where
// adding eps = 1e-8 rounds back to the same double.

#include "ugrfs/graph.hpp"
#include "ugrfs/types.hpp"

namespace ugrfs::fixed_point {

/// m(i, j) = scale * (1 + (i * 3 + j * 5 + salt) % 4)
inline MatrixXd patterned(Index rows, Index cols, double scale, int salt = 0) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * static_cast<double>(1 + (i * 3 + j * 5 + salt) % 4);
  return m;
}

/// W update with delta = 0: Y = X W makes A^T Y equal A^T A W.
struct FeatureWeightCase {
  MatrixXd x = patterned(4, 3, 1024.0, 0);
  MatrixXd w = patterned(3, 2, 1024.0, 1);
  VectorXd c = VectorXd::Ones(4);
  MatrixXd y = x * w;
  VectorXd e = VectorXd::Ones(3);
};

/// C update: C = 1, Y = X W and D = X balance both diagonal terms.
struct ConfidenceCase {
  MatrixXd x = patterned(5, 3, 256.0, 2);
  MatrixXd w = patterned(3, 2, 256.0, 3);
  VectorXd c = VectorXd::Ones(5);
  MatrixXd y = x * w;
  MatrixXd d = x;
  double beta = 1.0;
};

/// W_y update: identical rows of Y_x make S D equal A^Y D; X = Xf = Y_x W_y
/// and C = 1 balance the beta and gamma terms.
struct LabelCoefficientCase {
  MatrixXd yx;
  MatrixXd wy = patterned(5, 3, 256.0, 1);
  GraphPair<double> graph;
  VectorXd c = VectorXd::Ones(4);
  MatrixXd x;
  MatrixXd xf;
  double alpha = 1.0, beta = 1.0, gamma = 1.0;

  LabelCoefficientCase() {
    yx.resize(4, 5);
    for (Index i = 0; i < 4; ++i) yx.row(i) << 256, 512, 768, 256, 1024;
    MatrixXd s = MatrixXd::Ones(4, 4);
    s.diagonal().setZero();
    s(0, 1) = s(1, 0) = 2.0;
    graph = graph_from_affinity<double>(s);
    x = yx * wy;
    xf = x;
  }
};

}  // namespace ugrfs::fixed_point

#endif  // UGRFS_TESTS_FIXED_POINT_HPP
