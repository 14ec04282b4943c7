#ifndef UGRFS_MLKNN_HPP
#define UGRFS_MLKNN_HPP

#include "ugrfs/types.hpp"

namespace ugrfs {

/// Multi-label k-nearest-neighbour classifier (Bayesian counting of neighbour
/// labels with Laplace smoothing).
struct MlknnModel {
  Index k = 10;
  double s = 1.0;
  VectorXd priors;     // P(H1_j)
  MatrixXd cond_true;  // (k+1) x l, P(count = r | H1_j)
  MatrixXd cond_false; // (k+1) x l, P(count = r | H0_j)
  MatrixXd train_x;
  MatrixXd train_y;
};

struct MlknnPrediction {
  MatrixXd scores;       // posterior P(H1_j | counts)
  MatrixXd bipartition;  // 1 where P(H1) P(E|H1) > P(H0) P(E|H0)
};

MlknnModel mlknn_train(const MatrixXd& x, const MatrixXd& y, Index k = 10, double s = 1.0);
MlknnPrediction mlknn_predict(const MlknnModel& model, const MatrixXd& x);

/// Per-label neighbour label counts: entry (i, j) counts how many of the k
/// nearest training rows to query i carry label j. With `exclude_self`, query i
/// is training row i and skips itself.
MatrixXd neighbor_label_counts(const MatrixXd& train_x, const MatrixXd& train_y, const MatrixXd& query, Index k,
                               bool exclude_self);

}  // namespace ugrfs

#endif  // UGRFS_MLKNN_HPP
