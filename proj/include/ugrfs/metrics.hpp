#ifndef UGRFS_METRICS_HPP
#define UGRFS_METRICS_HPP

#include "ugrfs/types.hpp"

namespace ugrfs {

/// Average precision is higher-better; coverage, Hamming loss and ranking loss
/// are lower-better. All lie in [0, 1].
struct MetricsReport {
  double ap = 0.0;
  double coverage = 0.0;  // (max relevant rank - 1) / l
  double hamming_loss = 0.0;
  double ranking_loss = 0.0;
  Index n_eval = 0;       // samples entering the rank-based metrics
  double p_percent = 0.0;
};

/// Rank of every label of one sample, 1 = highest score; tied scores share
/// their average position.
VectorXd label_midranks(const Eigen::Ref<const VectorXd>& scores);

/// Rows whose true labels are all 0 or all 1 are skipped by AP, coverage and
/// ranking loss but still count towards Hamming loss. A score tie between a
/// relevant and an irrelevant label counts as half a mis-ordered pair.
MetricsReport compute_metrics(const MatrixXd& scores, const MatrixXd& bipartition, const MatrixXd& y_true);

}  // namespace ugrfs

#endif  // UGRFS_METRICS_HPP
