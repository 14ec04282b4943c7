#ifndef UGRFS_CROSS_VALIDATION_HPP
#define UGRFS_CROSS_VALIDATION_HPP

#include "ugrfs/dataset.hpp"
#include "ugrfs/metrics.hpp"
#include "ugrfs/ranking.hpp"
#include "ugrfs/solver.hpp"

#include <vector>

namespace ugrfs {

struct SweepOptions {
  int folds = 5;
  std::vector<double> p_range = percent_range(1, 20);
  Index knn_k = 10;
  double knn_s = 1.0;
  int jobs = 1;

  /// {lo, lo + 1, ..., hi}.
  static std::vector<double> percent_range(int lo, int hi);
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1 denominator)
};

struct SweepSummary {
  MetricSummary ap;
  MetricSummary coverage;
  MetricSummary hamming_loss;
  MetricSummary ranking_loss;
};

struct FoldPercentResult {
  int fold = 0;
  MetricsReport metrics;  // metrics.p_percent holds p
};

/// What one training fold produced.
struct FoldEvaluation {
  FeatureRanking<double> ranking;
  std::vector<MetricsReport> per_percent;
  MetricsReport mean_over_percent;
};

struct SweepResult {
  FoldAssignment assignment;
  std::vector<FoldPercentResult> rows;      // fold-major, then p in p_range order
  std::vector<MetricsReport> fold_means;    // one per fold, averaged over p
  SweepSummary summary;
};

MetricSummary summarize(const std::vector<double>& values);

/// Selected global feature columns of the concatenated views.
MatrixXd select_columns(const MultiViewDataset<double>& ds, const IndexList& global_columns);

/// Scales on the training rows only, fits and ranks on them, then scores every
/// p in p_range with ML-KNN on the held-out rows.
FoldEvaluation evaluate_fold(const MultiViewDataset<double>& ds, const IndexList& train, const IndexList& test,
                             const Hyperparams& hp, const SweepOptions& opt);

/// k-fold protocol: per fold metrics are averaged over p, then mean and sample
/// std are taken across folds.
SweepResult cross_validated_sweep(const MultiViewDataset<double>& ds, const Hyperparams& hp, const SweepOptions& opt);

}  // namespace ugrfs

#endif  // UGRFS_CROSS_VALIDATION_HPP
