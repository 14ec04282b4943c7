#include "ugrfs/cross_validation.hpp"

#include "ugrfs/mlknn.hpp"
#include "ugrfs/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace ugrfs {

std::vector<double> SweepOptions::percent_range(int lo, int hi) {
  std::vector<double> out;
  for (int p = lo; p <= hi; ++p) out.push_back(static_cast<double>(p));
  return out;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

MatrixXd select_columns(const MultiViewDataset<double>& ds, const IndexList& global_columns) {
  const auto offsets = ds.block_offsets();
  MatrixXd out(ds.num_samples(), static_cast<Index>(global_columns.size()));
  for (std::size_t c = 0; c < global_columns.size(); ++c) {
    const Index g = global_columns[c];
    std::size_t v = 0;
    while (v + 1 < offsets.size() && offsets[v + 1] <= g) ++v;
    const Index local = g - offsets[v];
    if (g < 0 || local >= ds.views[v].cols()) throw std::out_of_range("feature index out of range");
    out.col(static_cast<Index>(c)) = ds.views[v].col(local);
  }
  return out;
}

namespace {

MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
  MetricsReport m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.ap += r.ap;
    m.coverage += r.coverage;
    m.hamming_loss += r.hamming_loss;
    m.ranking_loss += r.ranking_loss;
    m.n_eval = r.n_eval;
  }
  const auto k = static_cast<double>(reports.size());
  m.ap /= k;
  m.coverage /= k;
  m.hamming_loss /= k;
  m.ranking_loss /= k;
  return m;
}

}  // namespace

FoldEvaluation evaluate_fold(const MultiViewDataset<double>& ds, const IndexList& train, const IndexList& test,
                             const Hyperparams& hp, const SweepOptions& opt) {
  if (opt.p_range.empty()) throw std::invalid_argument("p_range must not be empty");
  const auto train_raw = ds.subset(train);
  const auto test_raw = ds.subset(test);
  MinMaxScaler<double> scaler;
  scaler.fit(train_raw);
  const auto train_ds = scaler.transform(train_raw);
  const auto test_ds = scaler.transform(test_raw);

  FoldEvaluation out;
  const auto fitted = fit(train_ds, hp);
  out.ranking = rank_features(fitted.state);

  for (double p : opt.p_range) {
    const IndexList cols = select_top_percent(out.ranking, p);
    const auto model = mlknn_train(select_columns(train_ds, cols), train_ds.labels, opt.knn_k, opt.knn_s);
    const auto pred = mlknn_predict(model, select_columns(test_ds, cols));
    MetricsReport m = compute_metrics(pred.scores, pred.bipartition, test_ds.labels);
    m.p_percent = p;
    out.per_percent.push_back(m);
  }
  out.mean_over_percent = mean_report(out.per_percent);
  return out;
}

SweepResult cross_validated_sweep(const MultiViewDataset<double>& ds, const Hyperparams& hp, const SweepOptions& opt) {
  ds.validate();
  hp.validate();
  SweepResult result;
  result.assignment = kfold_split(ds.num_samples(), opt.folds, hp.seed);

  std::vector<FoldEvaluation> evals(static_cast<std::size_t>(opt.folds));
  parallel_for(evals.size(), opt.jobs, [&](std::size_t f) {
    const int fold = static_cast<int>(f);
    evals[f] = evaluate_fold(ds, result.assignment.train_indices(fold), result.assignment.test_indices(fold), hp, opt);
  });

  std::vector<double> ap, cov, hl, rl;
  for (std::size_t f = 0; f < evals.size(); ++f) {
    for (const auto& m : evals[f].per_percent) result.rows.push_back({static_cast<int>(f), m});
    const auto& mean = evals[f].mean_over_percent;
    result.fold_means.push_back(mean);
    ap.push_back(mean.ap);
    cov.push_back(mean.coverage);
    hl.push_back(mean.hamming_loss);
    rl.push_back(mean.ranking_loss);
  }
  result.summary = {summarize(ap), summarize(cov), summarize(hl), summarize(rl)};
  return result;
}

}  // namespace ugrfs
