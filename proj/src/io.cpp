#include "ugrfs/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace ugrfs {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

nlohmann::ordered_json summary_entry(const MetricSummary& m) {
  nlohmann::ordered_json j;
  j["mean"] = m.mean;
  j["std"] = m.std;
  return j;
}

}  // namespace

void write_matrix_csv(std::ostream& os, const MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << '\n';
  }
}

void write_fold_assignment_csv(std::ostream& os, const FoldAssignment& folds) {
  os << "sample_index,fold\n";
  for (std::size_t i = 0; i < folds.fold_of_sample.size(); ++i) os << i << ',' << folds.fold_of_sample[i] << '\n';
}

void write_graph_triplets_csv(std::ostream& os, const GraphPair<double>& g) {
  os << "i,j,s_ij\n";
  for (Index i = 0; i < g.affinity.rows(); ++i)
    for (Index j = 0; j < g.affinity.cols(); ++j)
      if (g.affinity(i, j) != 0.0) os << i << ',' << j << ',' << format_double(g.affinity(i, j)) << '\n';
}

void write_view_weights_json(std::ostream& os, const std::vector<std::string>& names, const ViewWeights<double>& w) {
  if (static_cast<Index>(names.size()) != w.weights.size())
    throw std::invalid_argument("write_view_weights_json: name count differs from weight count");
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = w.weights(static_cast<Index>(i));
  os << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& os, const ConvergenceTrace<double>& trace) {
  os << "iter,objective,rel_change\n";
  for (std::size_t t = 0; t < trace.objective_values.size(); ++t) {
    os << t << ',' << format_double(trace.objective_values[t]) << ',';
    if (t > 0) os << format_double(trace.rel_changes[t - 1]);
    os << '\n';
  }
}

void write_ranking_csv(std::ostream& os, const FeatureRanking<double>& r) {
  os << "rank,global_index,view,within_view_index,score\n";
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    const Index g = r.order[k];
    const auto gi = static_cast<std::size_t>(g);
    os << k << ',' << g << ',' << r.view_of_feature[gi] << ',' << r.within_view_index[gi] << ','
       << format_double(r.scores(g)) << '\n';
  }
}

void write_confidence_csv(std::ostream& os, const std::vector<std::string>& names, const ModelState<double>& s) {
  os << "sample_index";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  const Index n = s.C_blocks.empty() ? 0 : s.C_blocks.front().size();
  for (Index i = 0; i < n; ++i) {
    os << i;
    for (const auto& c : s.C_blocks) os << ',' << format_double(c(i));
    os << '\n';
  }
}

void write_w_row_norms_csv(std::ostream& os, const ModelState<double>& s) {
  os << "global_index,view,row_norm\n";
  Index g = 0;
  for (std::size_t v = 0; v < s.W_blocks.size(); ++v)
    for (Index j = 0; j < s.W_blocks[v].rows(); ++j, ++g)
      os << g << ',' << v << ',' << format_double(s.W_blocks[v].row(j).norm()) << '\n';
}

void write_sweep_results_csv(std::ostream& os, const SweepResult& r) {
  os << "fold,p_percent,ap,coverage,hl,rl\n";
  for (const auto& row : r.rows) {
    const auto& m = row.metrics;
    os << row.fold << ',' << format_double(m.p_percent) << ',' << format_double(m.ap) << ','
       << format_double(m.coverage) << ',' << format_double(m.hamming_loss) << ',' << format_double(m.ranking_loss)
       << '\n';
  }
}

void write_sweep_summary_json(std::ostream& os, const SweepSummary& s) {
  nlohmann::ordered_json j;
  j["ap"] = summary_entry(s.ap);
  j["coverage"] = summary_entry(s.coverage);
  j["hamming_loss"] = summary_entry(s.hamming_loss);
  j["ranking_loss"] = summary_entry(s.ranking_loss);
  os << j.dump(2) << '\n';
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  fn(os);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace ugrfs
