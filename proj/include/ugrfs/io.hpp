#ifndef UGRFS_IO_HPP
#define UGRFS_IO_HPP

#include "ugrfs/cross_validation.hpp"
#include "ugrfs/dataset.hpp"
#include "ugrfs/fusion.hpp"
#include "ugrfs/graph.hpp"
#include "ugrfs/ranking.hpp"
#include "ugrfs/solver.hpp"

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace ugrfs {

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

void write_matrix_csv(std::ostream& os, const MatrixXd& m);
void write_fold_assignment_csv(std::ostream& os, const FoldAssignment& folds);          // sample_index,fold
void write_graph_triplets_csv(std::ostream& os, const GraphPair<double>& g);            // i,j,s_ij (non-zeros)
void write_view_weights_json(std::ostream& os, const std::vector<std::string>& names,
                             const ViewWeights<double>& w);                             // {name: weight}
void write_trace_csv(std::ostream& os, const ConvergenceTrace<double>& trace);          // iter,objective,rel_change
void write_ranking_csv(std::ostream& os, const FeatureRanking<double>& r);              // rank,global_index,view,...
void write_confidence_csv(std::ostream& os, const std::vector<std::string>& names,
                          const ModelState<double>& s);                                 // sample_index,<view>...
void write_w_row_norms_csv(std::ostream& os, const ModelState<double>& s);              // global_index,view,row_norm
void write_sweep_results_csv(std::ostream& os, const SweepResult& r);                   // fold,p_percent,ap,coverage,hl,rl
void write_sweep_summary_json(std::ostream& os, const SweepSummary& s);                 // {metric: {mean, std}}

/// Opens `path` for writing (creating parent directories) and hands the stream to `fn`.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn);

}  // namespace ugrfs

#endif  // UGRFS_IO_HPP
