#ifndef UGRFS_FUSION_HPP
#define UGRFS_FUSION_HPP

#include "ugrfs/dataset.hpp"
#include "ugrfs/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ugrfs {

/// Smallest smoothness trace admitted before inversion.
inline constexpr double kMinViewTrace = 1e-12;

template <typename Scalar>
struct ViewWeights {
  Vector<Scalar> weights;
  Vector<Scalar> traces;
};

template <typename Scalar>
struct FusionMatrix {
  Matrix<Scalar> data;
  IndexList block_offsets;
  ViewWeights<Scalar> weights;

  auto block(Index view, Index width) const { return data.middleCols(block_offsets[static_cast<std::size_t>(view)], width); }
};

/// Normalised inverse traces: v_i = (1/t_i) / sum_j (1/t_j). Traces are floored
/// at kMinViewTrace.
template <typename Scalar>
ViewWeights<Scalar> view_weights_from_traces(const Vector<Scalar>& traces) {
  ViewWeights<Scalar> w;
  w.traces = traces;
  const Vector<Scalar> inv = traces.unaryExpr([](Scalar t) { return Scalar(1) / std::max(t, Scalar(kMinViewTrace)); });
  w.weights = inv / inv.sum();
  return w;
}

template <typename Scalar>
ViewWeights<Scalar> uniform_view_weights(Index num_views) {
  ViewWeights<Scalar> w;
  w.weights = Vector<Scalar>::Constant(num_views, Scalar(1) / Scalar(num_views));
  w.traces = Vector<Scalar>::Zero(num_views);
  return w;
}

/// Weights each view by how smoothly the labels vary over that view's
/// q-NN graph: smoother views (smaller Tr(Y^T L Y)) get larger weights.
template <typename Scalar>
ViewWeights<Scalar> compute_view_weights(const MultiViewDataset<Scalar>& ds, Index q, Scalar sigma) {
  Vector<Scalar> traces(ds.num_views());
  for (Index i = 0; i < ds.num_views(); ++i) {
    const auto graph = knn_affinity(ds.views[static_cast<std::size_t>(i)], q, sigma);
    traces(i) = smoothness_trace(graph, ds.labels);
  }
  return view_weights_from_traces(traces);
}

/// X^f = [v_1 X^(1), ..., v_V X^(V)].
template <typename Scalar>
FusionMatrix<Scalar> build_fusion(const MultiViewDataset<Scalar>& ds, const ViewWeights<Scalar>& w) {
  if (w.weights.size() != ds.num_views())
    throw std::invalid_argument("build_fusion: " + std::to_string(w.weights.size()) + " weights for " +
                                std::to_string(ds.num_views()) + " views");
  FusionMatrix<Scalar> f;
  f.weights = w;
  f.block_offsets = ds.block_offsets();
  f.data.resize(ds.num_samples(), ds.d_total());
  for (Index i = 0; i < ds.num_views(); ++i) {
    const auto& x = ds.views[static_cast<std::size_t>(i)];
    f.data.middleCols(f.block_offsets[static_cast<std::size_t>(i)], x.cols()) = w.weights(i) * x;
  }
  return f;
}

}  // namespace ugrfs

#endif  // UGRFS_FUSION_HPP
