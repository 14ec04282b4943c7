#ifndef UGRFS_RANKING_HPP
#define UGRFS_RANKING_HPP

#include "ugrfs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ugrfs {

template <typename Scalar>
struct FeatureRanking {
  IndexList order;                 // global feature indices, best first
  Vector<Scalar> scores;           // row norm of the stacked W, by global index
  IndexList view_of_feature;       // global index -> view
  IndexList within_view_index;     // global index -> column inside its view

  Index size() const { return scores.size(); }
};

/// Orders features by descending l2 norm of their row in the stacked W; equal
/// scores keep ascending index order.
template <typename Scalar>
FeatureRanking<Scalar> rank_features(const std::vector<Matrix<Scalar>>& w_blocks) {
  FeatureRanking<Scalar> r;
  r.scores = stack_blocks(w_blocks).rowwise().norm();
  for (std::size_t v = 0; v < w_blocks.size(); ++v)
    for (Index j = 0; j < w_blocks[v].rows(); ++j) {
      r.view_of_feature.push_back(static_cast<Index>(v));
      r.within_view_index.push_back(j);
    }
  r.order.resize(static_cast<std::size_t>(r.scores.size()));
  std::iota(r.order.begin(), r.order.end(), Index{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&](Index a, Index b) { return r.scores(a) > r.scores(b); });
  return r;
}

template <typename Scalar>
FeatureRanking<Scalar> rank_features(const ModelState<Scalar>& state) {
  return rank_features(state.W_blocks);
}

/// Number of features kept at p percent of d: max(1, floor(p d / 100)).
inline Index top_percent_count(Index d_total, double p) {
  if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentage must lie in (0, 100]");
  const auto k = static_cast<Index>(std::floor(p * static_cast<double>(d_total) / 100.0));
  return std::clamp<Index>(k, 1, d_total);
}

/// The first max(1, floor(p d / 100)) indices of the ranking.
template <typename Scalar>
IndexList select_top_percent(const FeatureRanking<Scalar>& r, double p) {
  const Index k = top_percent_count(r.size(), p);
  return IndexList(r.order.begin(), r.order.begin() + k);
}

}  // namespace ugrfs

#endif  // UGRFS_RANKING_HPP
