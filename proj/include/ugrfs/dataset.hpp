#ifndef UGRFS_DATASET_HPP
#define UGRFS_DATASET_HPP

#include "ugrfs/types.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ugrfs {

/// A set of views over the same n samples plus their binary label matrix.
///
/// View i is an n x d(i) matrix; `labels` is n x l with entries in {0, 1}.
template <typename Scalar>
struct MultiViewDataset {
  std::vector<Matrix<Scalar>> views;
  Matrix<Scalar> labels;
  std::vector<std::string> view_names;

  Index num_samples() const { return labels.rows(); }
  Index num_labels() const { return labels.cols(); }
  Index num_views() const { return static_cast<Index>(views.size()); }
  Index d_total() const {
    Index d = 0;
    for (const auto& v : views) d += v.cols();
    return d;
  }
  /// Column offset of each view inside the horizontally stacked feature space.
  IndexList block_offsets() const {
    IndexList offsets;
    Index at = 0;
    for (const auto& v : views) {
      offsets.push_back(at);
      at += v.cols();
    }
    return offsets;
  }
  /// All views side by side, n x d_total.
  Matrix<Scalar> concatenated() const {
    Matrix<Scalar> out(num_samples(), d_total());
    Index at = 0;
    for (const auto& v : views) {
      out.middleCols(at, v.cols()) = v;
      at += v.cols();
    }
    return out;
  }

  /// Throws std::invalid_argument if any structural invariant is broken.
  void validate() const {
    if (views.empty()) throw std::invalid_argument("dataset has no views");
    if (view_names.size() != views.size()) throw std::invalid_argument("view_names size differs from view count");
    const Index n = labels.rows();
    if (n < 2) throw std::invalid_argument("dataset needs at least 2 samples");
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (views[i].rows() != n)
        throw std::invalid_argument("row-count mismatch: view '" + view_names[i] + "' has " +
                                    std::to_string(views[i].rows()) + " rows, labels have " + std::to_string(n));
      if (views[i].cols() < 1) throw std::invalid_argument("view '" + view_names[i] + "' has no columns");
    }
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < labels.cols(); ++c)
        if (labels(r, c) != Scalar(0) && labels(r, c) != Scalar(1))
          throw std::invalid_argument("non-binary label at row " + std::to_string(r) + ", column " + std::to_string(c));
  }

  /// Sub-dataset restricted to the given sample rows.
  MultiViewDataset subset(const IndexList& rows) const {
    MultiViewDataset out;
    out.view_names = view_names;
    out.labels = take_rows(labels, rows);
    for (const auto& v : views) out.views.push_back(take_rows(v, rows));
    return out;
  }
};

/// Per-column min-max scaling fitted on one sample set and applied to another.
template <typename Scalar>
class MinMaxScaler {
 public:
  void fit(const MultiViewDataset<Scalar>& ds) {
    mins_.clear();
    spans_.clear();
    for (const auto& v : ds.views) {
      Vector<Scalar> lo = v.colwise().minCoeff().transpose();
      Vector<Scalar> hi = v.colwise().maxCoeff().transpose();
      mins_.push_back(lo);
      spans_.push_back(hi - lo);
    }
  }

  /// Constant columns (zero span) map to zero.
  MultiViewDataset<Scalar> transform(const MultiViewDataset<Scalar>& ds) const {
    if (ds.views.size() != mins_.size()) throw std::invalid_argument("scaler fitted on a different view count");
    MultiViewDataset<Scalar> out = ds;
    for (std::size_t i = 0; i < ds.views.size(); ++i) {
      auto& v = out.views[i];
      if (v.cols() != mins_[i].size()) throw std::invalid_argument("scaler fitted on a different view width");
      for (Index c = 0; c < v.cols(); ++c) {
        const Scalar span = spans_[i](c);
        if (span > Scalar(0))
          v.col(c) = (v.col(c).array() - mins_[i](c)) / span;
        else
          v.col(c).setZero();
      }
    }
    return out;
  }

 private:
  std::vector<Vector<Scalar>> mins_;
  std::vector<Vector<Scalar>> spans_;
};

/// Min-max scales every feature column to [0, 1]; labels are left untouched.
template <typename Scalar>
MultiViewDataset<Scalar> normalize_views(const MultiViewDataset<Scalar>& ds) {
  MinMaxScaler<Scalar> scaler;
  scaler.fit(ds);
  return scaler.transform(ds);
}

struct FoldAssignment {
  std::vector<int> fold_of_sample;
  int k = 0;
  std::uint64_t seed = 0;

  IndexList test_indices(int fold) const;
  IndexList train_indices(int fold) const;
};

/// Seeded random permutation dealt round-robin into k folds.
FoldAssignment kfold_split(Index n, int k, std::uint64_t seed);

/// Reads a JSON manifest `{"views": [{"name", "path"}...], "labels": path}`.
/// Relative CSV paths resolve against the manifest's directory.
MultiViewDataset<double> load_dataset(const std::filesystem::path& manifest_path);

/// Headerless comma-separated numeric matrix.
MatrixXd read_csv_matrix(const std::filesystem::path& path);

}  // namespace ugrfs

#endif  // UGRFS_DATASET_HPP
