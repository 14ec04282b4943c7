#ifndef UGRFS_TYPES_HPP
#define UGRFS_TYPES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace ugrfs {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;
using IndexList = std::vector<Index>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Rows of `m` listed in `rows`, in that order.
template <typename Derived>
Matrix<typename Derived::Scalar> take_rows(const Eigen::MatrixBase<Derived>& m, const IndexList& rows) {
  Matrix<typename Derived::Scalar> out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

/// Squared Euclidean distances between every pair of rows of `a` and `b`.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> pairwise_sq_distances(const Eigen::MatrixBase<DerivedA>& a,
                                                        const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j) out(i, j) = (a.row(i) - b.row(j)).squaredNorm();
  return out;
}

}  // namespace ugrfs

#endif  // UGRFS_TYPES_HPP
