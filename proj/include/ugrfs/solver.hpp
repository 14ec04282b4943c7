#ifndef UGRFS_SOLVER_HPP
#define UGRFS_SOLVER_HPP

#include "ugrfs/dataset.hpp"
#include "ugrfs/fusion.hpp"
#include "ugrfs/graph.hpp"
#include "ugrfs/label_space.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ugrfs {

enum class Ablation {
  Full,
  NoConfidence,        // v1: C pinned to ones
  UniformViewWeights,  // v2: v_i = 1/V
  NoReconstruction,    // v3: alpha = beta = gamma = 0, W_y frozen
};

inline std::string to_string(Ablation a) {
  switch (a) {
    case Ablation::NoConfidence: return "v1";
    case Ablation::UniformViewWeights: return "v2";
    case Ablation::NoReconstruction: return "v3";
    case Ablation::Full: break;
  }
  return "full";
}

/// Accepts "full", "v1", "v2", "v3" and the long names.
inline Ablation parse_ablation(const std::string& s) {
  if (s == "full") return Ablation::Full;
  if (s == "v1" || s == "v1_no_confidence") return Ablation::NoConfidence;
  if (s == "v2" || s == "v2_uniform_view_weights") return Ablation::UniformViewWeights;
  if (s == "v3" || s == "v3_no_reconstruction") return Ablation::NoReconstruction;
  throw std::invalid_argument("ablation: unknown variant '" + s + "' (expected full, v1, v2 or v3)");
}

struct Hyperparams {
  double alpha = 1.0;  // label-graph smoothness of D
  double beta = 1.0;   // D^(i) vs diag(C^(i)) X^(i)
  double gamma = 1.0;  // D vs fusion matrix
  double delta = 1.0;  // l2,1 sparsity of W
  Index q = 5;
  double sigma = 1.0;
  double tol = 1e-3;
  int max_iters = 100;
  std::uint64_t seed = 42;
  Ablation ablation = Ablation::Full;
  double epsilon = 1e-8;  // added to every multiplicative-update denominator and to e_ii

  void validate() const {
    auto require = [](bool ok, const char* field, const std::string& what) {
      if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
    };
    require(alpha >= 0 && std::isfinite(alpha), "alpha", "must be a finite non-negative number");
    require(beta >= 0 && std::isfinite(beta), "beta", "must be a finite non-negative number");
    require(gamma >= 0 && std::isfinite(gamma), "gamma", "must be a finite non-negative number");
    require(delta >= 0 && std::isfinite(delta), "delta", "must be a finite non-negative number");
    require(q >= 1, "q", "must be at least 1");
    require(sigma > 0, "sigma", "must be positive");
    require(tol > 0, "tol", "must be positive");
    require(max_iters >= 1, "max_iters", "must be at least 1");
    require(epsilon > 0, "epsilon", "must be positive");
  }

  /// Trade-offs actually used by the optimiser once the ablation is applied.
  Hyperparams effective() const {
    Hyperparams h = *this;
    if (ablation == Ablation::NoReconstruction) h.alpha = h.beta = h.gamma = 0.0;
    return h;
  }
};

template <typename Scalar>
struct ModelState {
  std::vector<Matrix<Scalar>> W_blocks;   // d(i) x l
  std::vector<Vector<Scalar>> C_blocks;   // n
  std::vector<Matrix<Scalar>> Wy_blocks;  // (n+1) x d(i)
  Vector<Scalar> E;                       // diagonal of E, d_total
  int iteration = 0;

  Index num_views() const { return static_cast<Index>(W_blocks.size()); }
};

template <typename Scalar>
struct ConvergenceTrace {
  std::vector<Scalar> objective_values;  // z^0 (initial state), z^1, ...
  std::vector<Scalar> rel_changes;       // (z^{t-1} - z^t) / z^{t-1}, t >= 1
  bool converged = false;
  int iterations_run = 0;
};

template <typename Scalar>
struct ObjectiveTerms {
  Scalar loss{0};            // sum_i |diag(C) X W - Y|^2
  Scalar label_graph{0};     // Tr(D^T L^Y D)
  Scalar penalty{0};         // sum_i |D^(i) - diag(C) X|^2
  Scalar reconstruction{0};  // |D - X^f|^2
  Scalar sparsity{0};        // |W|_{2,1}
  Scalar total{0};
};

/// Row-stacks the per-view weight blocks into the d_total x l matrix W.
template <typename Scalar>
Matrix<Scalar> stack_blocks(const std::vector<Matrix<Scalar>>& blocks) {
  Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix<Scalar> out(rows, blocks.empty() ? 0 : blocks.front().cols());
  Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

template <typename Derived>
typename Derived::Scalar l21_norm(const Eigen::MatrixBase<Derived>& w) {
  return w.rowwise().norm().sum();
}

/// e_ii = 1 / (2 |w_i| + eps), the reweighting that turns |W|_{2,1} into
/// 2 Tr(W^T E W) at the current W.
template <typename Derived>
Vector<typename Derived::Scalar> sparsity_diagonal(const Eigen::MatrixBase<Derived>& w, double epsilon = 1e-8) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(2) * (w.rowwise().norm().array() + Scalar(epsilon))).inverse().matrix();
}

/// W <- W o (A^T Y) / (A^T A W + 2 delta E W + eps), with A = diag(C) X.
template <typename Scalar>
Matrix<Scalar> update_feature_weights(const Matrix<Scalar>& w, const Matrix<Scalar>& x, const Vector<Scalar>& c,
                                      const Matrix<Scalar>& y, const Vector<Scalar>& e_block, double delta,
                                      double epsilon) {
  const Matrix<Scalar> a = c.asDiagonal() * x;
  const Matrix<Scalar> numer = a.transpose() * y;
  Matrix<Scalar> denom = a.transpose() * (a * w);
  if (delta != 0.0) denom += Scalar(2 * delta) * (e_block.asDiagonal() * w);
  return w.cwiseProduct(numer).cwiseQuotient((denom.array() + Scalar(epsilon)).matrix());
}

/// Diagonal-only multiplicative step on the sample confidences:
///   numer_m = y_m . (XW)_m + beta D_m . x_m
///   denom_m = c_m |(XW)_m|^2 + beta c_m |x_m|^2 + eps
template <typename Scalar>
Vector<Scalar> update_confidence(const Vector<Scalar>& c, const Matrix<Scalar>& x, const Matrix<Scalar>& w,
                                 const Matrix<Scalar>& y, const Matrix<Scalar>& d_block, double beta,
                                 double epsilon) {
  const Matrix<Scalar> xw = x * w;
  Vector<Scalar> numer = xw.cwiseProduct(y).rowwise().sum();
  Vector<Scalar> denom = c.cwiseProduct(xw.rowwise().squaredNorm());
  if (beta != 0.0) {
    numer += Scalar(beta) * d_block.cwiseProduct(x).rowwise().sum();
    denom += Scalar(beta) * c.cwiseProduct(x.rowwise().squaredNorm());
  }
  return c.cwiseProduct(numer).cwiseQuotient((denom.array() + Scalar(epsilon)).matrix());
}

/// W_y <- W_y o (a Yx^T S D + b Yx^T A + g Yx^T Xf) / (a Yx^T A^Y D + (b+g) Yx^T D + eps),
/// with D = Yx W_y and A = diag(C) X. Frozen when a = b = g = 0.
template <typename Scalar>
Matrix<Scalar> update_label_coefficients(const Matrix<Scalar>& wy, const Matrix<Scalar>& yx,
                                         const GraphPair<Scalar>& label_graph, const Matrix<Scalar>& x,
                                         const Vector<Scalar>& c, const Matrix<Scalar>& xf_block, double alpha,
                                         double beta, double gamma, double epsilon) {
  if (alpha == 0.0 && beta == 0.0 && gamma == 0.0) return wy;
  const Matrix<Scalar> d = yx * wy;
  Matrix<Scalar> pos = Matrix<Scalar>::Zero(d.rows(), d.cols());  // right factor of the numerator
  Matrix<Scalar> neg = Scalar(beta + gamma) * d;                  // right factor of the denominator
  if (alpha != 0.0) {
    pos.noalias() += Scalar(alpha) * (label_graph.affinity * d);
    neg += Scalar(alpha) * (label_graph.degree.asDiagonal() * d);
  }
  if (beta != 0.0) pos += Scalar(beta) * (c.asDiagonal() * x);
  if (gamma != 0.0) pos += Scalar(gamma) * xf_block;
  const Matrix<Scalar> numer = yx.transpose() * pos;
  const Matrix<Scalar> denom = yx.transpose() * neg;
  return wy.cwiseProduct(numer).cwiseQuotient((denom.array() + Scalar(epsilon)).matrix());
}

/// Everything a fit needs that stays fixed across iterations.
template <typename Scalar>
struct Problem {
  const MultiViewDataset<Scalar>* data = nullptr;
  Hyperparams hp;  // effective trade-offs (ablation applied)
  FusionMatrix<Scalar> fusion;
  LabelKernel<Scalar> kernel;
  GraphPair<Scalar> label_graph;

  const MultiViewDataset<Scalar>& ds() const { return *data; }
  const Matrix<Scalar>& view(Index i) const { return data->views[static_cast<std::size_t>(i)]; }
  auto fusion_block(Index i) const { return fusion.block(i, view(i).cols()); }
};

template <typename Scalar>
Problem<Scalar> prepare_problem(const MultiViewDataset<Scalar>& ds, const Hyperparams& hp) {
  hp.validate();
  ds.validate();
  Problem<Scalar> p;
  p.data = &ds;
  p.hp = hp.effective();
  const auto weights = hp.ablation == Ablation::UniformViewWeights
                           ? uniform_view_weights<Scalar>(ds.num_views())
                           : compute_view_weights(ds, hp.q, Scalar(hp.sigma));
  p.fusion = build_fusion(ds, weights);
  p.kernel = label_kernel(ds.labels);
  p.label_graph = label_laplacian(ds.labels, hp.q, Scalar(hp.sigma));
  return p;
}

/// W and W_y seeded-uniform in (0, 1), C all ones, E from the stacked W.
template <typename Scalar>
ModelState<Scalar> init_state(const MultiViewDataset<Scalar>& ds, Index num_labels, const Hyperparams& hp) {
  std::mt19937_64 rng(hp.seed);
  std::uniform_real_distribution<double> unit(std::nextafter(0.0, 1.0), 1.0);
  auto fill = [&](Index rows, Index cols) {
    Matrix<Scalar> m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = Scalar(unit(rng));
    return m;
  };
  const Index n = ds.num_samples();
  ModelState<Scalar> s;
  for (const auto& x : ds.views) s.W_blocks.push_back(fill(x.cols(), num_labels));
  for (const auto& x : ds.views) s.Wy_blocks.push_back(fill(n + 1, x.cols()));
  for (Index i = 0; i < ds.num_views(); ++i) s.C_blocks.push_back(Vector<Scalar>::Ones(n));
  s.E = sparsity_diagonal(stack_blocks(s.W_blocks), hp.epsilon);
  return s;
}

template <typename Scalar>
ObjectiveTerms<Scalar> objective_terms(const Problem<Scalar>& p, const ModelState<Scalar>& s) {
  const auto& ds = p.ds();
  const auto& hp = p.hp;
  ObjectiveTerms<Scalar> t;
  const bool needs_d = hp.alpha != 0.0 || hp.beta != 0.0 || hp.gamma != 0.0;
  Matrix<Scalar> d;
  if (needs_d) d = global_distribution(p.kernel, s.Wy_blocks).D;

  Index at = 0;
  for (Index i = 0; i < ds.num_views(); ++i) {
    const auto& x = p.view(i);
    const Matrix<Scalar> a = s.C_blocks[static_cast<std::size_t>(i)].asDiagonal() * x;
    t.loss += (a * s.W_blocks[static_cast<std::size_t>(i)] - ds.labels).squaredNorm();
    if (hp.beta != 0.0) t.penalty += (d.middleCols(at, x.cols()) - a).squaredNorm();
    at += x.cols();
  }
  if (hp.alpha != 0.0) t.label_graph = (p.label_graph.laplacian * d).cwiseProduct(d).sum();
  if (hp.gamma != 0.0) t.reconstruction = (d - p.fusion.data).squaredNorm();
  if (hp.delta != 0.0) t.sparsity = l21_norm(stack_blocks(s.W_blocks));
  t.total = t.loss + Scalar(hp.alpha) * t.label_graph + Scalar(hp.beta) * t.penalty +
            Scalar(hp.gamma) * t.reconstruction + Scalar(hp.delta) * t.sparsity;
  return t;
}

/// Value of the joint objective at state `s`.
template <typename Scalar>
Scalar evaluate_objective(const Problem<Scalar>& p, const ModelState<Scalar>& s) {
  return objective_terms(p, s).total;
}

/// One sweep of the W, C and W_y updates, in that order. E is refreshed from the
/// current W right before the W step.
template <typename Scalar>
void update_sweep(const Problem<Scalar>& p, ModelState<Scalar>& s) {
  const auto& ds = p.ds();
  const auto& hp = p.hp;
  const auto offsets = ds.block_offsets();
  const auto nv = static_cast<std::size_t>(ds.num_views());

  s.E = sparsity_diagonal(stack_blocks(s.W_blocks), hp.epsilon);
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& x = ds.views[i];
    s.W_blocks[i] = update_feature_weights<Scalar>(s.W_blocks[i], x, s.C_blocks[i], ds.labels,
                                                   s.E.segment(offsets[i], x.cols()), hp.delta, hp.epsilon);
  }

  if (hp.ablation != Ablation::NoConfidence) {
    for (std::size_t i = 0; i < nv; ++i) {
      Matrix<Scalar> d_block;
      if (hp.beta != 0.0) d_block = p.kernel.augmented * s.Wy_blocks[i];
      s.C_blocks[i] = update_confidence<Scalar>(s.C_blocks[i], ds.views[i], s.W_blocks[i], ds.labels, d_block,
                                                hp.beta, hp.epsilon);
    }
  }

  if (hp.ablation != Ablation::NoReconstruction) {
    for (std::size_t i = 0; i < nv; ++i) {
      const auto& x = ds.views[i];
      s.Wy_blocks[i] = update_label_coefficients<Scalar>(s.Wy_blocks[i], p.kernel.augmented, p.label_graph, x,
                                                         s.C_blocks[i], p.fusion_block(static_cast<Index>(i)),
                                                         hp.alpha, hp.beta, hp.gamma, hp.epsilon);
    }
  }
  ++s.iteration;
}

template <typename Scalar>
struct FitResult {
  ModelState<Scalar> state;
  ConvergenceTrace<Scalar> trace;
  ViewWeights<Scalar> view_weights;
};

/// Called after every sweep with the freshly updated state.
template <typename Scalar>
using FitObserver = std::function<void(const ModelState<Scalar>&)>;

/// Runs sweeps until |(z^{t-1} - z^t) / z^{t-1}| < tol or max_iters is reached.
template <typename Scalar>
FitResult<Scalar> fit(const Problem<Scalar>& p, ModelState<Scalar> state, const FitObserver<Scalar>& observer = {}) {
  const auto& hp = p.hp;
  FitResult<Scalar> r;
  r.view_weights = p.fusion.weights;
  auto& trace = r.trace;

  auto checked_objective = [&](int iter) {
    const Scalar z = evaluate_objective(p, state);
    if (!std::isfinite(static_cast<double>(z)))
      throw std::runtime_error("objective became non-finite at iteration " + std::to_string(iter));
    return z;
  };

  trace.objective_values.push_back(checked_objective(0));
  for (int t = 1; t <= hp.max_iters; ++t) {
    update_sweep(p, state);
    if (observer) observer(state);
    const Scalar z = checked_objective(t);
    const Scalar prev = trace.objective_values.back();
    const Scalar rel = prev != Scalar(0) ? (prev - z) / prev : Scalar(0);
    trace.objective_values.push_back(z);
    trace.rel_changes.push_back(rel);
    trace.iterations_run = t;
    if (std::abs(rel) < Scalar(hp.tol)) {
      trace.converged = true;
      break;
    }
  }
  state.E = sparsity_diagonal(stack_blocks(state.W_blocks), hp.epsilon);
  r.state = std::move(state);
  return r;
}

/// Full pipeline on a normalised dataset: view weights, fusion, label kernel
/// and graph, initialisation, then sweeps to convergence.
template <typename Scalar>
FitResult<Scalar> fit(const MultiViewDataset<Scalar>& ds, const Hyperparams& hp,
                      const FitObserver<Scalar>& observer = {}) {
  const Problem<Scalar> p = prepare_problem(ds, hp);
  return fit(p, init_state(ds, ds.num_labels(), hp), observer);
}

}  // namespace ugrfs

#endif  // UGRFS_SOLVER_HPP
