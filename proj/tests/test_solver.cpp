#include "ugrfs/solver.hpp"

#include "support/fixed_point.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ugrfs;

namespace {

bool all_nonnegative(const ModelState<double>& s) {
  for (const auto& w : s.W_blocks)
    if ((w.array() < 0.0).any()) return false;
  for (const auto& c : s.C_blocks)
    if ((c.array() < 0.0).any()) return false;
  for (const auto& wy : s.Wy_blocks)
    if ((wy.array() < 0.0).any()) return false;
  return true;
}

bool all_finite(const ModelState<double>& s) {
  for (const auto& w : s.W_blocks)
    if (!w.allFinite()) return false;
  for (const auto& c : s.C_blocks)
    if (!c.allFinite()) return false;
  for (const auto& wy : s.Wy_blocks)
    if (!wy.allFinite()) return false;
  return true;
}

/// Each objective term from explicit loops.
double objective_oracle(const Problem<double>& p, const ModelState<double>& s) {
  const auto& ds = p.ds();
  const Index n = ds.num_samples();
  const auto& yx = p.kernel.augmented;
  MatrixXd d(n, ds.d_total());
  Index at = 0;
  double loss = 0.0, penalty = 0.0;
  for (std::size_t v = 0; v < ds.views.size(); ++v) {
    const auto& x = ds.views[v];
    const auto& w = s.W_blocks[v];
    const auto& wy = s.Wy_blocks[v];
    const auto& c = s.C_blocks[v];
    for (Index r = 0; r < n; ++r)
      for (Index k = 0; k < x.cols(); ++k) {
        double acc = 0.0;
        for (Index m = 0; m < yx.cols(); ++m) acc += yx(r, m) * wy(m, k);
        d(r, at + k) = acc;
        penalty += (acc - c(r) * x(r, k)) * (acc - c(r) * x(r, k));
      }
    for (Index r = 0; r < n; ++r)
      for (Index j = 0; j < ds.num_labels(); ++j) {
        double acc = 0.0;
        for (Index k = 0; k < x.cols(); ++k) acc += c(r) * x(r, k) * w(k, j);
        loss += (acc - ds.labels(r, j)) * (acc - ds.labels(r, j));
      }
    at += x.cols();
  }
  const double graph = oracle::smoothness_double_sum(p.label_graph.affinity, d);
  const double recon = oracle::frob_sq(d - p.fusion.data);
  double l21 = 0.0;
  for (const auto& w : s.W_blocks)
    for (Index r = 0; r < w.rows(); ++r) {
      double sq = 0.0;
      for (Index j = 0; j < w.cols(); ++j) sq += w(r, j) * w(r, j);
      l21 += std::sqrt(sq);
    }
  const auto& hp = p.hp;
  return loss + hp.alpha * graph + hp.beta * penalty + hp.gamma * recon + hp.delta * l21;
}

}  // namespace

TEST(Hyperparams, Validation) {
  Hyperparams hp;
  EXPECT_NO_THROW(hp.validate());
  hp.alpha = -1;
  EXPECT_THROW(hp.validate(), std::invalid_argument);
  hp = {};
  hp.tol = 0;
  EXPECT_THROW(hp.validate(), std::invalid_argument);
  hp = {};
  hp.max_iters = 0;
  EXPECT_THROW(hp.validate(), std::invalid_argument);
  EXPECT_EQ(parse_ablation("v2"), Ablation::UniformViewWeights);
  EXPECT_EQ(to_string(Ablation::NoReconstruction), "v3");
  EXPECT_THROW(parse_ablation("v4"), std::invalid_argument);
}

TEST(InitState, ShapesRangesAndDeterminism) {
  const auto ds = synth::suite_instance(3);
  Hyperparams hp;
  hp.seed = 7;
  const auto s = init_state(ds, ds.num_labels(), hp);
  ASSERT_EQ(s.W_blocks.size(), 2u);
  for (std::size_t v = 0; v < 2; ++v) {
    EXPECT_EQ(s.W_blocks[v].rows(), ds.views[v].cols());
    EXPECT_EQ(s.W_blocks[v].cols(), ds.num_labels());
    EXPECT_EQ(s.Wy_blocks[v].rows(), ds.num_samples() + 1);
    EXPECT_EQ(s.Wy_blocks[v].cols(), ds.views[v].cols());
    EXPECT_EQ(s.C_blocks[v], VectorXd::Ones(ds.num_samples()));
    EXPECT_GT(s.W_blocks[v].minCoeff(), 0.0);
    EXPECT_LT(s.W_blocks[v].maxCoeff(), 1.0);
    EXPECT_GT(s.Wy_blocks[v].minCoeff(), 0.0);
  }
  EXPECT_GT(s.E.minCoeff(), 0.0);
  const auto again = init_state(ds, ds.num_labels(), hp);
  for (std::size_t v = 0; v < 2; ++v) {
    EXPECT_EQ(again.W_blocks[v], s.W_blocks[v]);
    EXPECT_EQ(again.Wy_blocks[v], s.Wy_blocks[v]);
  }
}

TEST(SparsityDiagonal, Examples) {
  MatrixXd w(3, 2);
  w << 0.3, 0.4,  // norm 0.5
       0, 0,
       3, 4;
  const VectorXd e = sparsity_diagonal(w);
  EXPECT_NEAR(e(0), 1.0, 1e-7);
  EXPECT_DOUBLE_EQ(e(1), 5e7);
  EXPECT_NEAR(e(2), 0.1, 1e-9);
}

TEST(SparsityDiagonal, RelaxationIdentity) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const MatrixXd w = synth::uniform_matrix(rng, 5 + t % 20, 1 + t % 6, 0.05, 2.0);
    const VectorXd e = sparsity_diagonal(w);
    const double l21 = l21_norm(w);
    const double relaxed = 2.0 * (w.transpose() * e.asDiagonal() * w).trace();
    EXPECT_LE(std::abs(l21 - relaxed) / l21, 1e-6);
  }
}

TEST(EvaluateObjective, ZeroStateLeavesLabelsAndFusion) {
  const auto ds = synth::suite_instance(11);
  Hyperparams hp;
  hp.gamma = 2.5;
  const auto p = prepare_problem(ds, hp);
  auto s = init_state(ds, ds.num_labels(), hp);
  for (auto& w : s.W_blocks) w.setZero();
  for (auto& c : s.C_blocks) c.setZero();
  for (auto& wy : s.Wy_blocks) wy.setZero();
  const double expected = ds.labels.squaredNorm() * static_cast<double>(ds.num_views()) +
                          hp.gamma * p.fusion.data.squaredNorm();
  EXPECT_NEAR(evaluate_objective(p, s), expected, 1e-10 * expected);
}

TEST(EvaluateObjective, TermIsolation) {
  const auto ds = synth::suite_instance(12);
  Hyperparams hp;
  hp.alpha = hp.beta = hp.gamma = hp.delta = 0.0;
  const auto p = prepare_problem(ds, hp);
  const auto s = init_state(ds, ds.num_labels(), hp);
  double expected = 0.0;
  for (std::size_t v = 0; v < ds.views.size(); ++v) expected += (ds.views[v] * s.W_blocks[v] - ds.labels).squaredNorm();
  EXPECT_NEAR(evaluate_objective(p, s), expected, 1e-10 * expected);
}

TEST(EvaluateObjective, MatchesTermOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = synth::suite_instance(100 + seed);
    Hyperparams hp;
    hp.alpha = 0.3;
    hp.beta = 1.7;
    hp.gamma = 0.01;
    hp.delta = 5.0;
    hp.seed = seed;
    const auto p = prepare_problem(ds, hp);
    auto s = init_state(ds, ds.num_labels(), hp);
    std::mt19937_64 rng(seed);
    for (auto& c : s.C_blocks) c = synth::uniform_matrix(rng, c.size(), 1, 0.2, 1.5);
    const double got = evaluate_objective(p, s);
    const double want = objective_oracle(p, s);
    EXPECT_NEAR(got, want, 1e-10 * want);
  }
}

TEST(UpdateFeatureWeights, FixedPointIsIdentity) {
  fixed_point::FeatureWeightCase fc;
  const MatrixXd out = update_feature_weights<double>(fc.w, fc.x, fc.c, fc.y, fc.e, 0.0, 1e-8);
  EXPECT_EQ(out, fc.w);
}

TEST(UpdateFeatureWeights, ZeroIsAbsorbing) {
  std::mt19937_64 rng(1);
  const MatrixXd x = synth::uniform_matrix(rng, 6, 4);
  const MatrixXd y = synth::binary_matrix(rng, 6, 3);
  const MatrixXd w = MatrixXd::Zero(4, 3);
  const MatrixXd out = update_feature_weights<double>(w, x, VectorXd::Ones(6), y, VectorXd::Ones(4), 1.0, 1e-8);
  EXPECT_TRUE(out.isZero(0.0));
}

TEST(UpdateConfidence, FixedPointIsIdentity) {
  fixed_point::ConfidenceCase cc;
  const VectorXd out = update_confidence<double>(cc.c, cc.x, cc.w, cc.y, cc.d, cc.beta, 1e-8);
  EXPECT_EQ(out, cc.c);
}

TEST(UpdateLabelCoefficients, FixedPointIsIdentity) {
  fixed_point::LabelCoefficientCase lc;
  const MatrixXd out = update_label_coefficients<double>(lc.wy, lc.yx, lc.graph, lc.x, lc.c, lc.xf, lc.alpha,
                                                         lc.beta, lc.gamma, 1e-8);
  EXPECT_EQ(out, lc.wy);
  const MatrixXd no_graph =
      update_label_coefficients<double>(lc.wy, lc.yx, lc.graph, lc.x, lc.c, lc.xf, 0.0, 1.0, 3.0, 1e-8);
  EXPECT_EQ(no_graph, lc.wy);
}

TEST(UpdateLabelCoefficients, FrozenWithoutTradeOffs) {
  fixed_point::LabelCoefficientCase lc;
  const MatrixXd shifted = lc.wy * 3.0;
  EXPECT_EQ(update_label_coefficients<double>(shifted, lc.yx, lc.graph, lc.x, lc.c, lc.xf, 0, 0, 0, 1e-8), shifted);
}

TEST(Updates, PreserveNonNegativityOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ds = synth::suite_instance(seed);
    Hyperparams hp;
    hp.seed = seed;
    std::mt19937_64 rng(seed);
    hp.alpha = std::pow(10.0, static_cast<double>(static_cast<int>(rng() % 7) - 3));
    hp.delta = std::pow(10.0, static_cast<double>(static_cast<int>(rng() % 7) - 3));
    const auto p = prepare_problem(ds, hp);
    auto s = init_state(ds, ds.num_labels(), hp);
    for (int it = 0; it < 3; ++it) {
      update_sweep(p, s);
      ASSERT_TRUE(all_nonnegative(s)) << "seed " << seed;
      ASSERT_TRUE(all_finite(s)) << "seed " << seed;
    }
  }
}

TEST(Fit, NoConfidenceAblationPinsC) {
  const auto ds = synth::suite_instance(21);
  Hyperparams hp;
  hp.ablation = Ablation::NoConfidence;
  const auto r = fit(ds, hp);
  for (const auto& c : r.state.C_blocks) EXPECT_EQ(c, VectorXd::Ones(ds.num_samples()));
}

TEST(Fit, StoppingRule) {
  const auto ds = synth::suite_instance(22);
  Hyperparams hp;
  hp.tol = 1e-3;
  const auto r = fit(ds, hp);
  const auto& rel = r.trace.rel_changes;
  ASSERT_EQ(rel.size() + 1, r.trace.objective_values.size());
  ASSERT_EQ(static_cast<int>(rel.size()), r.trace.iterations_run);
  ASSERT_TRUE(r.trace.converged);
  EXPECT_LT(std::abs(rel.back()), hp.tol);
  for (std::size_t t = 0; t + 1 < rel.size(); ++t) EXPECT_GE(std::abs(rel[t]), hp.tol);
  EXPECT_EQ(r.state.iteration, r.trace.iterations_run);
}

TEST(Fit, IterationCap) {
  const auto ds = synth::suite_instance(23);
  Hyperparams hp;
  hp.tol = 1e-15;
  hp.max_iters = 3;
  const auto r = fit(ds, hp);
  EXPECT_EQ(r.trace.iterations_run, 3);
  EXPECT_FALSE(r.trace.converged);
  EXPECT_EQ(r.trace.objective_values.size(), 4u);
}

TEST(Fit, ObjectiveNonIncreasingAfterBurnIn) {
  const auto ds = normalize_views(synth::random_dataset(50, 50, {12, 18}, 4));
  Hyperparams hp;
  hp.tol = 1e-6;
  const auto r = fit(ds, hp);
  const auto& z = r.trace.objective_values;
  ASSERT_GT(z.size(), 6u);
  EXPECT_LT(z.back(), z.front());
  for (std::size_t t = 6; t < z.size(); ++t) EXPECT_LE(z[t], z[t - 1] * (1.0 + 1e-6)) << "iteration " << t;
}

TEST(Fit, SeededDeterminism) {
  const auto ds = synth::suite_instance(24);
  Hyperparams hp;
  hp.seed = 99;
  const auto a = fit(ds, hp);
  const auto b = fit(ds, hp);
  EXPECT_EQ(a.trace.objective_values, b.trace.objective_values);
  for (std::size_t v = 0; v < a.state.W_blocks.size(); ++v) {
    EXPECT_EQ(a.state.W_blocks[v], b.state.W_blocks[v]);
    EXPECT_EQ(a.state.C_blocks[v], b.state.C_blocks[v]);
    EXPECT_EQ(a.state.Wy_blocks[v], b.state.Wy_blocks[v]);
  }
}

TEST(Fit, UniformWeightAblationMatchesManualProblem) {
  const auto ds = synth::suite_instance(25);
  Hyperparams hp;
  hp.ablation = Ablation::UniformViewWeights;
  const auto v2 = fit(ds, hp);

  Hyperparams full = hp;
  full.ablation = Ablation::Full;
  auto p = prepare_problem(ds, full);
  p.fusion = build_fusion(ds, uniform_view_weights<double>(ds.num_views()));
  const auto manual = fit(p, init_state(ds, ds.num_labels(), full));
  EXPECT_EQ(v2.trace.objective_values, manual.trace.objective_values);
  EXPECT_DOUBLE_EQ(v2.view_weights.weights(0), 0.5);
}

TEST(Fit, NoReconstructionAblationMatchesZeroTradeOffs) {
  const auto ds = synth::suite_instance(26);
  Hyperparams hp;
  hp.ablation = Ablation::NoReconstruction;
  const auto v3 = fit(ds, hp);

  Hyperparams zeroed;
  zeroed.alpha = zeroed.beta = zeroed.gamma = 0.0;
  const auto manual = fit(ds, zeroed);
  EXPECT_EQ(v3.trace.objective_values, manual.trace.objective_values);
  const auto init = init_state(ds, ds.num_labels(), hp);
  for (std::size_t v = 0; v < init.Wy_blocks.size(); ++v) EXPECT_EQ(v3.state.Wy_blocks[v], init.Wy_blocks[v]);
}

TEST(Fit, NonFiniteObjectiveAborts) {
  const auto ds = synth::suite_instance(27);
  const Hyperparams hp;
  const auto p = prepare_problem(ds, hp);
  auto s = init_state(ds, ds.num_labels(), hp);
  s.W_blocks[0].setConstant(1e300);
  EXPECT_THROW(fit(p, s), std::runtime_error);
}
