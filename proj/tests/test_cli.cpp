#include "ugrfs/cli.hpp"

#include "support/files.hpp"
#include "support/synthetic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>

using namespace ugrfs;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { manifest_ = synth::write_dataset(synth::planted_dataset(5, 40).data, dir_ / "data"); }

  std::vector<std::string> base(const std::string& cmd, const std::string& out_name) const {
    return {cmd, "--manifest", manifest_.string(), "--out", (dir_ / out_name).string(), "--max-iters", "20"};
  }

  synth::ScratchDir dir_{"cli"};
  fs::path manifest_;
};

}  // namespace

TEST_F(CliTest, RankWritesOutputs) {
  const auto r = run(base("rank", "rank"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ranking = synth::slurp(dir_ / "rank/ranking.csv");
  EXPECT_EQ(ranking.rfind("rank,global_index,view,within_view_index,score\n", 0), 0u);
  EXPECT_EQ(count_lines(ranking), 41);

  const auto weights = nlohmann::json::parse(synth::slurp(dir_ / "rank/view_weights.json"));
  ASSERT_EQ(weights.size(), 2u);
  double total = 0.0;
  for (const auto& [name, w] : weights.items()) total += w.get<double>();
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(count_lines(synth::slurp(dir_ / "rank/confidence.csv")), 41);
}

TEST_F(CliTest, EvalWritesSummary) {
  auto args = base("eval", "eval");
  for (const char* a : {"--folds", "2", "--p-min", "5", "--p-max", "6", "--knn-k", "5"}) args.emplace_back(a);
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(synth::slurp(dir_ / "eval/summary.json"));
  for (const char* key : {"ap", "coverage", "hamming_loss", "ranking_loss"}) {
    ASSERT_TRUE(summary.contains(key)) << key;
    EXPECT_TRUE(summary[key].contains("mean"));
    EXPECT_TRUE(summary[key].contains("std"));
  }
  EXPECT_EQ(count_lines(synth::slurp(dir_ / "eval/results.csv")), 1 + 2 * 2);
  EXPECT_EQ(count_lines(synth::slurp(dir_ / "eval/folds.csv")), 41);
}

TEST_F(CliTest, BadValueNamesTheOption) {
  auto args = base("rank", "bad");
  args.insert(args.end(), {"--alpha", "banana"});
  const auto r = run(args);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "bad/ranking.csv"));
}

TEST_F(CliTest, NegativeParameterIsRejected) {
  auto args = base("rank", "neg");
  args.insert(args.end(), {"--delta", "-1"});
  const auto r = run(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("delta"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownSubcommandAndFlag) {
  const auto a = run({"frobnicate"});
  EXPECT_NE(a.code, 0);
  EXPECT_NE(a.err.find("rank"), std::string::npos) << "usage should list subcommands";
  auto args = base("rank", "x");
  args.emplace_back("--no-such-flag");
  EXPECT_NE(run(args).code, 0);
  EXPECT_NE(run({}).code, 0);
}

TEST_F(CliTest, MissingManifestIsAnError) {
  const auto r = run({"rank", "--manifest", (dir_ / "nope.json").string(), "--out", (dir_ / "m").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos) << r.err;
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  std::ofstream(dir_ / "cfg.json") << R"({"alpha": 0.01, "delta": 10, "max_iters": 20})";
  const auto cfg = (dir_ / "cfg.json").string();

  auto flag_only = base("rank", "flag");
  flag_only.insert(flag_only.end(), {"--alpha", "100", "--delta", "10"});
  auto mixed = base("rank", "mixed");
  mixed.insert(mixed.end(), {"--config", cfg, "--alpha", "100"});
  auto config_only = base("rank", "cfg");
  config_only.insert(config_only.end(), {"--config", cfg});
  auto config_equiv = base("rank", "cfg_equiv");
  config_equiv.insert(config_equiv.end(), {"--alpha", "0.01", "--delta", "10"});

  for (const auto* a : {&flag_only, &mixed, &config_only, &config_equiv}) ASSERT_EQ(run(*a).code, 0);
  EXPECT_EQ(synth::slurp(dir_ / "flag/ranking.csv"), synth::slurp(dir_ / "mixed/ranking.csv"));
  EXPECT_EQ(synth::slurp(dir_ / "cfg/ranking.csv"), synth::slurp(dir_ / "cfg_equiv/ranking.csv"));
  EXPECT_NE(synth::slurp(dir_ / "flag/confidence.csv"), synth::slurp(dir_ / "cfg/confidence.csv"));
}

TEST_F(CliTest, UnknownConfigFieldIsNamed) {
  std::ofstream(dir_ / "bad.json") << R"({"alpha": 1, "gama": 2})";
  auto args = base("rank", "badcfg");
  args.insert(args.end(), {"--config", (dir_ / "bad.json").string()});
  const auto r = run(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gama"), std::string::npos) << r.err;
}

TEST_F(CliTest, TuneCoversTheGrid) {
  auto args = base("tune", "tune");
  for (const char* a : {"--folds", "2", "--p-min", "10", "--p-max", "10", "--knn-k", "5", "--grid", "0.1,10",
                        "--tune-params", "alpha,delta", "--jobs", "2"})
    args.emplace_back(a);
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(synth::slurp(dir_ / "tune/tune.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("alpha,beta,gamma,delta,ap_mean", 0), 0u);
  std::set<std::pair<std::string, std::string>> seen;
  double prev_ap = 2.0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 12u);
    EXPECT_EQ(cells[1], "1");
    EXPECT_EQ(cells[2], "1");
    seen.insert({cells[0], cells[3]});
    const double ap = std::stod(cells[4]);
    EXPECT_LE(ap, prev_ap);
    prev_ap = ap;
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST_F(CliTest, TraceIsReproducible) {
  auto a = base("trace", "t1");
  a.emplace_back("--export-matrices");
  auto b = base("trace", "t2");
  b.emplace_back("--export-matrices");
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  const auto trace = synth::slurp(dir_ / "t1/trace.csv");
  EXPECT_EQ(trace.rfind("iter,objective,rel_change\n0,", 0), 0u);
  for (const char* f : {"trace.csv", "label_kernel.csv", "global_view.csv", "label_graph.csv", "w_row_norms.csv",
                        "confidence.csv"})
    EXPECT_EQ(synth::slurp(dir_ / "t1" / f), synth::slurp(dir_ / "t2" / f)) << f;
}
