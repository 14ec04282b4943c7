#include "ugrfs/cli.hpp"

#include "ugrfs/cross_validation.hpp"
#include "ugrfs/dataset.hpp"
#include "ugrfs/io.hpp"
#include "ugrfs/parallel.hpp"
#include "ugrfs/ranking.hpp"
#include "ugrfs/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>

namespace ugrfs {

int default_jobs() {
  if (const char* env = std::getenv("UGRFS_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

namespace {

/// Flag values as parsed; applied only when the flag was given.
struct FlagValues {
  std::string config;
  std::string manifest;
  std::string out;
  double alpha = 0, beta = 0, gamma = 0, delta = 0, sigma = 0, tol = 0, knn_s = 0;
  Index q = 0, knn_k = 0;
  int max_iters = 0, folds = 0, p_min = 0, p_max = 0, jobs = 0;
  std::uint64_t seed = 0;
  std::string ablation;
  std::vector<double> grid;
  std::vector<std::string> tune_params;
  bool export_matrices = false;
};

struct OptionSet {
  std::map<std::string, CLI::Option*> by_name;
  bool given(const std::string& name) const {
    const auto it = by_name.find(name);
    return it != by_name.end() && it->second->count() > 0;
  }
};

void add_common_options(CLI::App& cmd, FlagValues& f, OptionSet& opts) {
  opts.by_name["config"] = cmd.add_option("--config", f.config, "JSON run configuration");
  opts.by_name["manifest"] = cmd.add_option("--manifest", f.manifest, "dataset manifest (JSON)");
  opts.by_name["out"] = cmd.add_option("--out", f.out, "output directory");
  opts.by_name["alpha"] = cmd.add_option("--alpha", f.alpha, "label-graph trade-off");
  opts.by_name["beta"] = cmd.add_option("--beta", f.beta, "confidence penalty trade-off");
  opts.by_name["gamma"] = cmd.add_option("--gamma", f.gamma, "fusion reconstruction trade-off");
  opts.by_name["delta"] = cmd.add_option("--delta", f.delta, "l2,1 sparsity trade-off");
  opts.by_name["q"] = cmd.add_option("--q", f.q, "neighbours per graph node");
  opts.by_name["sigma"] = cmd.add_option("--sigma", f.sigma, "Gaussian bandwidth");
  opts.by_name["tol"] = cmd.add_option("--tol", f.tol, "relative objective change to stop at");
  opts.by_name["max_iters"] = cmd.add_option("--max-iters", f.max_iters, "iteration cap");
  opts.by_name["seed"] = cmd.add_option("--seed", f.seed, "random seed");
  opts.by_name["ablation"] = cmd.add_option("--ablation", f.ablation, "full, v1, v2 or v3")
                                 ->check(CLI::IsMember({"full", "v1", "v2", "v3"}));
  opts.by_name["jobs"] = cmd.add_option("--jobs", f.jobs, "worker threads");
}

void add_eval_options(CLI::App& cmd, FlagValues& f, OptionSet& opts) {
  opts.by_name["folds"] = cmd.add_option("--folds", f.folds, "cross-validation folds");
  opts.by_name["p_min"] = cmd.add_option("--p-min", f.p_min, "smallest feature percentage");
  opts.by_name["p_max"] = cmd.add_option("--p-max", f.p_max, "largest feature percentage");
  opts.by_name["knn_k"] = cmd.add_option("--knn-k", f.knn_k, "ML-KNN neighbour count");
  opts.by_name["knn_s"] = cmd.add_option("--knn-s", f.knn_s, "ML-KNN smoothing");
}

template <typename T>
T json_field(const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("config field '" + key + "' has the wrong type");
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  static const std::set<std::string> known = {
      "manifest", "out",   "alpha", "beta",  "gamma", "delta", "q",     "sigma", "tol",   "max_iters",
      "seed",     "ablation", "folds", "p_min", "p_max", "jobs", "knn_k", "knn_s", "grid", "tune_params",
      "export_matrices"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw std::invalid_argument("config field '" + key + "' is not recognised");

  const auto base = path.parent_path();
  auto rel = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() || base.empty() ? fp : base / fp;
  };
  if (j.contains("manifest")) cfg.manifest = rel(json_field<std::string>(j, "manifest"));
  if (j.contains("out")) cfg.out = json_field<std::string>(j, "out");
  if (j.contains("alpha")) cfg.hp.alpha = json_field<double>(j, "alpha");
  if (j.contains("beta")) cfg.hp.beta = json_field<double>(j, "beta");
  if (j.contains("gamma")) cfg.hp.gamma = json_field<double>(j, "gamma");
  if (j.contains("delta")) cfg.hp.delta = json_field<double>(j, "delta");
  if (j.contains("q")) cfg.hp.q = json_field<Index>(j, "q");
  if (j.contains("sigma")) cfg.hp.sigma = json_field<double>(j, "sigma");
  if (j.contains("tol")) cfg.hp.tol = json_field<double>(j, "tol");
  if (j.contains("max_iters")) cfg.hp.max_iters = json_field<int>(j, "max_iters");
  if (j.contains("seed")) cfg.hp.seed = json_field<std::uint64_t>(j, "seed");
  if (j.contains("ablation")) cfg.hp.ablation = parse_ablation(json_field<std::string>(j, "ablation"));
  if (j.contains("folds")) cfg.folds = json_field<int>(j, "folds");
  if (j.contains("p_min")) cfg.p_min = json_field<int>(j, "p_min");
  if (j.contains("p_max")) cfg.p_max = json_field<int>(j, "p_max");
  if (j.contains("jobs")) cfg.jobs = json_field<int>(j, "jobs");
  if (j.contains("knn_k")) cfg.knn_k = json_field<Index>(j, "knn_k");
  if (j.contains("knn_s")) cfg.knn_s = json_field<double>(j, "knn_s");
  if (j.contains("grid")) cfg.grid = json_field<std::vector<double>>(j, "grid");
  if (j.contains("tune_params")) cfg.tune_params = json_field<std::vector<std::string>>(j, "tune_params");
  if (j.contains("export_matrices")) cfg.export_matrices = json_field<bool>(j, "export_matrices");
}

RunConfig resolve_config(const FlagValues& f, const OptionSet& o) {
  RunConfig cfg;
  cfg.jobs = default_jobs();
  if (o.given("config")) apply_config_file(cfg, f.config);
  if (o.given("manifest")) cfg.manifest = f.manifest;
  if (o.given("out")) cfg.out = f.out;
  if (o.given("alpha")) cfg.hp.alpha = f.alpha;
  if (o.given("beta")) cfg.hp.beta = f.beta;
  if (o.given("gamma")) cfg.hp.gamma = f.gamma;
  if (o.given("delta")) cfg.hp.delta = f.delta;
  if (o.given("q")) cfg.hp.q = f.q;
  if (o.given("sigma")) cfg.hp.sigma = f.sigma;
  if (o.given("tol")) cfg.hp.tol = f.tol;
  if (o.given("max_iters")) cfg.hp.max_iters = f.max_iters;
  if (o.given("seed")) cfg.hp.seed = f.seed;
  if (o.given("ablation")) cfg.hp.ablation = parse_ablation(f.ablation);
  if (o.given("jobs")) cfg.jobs = f.jobs;
  if (o.given("folds")) cfg.folds = f.folds;
  if (o.given("p_min")) cfg.p_min = f.p_min;
  if (o.given("p_max")) cfg.p_max = f.p_max;
  if (o.given("knn_k")) cfg.knn_k = f.knn_k;
  if (o.given("knn_s")) cfg.knn_s = f.knn_s;
  if (o.given("grid")) cfg.grid = f.grid;
  if (o.given("tune_params")) cfg.tune_params = f.tune_params;
  if (o.given("export_matrices")) cfg.export_matrices = f.export_matrices;

  if (cfg.manifest.empty()) throw std::invalid_argument("manifest: no dataset manifest given");
  cfg.hp.validate();
  if (cfg.jobs < 1) throw std::invalid_argument("jobs: must be at least 1");
  if (cfg.folds < 2) throw std::invalid_argument("folds: must be at least 2");
  if (cfg.p_min < 1 || cfg.p_max > 100 || cfg.p_min > cfg.p_max)
    throw std::invalid_argument("p_min/p_max: need 1 <= p_min <= p_max <= 100");
  if (cfg.knn_k < 1) throw std::invalid_argument("knn_k: must be at least 1");
  if (!(cfg.knn_s > 0)) throw std::invalid_argument("knn_s: must be positive");
  if (cfg.grid.empty()) throw std::invalid_argument("grid: must not be empty");
  for (double g : cfg.grid)
    if (!(g >= 0)) throw std::invalid_argument("grid: values must be non-negative");
  for (const auto& p : cfg.tune_params)
    if (p != "alpha" && p != "beta" && p != "gamma" && p != "delta")
      throw std::invalid_argument("tune_params: unknown parameter '" + p + "'");
  return cfg;
}

SweepOptions sweep_options(const RunConfig& cfg) {
  SweepOptions opt;
  opt.folds = cfg.folds;
  opt.p_range = SweepOptions::percent_range(cfg.p_min, cfg.p_max);
  opt.knn_k = cfg.knn_k;
  opt.knn_s = cfg.knn_s;
  opt.jobs = cfg.jobs;
  return opt;
}

int cmd_rank(const RunConfig& cfg, std::ostream& out) {
  const auto ds = normalize_views(load_dataset(cfg.manifest));
  const auto result = fit(ds, cfg.hp);
  const auto ranking = rank_features(result.state);
  write_file(cfg.out / "ranking.csv", [&](std::ostream& os) { write_ranking_csv(os, ranking); });
  write_file(cfg.out / "view_weights.json",
             [&](std::ostream& os) { write_view_weights_json(os, ds.view_names, result.view_weights); });
  write_file(cfg.out / "confidence.csv",
             [&](std::ostream& os) { write_confidence_csv(os, ds.view_names, result.state); });
  out << "ranked " << ds.d_total() << " features in " << result.trace.iterations_run << " iterations ("
      << (result.trace.converged ? "converged" : "iteration cap reached") << ")\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const auto ds = load_dataset(cfg.manifest);
  const auto result = cross_validated_sweep(ds, cfg.hp, sweep_options(cfg));
  write_file(cfg.out / "results.csv", [&](std::ostream& os) { write_sweep_results_csv(os, result); });
  write_file(cfg.out / "summary.json", [&](std::ostream& os) { write_sweep_summary_json(os, result.summary); });
  write_file(cfg.out / "folds.csv", [&](std::ostream& os) { write_fold_assignment_csv(os, result.assignment); });
  const auto& s = result.summary;
  out << "AP " << format_double(s.ap.mean) << " +- " << format_double(s.ap.std) << '\n'
      << "Coverage " << format_double(s.coverage.mean) << " +- " << format_double(s.coverage.std) << '\n'
      << "HL " << format_double(s.hamming_loss.mean) << " +- " << format_double(s.hamming_loss.std) << '\n'
      << "RL " << format_double(s.ranking_loss.mean) << " +- " << format_double(s.ranking_loss.std) << '\n';
  return 0;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out) {
  const auto ds = load_dataset(cfg.manifest);

  std::vector<Hyperparams> points{cfg.hp};
  for (const auto& name : cfg.tune_params) {
    std::vector<Hyperparams> expanded;
    for (const auto& base : points)
      for (double v : cfg.grid) {
        Hyperparams h = base;
        if (name == "alpha") h.alpha = v;
        if (name == "beta") h.beta = v;
        if (name == "gamma") h.gamma = v;
        if (name == "delta") h.delta = v;
        expanded.push_back(h);
      }
    points = std::move(expanded);
  }

  SweepOptions opt = sweep_options(cfg);
  opt.jobs = 1;
  std::vector<SweepSummary> summaries(points.size());
  parallel_for(points.size(), cfg.jobs,
               [&](std::size_t i) { summaries[i] = cross_validated_sweep(ds, points[i], opt).summary; });

  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return summaries[a].ap.mean > summaries[b].ap.mean; });

  write_file(cfg.out / "tune.csv", [&](std::ostream& os) {
    os << "alpha,beta,gamma,delta,ap_mean,ap_std,coverage_mean,coverage_std,hl_mean,hl_std,rl_mean,rl_std\n";
    for (std::size_t i : order) {
      const auto& h = points[i];
      const auto& s = summaries[i];
      os << format_double(h.alpha) << ',' << format_double(h.beta) << ',' << format_double(h.gamma) << ','
         << format_double(h.delta) << ',' << format_double(s.ap.mean) << ',' << format_double(s.ap.std) << ','
         << format_double(s.coverage.mean) << ',' << format_double(s.coverage.std) << ','
         << format_double(s.hamming_loss.mean) << ',' << format_double(s.hamming_loss.std) << ','
         << format_double(s.ranking_loss.mean) << ',' << format_double(s.ranking_loss.std) << '\n';
    }
  });
  out << "evaluated " << points.size() << " grid points\n";
  return 0;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  const auto ds = normalize_views(load_dataset(cfg.manifest));
  const auto problem = prepare_problem(ds, cfg.hp);
  const auto result = fit(problem, init_state(ds, ds.num_labels(), cfg.hp));
  write_file(cfg.out / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, result.trace); });
  if (cfg.export_matrices) {
    write_file(cfg.out / "label_kernel.csv", [&](std::ostream& os) { write_matrix_csv(os, problem.kernel.rho); });
    write_file(cfg.out / "global_view.csv", [&](std::ostream& os) {
      write_matrix_csv(os, global_distribution(problem.kernel, result.state.Wy_blocks).D);
    });
    write_file(cfg.out / "label_graph.csv",
               [&](std::ostream& os) { write_graph_triplets_csv(os, problem.label_graph); });
    write_file(cfg.out / "w_row_norms.csv", [&](std::ostream& os) { write_w_row_norms_csv(os, result.state); });
    write_file(cfg.out / "confidence.csv",
               [&](std::ostream& os) { write_confidence_csv(os, ds.view_names, result.state); });
  }
  out << result.trace.iterations_run << " iterations, final objective "
      << format_double(result.trace.objective_values.back()) << '\n';
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view multi-label feature ranking and evaluation", "ugrfs"};
  app.require_subcommand(1);

  FlagValues flags;
  OptionSet rank_opts, eval_opts, tune_opts, trace_opts;

  auto* rank = app.add_subcommand("rank", "fit on the full dataset and write the feature ranking");
  add_common_options(*rank, flags, rank_opts);

  auto* eval = app.add_subcommand("eval", "cross-validated evaluation over the feature-percentage sweep");
  add_common_options(*eval, flags, eval_opts);
  add_eval_options(*eval, flags, eval_opts);

  auto* tune = app.add_subcommand("tune", "grid search over the trade-off parameters");
  add_common_options(*tune, flags, tune_opts);
  add_eval_options(*tune, flags, tune_opts);
  tune_opts.by_name["grid"] = tune->add_option("--grid", flags.grid, "grid values")->delimiter(',');
  tune_opts.by_name["tune_params"] =
      tune->add_option("--tune-params", flags.tune_params, "parameters to search")->delimiter(',');

  auto* trace = app.add_subcommand("trace", "single fit, write the convergence trace");
  add_common_options(*trace, flags, trace_opts);
  trace_opts.by_name["export_matrices"] =
      trace->add_flag("--export-matrices", flags.export_matrices, "also write kernel, D, label graph, W, C");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0 && e.get_exit_code() != static_cast<int>(CLI::ExitCodes::Success)) err << app.help();
    return code;
  }

  try {
    if (rank->parsed()) return cmd_rank(resolve_config(flags, rank_opts), out);
    if (eval->parsed()) return cmd_eval(resolve_config(flags, eval_opts), out);
    if (tune->parsed()) return cmd_tune(resolve_config(flags, tune_opts), out);
    if (trace->parsed()) return cmd_trace(resolve_config(flags, trace_opts), out);
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ugrfs
