#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetfair/edit_log.hpp"
#include "hetfair/error.hpp"
#include "hetfair/graph.hpp"
#include "hetfair/homophily.hpp"
#include "hetfair/metrics.hpp"
#include "hetfair/node_table.hpp"
#include "hetfair/preprocess.hpp"
#include "hetfair/rewire.hpp"
#include "hetfair/split.hpp"
#include "hetfair/theory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct InputOptions {
  std::string graph;
  std::string nodes;
  bool one_indexed = false;
  bool lcc = false;
  std::size_t top_classes = 0;
};

struct CommonOptions {
  std::string out = "out";
  std::size_t bins = 10;
  std::uint64_t seed = 0;
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--graph", in.graph, "Edge list (u v per line)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--nodes", in.nodes, "Node table CSV (node_id,label,sensitive[,features])")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--one-indexed", in.one_indexed, "Edge list node ids start at 1");
  cmd->add_flag("--lcc", in.lcc, "Keep only the largest connected component");
  cmd->add_option("--top-classes", in.top_classes,
                  "Keep the k most frequent classes, then the largest component (0 = off)");
}

void add_common_flags(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--out", common.out, "Output directory")->capture_default_str();
  cmd->add_option("--bins", common.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
}

json input_json(const InputOptions& in) {
  return {{"graph", in.graph},
          {"nodes", in.nodes},
          {"one_indexed", in.one_indexed},
          {"lcc", in.lcc},
          {"top_classes", in.top_classes}};
}

struct Dataset {
  hetfair::Graph graph;
  hetfair::NodeTable table;
  hetfair::LoadReport report;
};

Dataset load_dataset(const InputOptions& in) {
  Dataset d;
  auto loaded = hetfair::load_edge_list(in.graph, in.one_indexed);
  d.report = loaded.report;
  d.table = hetfair::load_node_table(in.nodes);
  if (loaded.graph.node_count() > d.table.size()) {
    throw hetfair::Error("edge list references node " + std::to_string(loaded.graph.node_count() - 1) +
                         " beyond the node table");
  }
  d.graph = loaded.graph.padded(d.table.size());
  if (in.top_classes > 0) {
    auto sub = hetfair::filter_top_classes(d.graph, d.table, in.top_classes);
    d.graph = std::move(sub.graph);
    d.table = std::move(sub.table);
  } else if (in.lcc) {
    auto sub = hetfair::largest_connected_component(d.graph, d.table);
    d.graph = std::move(sub.graph);
    d.table = std::move(sub.table);
  }
  return d;
}

fs::path prepare_out(const std::string& dir) {
  fs::path out(dir);
  fs::create_directories(out);
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw hetfair::Error("cannot write " + path.string());
  return f;
}

void write_json(const fs::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  if (!f) throw hetfair::Error("failed writing " + path.string());
}

void write_config(const fs::path& out, const std::string& subcommand, json config) {
  config["subcommand"] = subcommand;
  write_json(out / (subcommand + ".config.json"), config);
}

json histogram_json(const hetfair::Histogram& h) { return std::vector<double>(h.mass().begin(), h.mass().end()); }

// analyze ------------------------------------------------------------------

int run_analyze(const InputOptions& in, const CommonOptions& common) {
  const fs::path out = prepare_out(common.out);
  const Dataset d = load_dataset(in);
  const auto ratios = hetfair::local_homophily_all(d.graph, d.table);
  const auto hist = hetfair::histogram(std::span<const std::optional<double>>(ratios), common.bins);

  {
    auto f = open_out(out / "local_homophily.csv");
    f << "node_id,local_homophily\n";
    for (std::size_t v = 0; v < ratios.size(); ++v) {
      f << v << ',';
      if (ratios[v]) f << json(*ratios[v]).dump();
      f << '\n';
    }
  }
  {
    auto f = open_out(out / "histogram.csv");
    hetfair::write_histogram_csv(hist, f);
  }

  std::size_t isolated = 0;
  for (const auto& r : ratios) isolated += r ? 0 : 1;
  json summary = {{"nodes", d.graph.node_count()},
                  {"edges", d.graph.edge_count()},
                  {"classes", d.table.class_count()},
                  {"isolated_nodes", isolated},
                  {"global_homophily", hetfair::global_homophily(d.graph, d.table)},
                  {"mean_local_homophily", hist.mean()},
                  {"histogram", histogram_json(hist)},
                  {"load", {{"lines", d.report.lines},
                            {"self_loops", d.report.self_loops},
                            {"duplicate_edges", d.report.duplicate_edges}}},
                  {"bins", common.bins},
                  {"seed", common.seed}};
  write_json(out / "summary.json", summary);

  json config = input_json(in);
  config["bins"] = common.bins;
  config["seed"] = common.seed;
  config["out"] = common.out;
  write_config(out, "analyze", config);
  std::cout << "nodes " << d.graph.node_count() << " edges " << d.graph.edge_count() << " h "
            << summary["global_homophily"].get<double>() << '\n';
  return 0;
}

// generate -----------------------------------------------------------------

int run_generate(const InputOptions& in, const CommonOptions& common, double alpha, double beta) {
  const fs::path out = prepare_out(common.out);
  const Dataset d = load_dataset(in);
  const auto result = hetfair::generate(d.graph, d.table, hetfair::BetaGoal{alpha, beta}, common.bins, common.seed);

  hetfair::save_edge_list(result.graph, out / "generated.edges");
  hetfair::save_edit_log(result.log, out / "edits.jsonl");

  const auto& r = result.report;
  json deltas = json::object();
  for (const auto& [delta, count] : r.degree_delta_histogram) deltas[std::to_string(delta)] = count;
  json report = {{"emd_original_goal", r.emd_original_goal},
                 {"emd_generated_goal", r.emd_generated_goal},
                 {"edits_rewire", r.edits_rewire},
                 {"edits_refine", r.edits_refine},
                 {"nodes_targeted", r.nodes_targeted},
                 {"reverted", r.reverted},
                 {"degree_delta_histogram", deltas},
                 {"original_histogram", histogram_json(result.original)},
                 {"goal_histogram", histogram_json(result.goal)},
                 {"generated_histogram", histogram_json(result.generated)},
                 {"edges_original", d.graph.edge_count()},
                 {"edges_generated", result.graph.edge_count()},
                 {"alpha", alpha},
                 {"beta", beta},
                 {"bins", common.bins},
                 {"seed", common.seed}};
  write_json(out / "report.json", report);

  json config = input_json(in);
  config["alpha"] = alpha;
  config["beta"] = beta;
  config["bins"] = common.bins;
  config["seed"] = common.seed;
  config["out"] = common.out;
  write_config(out, "generate", config);
  std::cout << "emd " << r.emd_original_goal << " -> " << r.emd_generated_goal << " (" << result.log.size()
            << " edits)\n";
  return 0;
}

// split --------------------------------------------------------------------

std::string gamma_stem(double gamma) {
  std::array<char, 32> buf{};
  const auto end = std::to_chars(buf.data(), buf.data() + buf.size(), gamma).ptr;
  return "split_gamma" + std::string(buf.data(), end);
}

int run_split(const InputOptions& in, const CommonOptions& common, const std::vector<double>& gammas,
              double train_frac, double val_frac) {
  const fs::path out = prepare_out(common.out);
  const Dataset d = load_dataset(in);
  const auto ratios = hetfair::local_homophily_all(d.graph, d.table);

  std::vector<std::size_t> per_bin_nodes(common.bins, 0);
  for (const auto& r : ratios) {
    if (r) ++per_bin_nodes[hetfair::bin_index(*r, common.bins)];
  }

  for (double gamma : gammas) {
    hetfair::SplitOptions options;
    options.gamma = gamma;
    options.bins = common.bins;
    options.train_frac = train_frac;
    options.val_frac = val_frac;
    options.seed = common.seed;
    const auto split = hetfair::stratified_split(ratios, options);
    const std::string stem = gamma_stem(gamma);
    {
      auto f = open_out(out / (stem + ".csv"));
      hetfair::write_split_csv(split, f);
    }
    json diag = {{"gamma", gamma},
                 {"bins", common.bins},
                 {"seed", common.seed},
                 {"train_frac", train_frac},
                 {"val_frac", val_frac},
                 {"counts", {{"train", split.count(hetfair::SplitTag::kTrain)},
                             {"val", split.count(hetfair::SplitTag::kVal)},
                             {"test", split.count(hetfair::SplitTag::kTest)},
                             {"excluded", split.count(hetfair::SplitTag::kExcluded)}}},
                 {"scale", split.scale},
                 {"train_weight", split.train_weight},
                 {"per_bin_nodes", per_bin_nodes},
                 {"per_bin_train_share", split.per_bin_train_share},
                 {"emd_train_test", split.emd_train_test}};
    write_json(out / (stem + ".json"), diag);
    std::cout << "gamma " << gamma << " emd_train_test " << split.emd_train_test << '\n';
  }

  json config = input_json(in);
  config["gamma"] = gammas;
  config["train_frac"] = train_frac;
  config["val_frac"] = val_frac;
  config["bins"] = common.bins;
  config["seed"] = common.seed;
  config["out"] = common.out;
  write_config(out, "split", config);
  return 0;
}

// metrics ------------------------------------------------------------------

struct MetricsOptions {
  std::string predictions;
  std::string later;
  std::string baseline;
  std::string dataset = "dataset";
  std::string model = "model";
  std::string subset = "test";
  hetfair::ClassId preferred = 1;
  bool pairwise = false;
};

json score(const hetfair::PredictionTable& p, const MetricsOptions& o, hetfair::MetricRecord& record) {
  const auto mode = o.pairwise ? hetfair::MulticlassSpMode::kPairwise : hetfair::MulticlassSpMode::kOneVsRest;
  record.dataset = o.dataset;
  record.model = o.model;
  record.subset = o.subset;
  record.f1 = hetfair::micro_f1(p);
  record.n_eval = p.evaluated_count();
  json j = {{"n_eval", record.n_eval}, {"micro_f1", record.f1}};
  if (p.class_count() > 2) {
    record.sp = hetfair::multiclass_sp(p, mode);
    j["sp"] = record.sp;
    j["sp_mode"] = o.pairwise ? "pairwise" : "one_vs_rest";
    j["per_class_sp"] = hetfair::per_class_sp(p);
  } else {
    record.sp = hetfair::statistical_parity(p, o.preferred);
    j["sp"] = record.sp;
    j["preferred_class"] = o.preferred;
  }
  return j;
}

json delta_json(const hetfair::MetricDelta& d) { return {{"f1", d.f1}, {"sp", d.sp}}; }

int run_metrics(const MetricsOptions& o, const CommonOptions& common) {
  const fs::path out = prepare_out(common.out);
  hetfair::MetricRecord record;
  json result = {{"dataset", o.dataset}, {"model", o.model}, {"subset", o.subset}};
  result["scores"] = score(hetfair::load_predictions(o.predictions), o, record);

  if (!o.baseline.empty()) {
    MetricsOptions bo = o;
    bo.model = "baseline";
    hetfair::MetricRecord base;
    result["baseline_scores"] = score(hetfair::load_predictions(o.baseline), bo, base);
    base.model = record.model;
    const auto adjusted = hetfair::baseline_adjust(record, base);
    result["adjusted"] = {{"f1", adjusted.f1}, {"sp", adjusted.sp}};
  }
  if (!o.later.empty()) {
    hetfair::MetricRecord later;
    result["later_scores"] = score(hetfair::load_predictions(o.later), o, later);
    result["delta"] = delta_json(hetfair::delta_metrics(record, later));
  }
  result["seed"] = common.seed;
  write_json(out / "metrics.json", result);

  json config = {{"predictions", o.predictions},
                 {"later", o.later},
                 {"baseline", o.baseline},
                 {"dataset", o.dataset},
                 {"model", o.model},
                 {"subset", o.subset},
                 {"preferred", o.preferred},
                 {"pairwise", o.pairwise},
                 {"seed", common.seed},
                 {"out", common.out}};
  write_config(out, "metrics", config);
  std::cout << "f1 " << record.f1 << " sp " << record.sp << '\n';
  return 0;
}

// theory -------------------------------------------------------------------

int run_theory(const hetfair::theory::TheoryParams& params, std::vector<double> grid, std::size_t trials,
               const CommonOptions& common) {
  namespace th = hetfair::theory;
  const fs::path out = prepare_out(common.out);
  if (grid.empty()) {
    for (int i = -3; i <= 3; ++i) grid.push_back(i / 10.0);
  }
  const auto sweep = th::sweep_alpha(params, grid, trials, common.seed);
  for (double a : sweep.skipped) {
    std::cerr << "warning: skipping alpha " << a << " (h + alpha outside [0, 1])\n";
  }
  {
    auto f = open_out(out / "sweep.csv");
    th::write_sweep_csv(sweep, f);
  }
  json rows = json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"alpha", r.alpha},
                    {"closed_form", r.closed_form},
                    {"composed", r.composed},
                    {"mc_mean", r.mc_mean},
                    {"mc_stderr", r.mc_stderr},
                    {"trials", r.trials}});
  }
  json params_json = {{"n", params.n},
                      {"k", params.k},
                      {"d", params.d},
                      {"h", params.h},
                      {"mu_l", params.mu_l},
                      {"mu_s", params.mu_s},
                      {"sigma_l", params.sigma_l},
                      {"sigma_s", params.sigma_s},
                      {"lambda", params.lambda_reg}};
  write_json(out / "sweep.json", {{"params", params_json},
                                  {"alpha_grid", grid},
                                  {"skipped", sweep.skipped},
                                  {"trials", trials},
                                  {"seed", common.seed},
                                  {"rows", rows}});
  json config = params_json;
  config["alpha_grid"] = grid;
  config["trials"] = trials;
  config["seed"] = common.seed;
  config["out"] = common.out;
  write_config(out, "theory", config);
  std::cout << sweep.rows.size() << " rows written\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hetfair: homophily shift benchmarks for fair graph learning"};
  app.require_subcommand(1);

  InputOptions in;
  CommonOptions common;

  auto* analyze = app.add_subcommand("analyze", "Global and local homophily of a labeled graph");
  add_input_flags(analyze, in);
  add_common_flags(analyze, common);

  double alpha = 1.0;
  double beta = 1.0;
  auto* generate = app.add_subcommand("generate", "Rewire a graph toward a Beta local homophily goal");
  add_input_flags(generate, in);
  add_common_flags(generate, common);
  generate->add_option("--alpha", alpha, "Beta goal alpha")->required()->check(CLI::PositiveNumber);
  generate->add_option("--beta", beta, "Beta goal beta")->required()->check(CLI::PositiveNumber);

  std::vector<double> gammas{0.0};
  double train_frac = 0.8;
  double val_frac = 0.2;
  auto* split = app.add_subcommand("split", "Homophily-stratified train/val/test splits");
  add_input_flags(split, in);
  add_common_flags(split, common);
  split->add_option("--gamma", gammas, "Concentration exponents, one split per value")->capture_default_str();
  split->add_option("--train-frac", train_frac, "Share of eligible nodes in train + val")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  split->add_option("--val-frac", val_frac, "Share of the training pool held out for validation")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  MetricsOptions mo;
  auto* metrics = app.add_subcommand("metrics", "Micro-F1 and statistical parity of predictions");
  add_common_flags(metrics, common);
  metrics->add_option("--predictions", mo.predictions, "Predictions CSV (node_id,y_true,y_pred,sensitive)")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--compare", mo.later, "Second predictions CSV; reports later - first")
      ->check(CLI::ExistingFile);
  metrics->add_option("--baseline", mo.baseline, "Baseline predictions on the same subset")
      ->check(CLI::ExistingFile);
  metrics->add_option("--dataset", mo.dataset)->capture_default_str();
  metrics->add_option("--model", mo.model)->capture_default_str();
  metrics->add_option("--subset", mo.subset)->capture_default_str();
  metrics->add_option("--preferred", mo.preferred, "Preferred class for binary SP")->capture_default_str();
  metrics->add_flag("--pairwise", mo.pairwise, "Multiclass SP over class pairs instead of one-vs-rest");

  hetfair::theory::TheoryParams tp;
  double sigma = tp.sigma_l;
  std::vector<double> grid;
  std::size_t trials = 2000;
  auto* theory = app.add_subcommand("theory", "Logit gap sweep over the homophily shift alpha");
  add_common_flags(theory, common);
  theory->add_option("--n", tp.n, "Training nodes")->capture_default_str();
  theory->add_option("--k", tp.k, "Nodes with y = s = 0")->capture_default_str();
  theory->add_option("--degree", tp.d, "Node degree d")->capture_default_str();
  theory->add_option("--homophily", tp.h, "Training homophily h")->capture_default_str();
  theory->add_option("--mu-l", tp.mu_l, "Label feature mean")->capture_default_str();
  theory->add_option("--mu-s", tp.mu_s, "Sensitive feature mean")->capture_default_str();
  theory->add_option("--sigma", sigma, "Feature standard deviation")->capture_default_str();
  theory->add_option("--lambda", tp.lambda_reg, "Ridge strength")->capture_default_str();
  theory->add_option("--alpha", grid, "Alpha grid (default -0.3 to 0.3 by 0.1)");
  theory->add_option("--trials", trials, "Monte Carlo trials per alpha (0 = closed form only)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(in, common);
    if (*generate) return run_generate(in, common, alpha, beta);
    if (*split) return run_split(in, common, gammas, train_frac, val_frac);
    if (*metrics) return run_metrics(mo, common);
    if (*theory) {
      tp.set_sigma(sigma);
      return run_theory(tp, grid, trials, common);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
