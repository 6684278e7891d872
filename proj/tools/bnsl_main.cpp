// Command-line front end for the bnsl experiment runner.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnsl/errors.hpp"
#include "bnsl/experiment.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

// Flag values; unset options leave the config file's values alone.
struct Overrides {
  std::optional<fs::path> config;
  std::optional<fs::path> data;
  std::optional<std::string> fixture;
  std::optional<std::size_t> fixture_rows;
  std::optional<fs::path> knowledge;
  std::optional<fs::path> reference;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out_dir;
  std::vector<std::string> algorithms;
  std::optional<double> alpha;
  std::optional<std::string> test;
  std::optional<int> max_degree;
  std::optional<int> folds;
  std::optional<std::string> missing;
  std::optional<std::string> target;
  std::vector<std::string> causes;
  std::vector<std::size_t> sizes;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--data", o.data, "CSV dataset");
  cmd->add_option("--fixture", o.fixture, "bundled network to sample from (survey, chain, collider)");
  cmd->add_option("--fixture-rows", o.fixture_rows, "rows sampled from the fixture");
  cmd->add_option("--knowledge", o.knowledge, "knowledge file");
  cmd->add_option("--reference", o.reference, "reference graph (.bn or arc-list CSV)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--algo", o.algorithms, "algorithm label (repeatable)");
  cmd->add_option("--alpha", o.alpha, "significance level for CI tests");
  cmd->add_option("--test", o.test, "CI test: chi2 or g2");
  cmd->add_option("--max-degree", o.max_degree, "node degree cap for score searches");
  cmd->add_option("--folds", o.folds, "cross-validation folds (0 disables)");
  cmd->add_option("--missing", o.missing, "missing-value treatment: none, drop, impute, category");
  cmd->add_option("--target", o.target, "target variable for causal paths and ranking");
  cmd->add_option("--causes", o.causes, "candidate cause variables");
  cmd->add_option("--sizes", o.sizes, "sample sizes for sweep");
  cmd->add_flag("--no-timing", o.no_timing, "write 0 for elapsed times");
}

bnsl::ExperimentConfig resolve(const Overrides& o) {
  bnsl::ExperimentConfig cfg = o.config ? bnsl::load_config(*o.config) : bnsl::ExperimentConfig{};
  if (o.data) {
    cfg.data = *o.data;
    cfg.fixture.reset();
  }
  if (o.fixture) cfg.fixture = *o.fixture;
  if (o.fixture_rows) cfg.fixture_rows = *o.fixture_rows;
  if (o.knowledge) cfg.knowledge = *o.knowledge;
  if (o.reference) cfg.reference = *o.reference;
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.search.seed = *o.seed;
  }
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (!o.algorithms.empty()) cfg.algorithms = o.algorithms;
  if (o.alpha) cfg.ci.alpha = *o.alpha;
  if (o.test) cfg.ci.test = bnsl::parse_ci_test(*o.test);
  if (o.max_degree) cfg.search.max_degree = *o.max_degree;
  if (o.folds) cfg.folds = *o.folds;
  if (o.missing) cfg.missing = bnsl::parse_missing(*o.missing);
  if (o.target) cfg.target = *o.target;
  if (!o.causes.empty()) cfg.causes = o.causes;
  if (!o.sizes.empty()) cfg.sweep_sizes = o.sizes;
  if (o.no_timing) cfg.timing = false;
  cfg.ci.validate();
  cfg.search.validate();
  if (cfg.folds == 1 || cfg.folds < 0) throw bnsl::ConfigError("folds must be 0 (disabled) or at least 2");
  return cfg;
}

void report(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian network structure learning experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bnsl::version()));

  Overrides o;
  auto* learn = app.add_subcommand("learn", "learn graphs with the given algorithms");
  auto* suite = app.add_subcommand("suite", "multi-algorithm comparison report");
  auto* sweep = app.add_subcommand("sweep", "sample-size sweep");
  auto* ablate_k = app.add_subcommand("ablate-knowledge", "knowledge-constraint ablation");
  auto* ablate_m = app.add_subcommand("ablate-missing", "drop versus impute ablation");
  auto* compare = app.add_subcommand("compare", "pairwise matrices between arc-list graphs");
  auto* rank = app.add_subcommand("rank", "rank variables by information gain against a target");
  for (auto* cmd : {learn, suite, sweep, ablate_k, ablate_m, compare, rank}) add_common(cmd, o);

  std::vector<fs::path> graphs;
  compare->add_option("graphs", graphs, "arc-list CSV files")->required();

  auto* sample = app.add_subcommand("sample", "forward-sample a network file");
  fs::path bn_path;
  std::size_t rows = 0;
  std::uint64_t sample_seed = 1;
  fs::path sample_out = "out";
  sample->add_option("--bn", bn_path, "network file")->required();
  sample->add_option("--n", rows, "rows to draw")->required();
  sample->add_option("--seed", sample_seed, "random seed");
  sample->add_option("--out-dir", sample_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (sample->parsed()) {
      report(bnsl::run_sample(bn_path, rows, sample_seed, sample_out));
      return 0;
    }
    const auto cfg = resolve(o);
    if (learn->parsed()) report(bnsl::run_learn(cfg));
    if (suite->parsed()) report(bnsl::run_suite(cfg));
    if (sweep->parsed()) report(bnsl::run_sweep(cfg));
    if (ablate_k->parsed()) report(bnsl::run_knowledge_ablation(cfg));
    if (ablate_m->parsed()) report(bnsl::run_missing_ablation(cfg));
    if (compare->parsed()) report(bnsl::run_compare(cfg, graphs));
    if (rank->parsed()) report(bnsl::run_rank(cfg));
  } catch (const bnsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const bnsl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
