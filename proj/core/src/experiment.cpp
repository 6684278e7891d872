#include "bnsl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bnsl/errors.hpp"
#include "bnsl/fixtures.hpp"
#include "bnsl/graph_io.hpp"
#include "bnsl/learn_constraint.hpp"
#include "bnsl/learn_hybrid.hpp"
#include "bnsl/params.hpp"
#include "bnsl/random.hpp"
#include "bnsl/score.hpp"

namespace bnsl {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string_view version() { return BNSL_VERSION; }

// ---------------------------------------------------------------------------
// Enums and synthetic rules

std::string_view to_string(MissingTreatment m) {
  switch (m) {
    case MissingTreatment::None:
      return "none";
    case MissingTreatment::Drop:
      return "drop";
    case MissingTreatment::Impute:
      return "impute";
    case MissingTreatment::Category:
      return "category";
  }
  return "none";
}

MissingTreatment parse_missing(std::string_view name) {
  if (name == "none") return MissingTreatment::None;
  if (name == "drop") return MissingTreatment::Drop;
  if (name == "impute") return MissingTreatment::Impute;
  if (name == "category") return MissingTreatment::Category;
  throw ConfigError("unknown missing-value treatment: " + std::string(name));
}

SyntheticSpec SyntheticDefinition::resolve(const Dataset& data) const {
  SyntheticSpec spec{name, parents, states, {}};
  std::vector<int> idx;
  std::size_t configs = 1;
  for (const auto& p : parents) {
    const int v = data.index_of(p);
    idx.push_back(v);
    configs *= static_cast<std::size_t>(data.cardinality(v));
  }
  auto state_index = [&](const std::string& label) {
    const auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end()) throw ConfigError("synthetic " + name + ": unknown output state '" + label + "'");
    return static_cast<int>(it - states.begin());
  };
  for (const auto& rule : rules) {
    for (const auto& [parent, label] : rule.when) {
      const auto pos = std::find(parents.begin(), parents.end(), parent);
      if (pos == parents.end()) throw ConfigError("synthetic " + name + ": rule names non-parent " + parent);
      const auto& ps = data.variable(idx[static_cast<std::size_t>(pos - parents.begin())]).states;
      if (std::find(ps.begin(), ps.end(), label) == ps.end()) {
        throw ConfigError("synthetic " + name + ": unknown state '" + label + "' of " + parent);
      }
    }
    state_index(rule.value);
  }
  const int fallback_index = state_index(fallback);
  spec.table.resize(configs, fallback_index);
  std::vector<int> config(parents.size(), 0);
  for (std::size_t c = 0; c < configs; ++c) {
    for (const auto& rule : rules) {
      bool match = true;
      for (std::size_t i = 0; i < parents.size() && match; ++i) {
        const auto it = rule.when.find(parents[i]);
        match = it == rule.when.end() || data.variable(idx[i]).states[config[i]] == it->second;
      }
      if (match) {
        spec.table[c] = state_index(rule.value);
        break;
      }
    }
    for (std::size_t i = 0; i < config.size(); ++i) {
      if (++config[i] < data.cardinality(idx[i])) break;
      config[i] = 0;
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Config

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

std::optional<fs::path> get_path(const json& j, const char* key, const fs::path& base) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  fs::path p = j.at(key).get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

json path_json(const std::optional<fs::path>& p) { return p ? json(p->generic_string()) : json(nullptr); }

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "data",          "fixture",   "fixture_rows", "eval_data", "schema",      "synthetic",        "knowledge",
      "reference",     "algorithms", "test",        "alpha",     "max_degree",  "max_conditioning", "tabu_length",
      "tabu_budget",   "folds",     "seed",         "causes",    "target",      "sweep_sizes",      "missing",
      "timing",        "out_dir",   "max_iterations"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key: " + key);
  }

  ExperimentConfig cfg;
  try {
    cfg.data = get_path(j, "data", base_dir);
    if (j.contains("fixture") && !j.at("fixture").is_null()) cfg.fixture = j.at("fixture").get<std::string>();
    cfg.fixture_rows = get_or<std::size_t>(j, "fixture_rows", cfg.fixture_rows);
    cfg.eval_data = get_path(j, "eval_data", base_dir);
    cfg.schema = get_or<Schema>(j, "schema", {});
    if (j.contains("synthetic")) {
      for (const auto& s : j.at("synthetic")) {
        SyntheticDefinition d;
        d.name = s.at("name").get<std::string>();
        d.parents = s.at("parents").get<std::vector<std::string>>();
        d.states = s.at("states").get<std::vector<std::string>>();
        d.fallback = s.at("default").get<std::string>();
        for (const auto& r : s.value("rules", json::array())) {
          d.rules.push_back({r.at("when").get<std::map<std::string, std::string>>(), r.at("value").get<std::string>()});
        }
        cfg.synthetic.push_back(std::move(d));
      }
    }
    cfg.knowledge = get_path(j, "knowledge", base_dir);
    cfg.reference = get_path(j, "reference", base_dir);
    cfg.algorithms = get_or<std::vector<std::string>>(j, "algorithms", {});
    cfg.ci.test = parse_ci_test(get_or<std::string>(j, "test", "g2"));
    cfg.ci.alpha = get_or<double>(j, "alpha", cfg.ci.alpha);
    if (j.contains("max_conditioning") && !j.at("max_conditioning").is_null()) {
      cfg.ci.max_conditioning = j.at("max_conditioning").get<int>();
    }
    if (j.contains("max_degree") && !j.at("max_degree").is_null()) cfg.search.max_degree = j.at("max_degree").get<int>();
    if (j.contains("max_iterations") && !j.at("max_iterations").is_null()) {
      cfg.search.max_iterations = j.at("max_iterations").get<std::size_t>();
    }
    cfg.search.tabu_length = get_or<int>(j, "tabu_length", cfg.search.tabu_length);
    cfg.search.tabu_budget = get_or<int>(j, "tabu_budget", cfg.search.tabu_budget);
    cfg.folds = get_or<int>(j, "folds", cfg.folds);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.search.seed = cfg.seed;
    cfg.causes = get_or<std::vector<std::string>>(j, "causes", {});
    if (j.contains("target") && !j.at("target").is_null()) cfg.target = j.at("target").get<std::string>();
    cfg.sweep_sizes = get_or<std::vector<std::size_t>>(j, "sweep_sizes", {});
    cfg.missing = parse_missing(get_or<std::string>(j, "missing", "none"));
    cfg.timing = get_or<bool>(j, "timing", cfg.timing);
    if (const auto out = get_path(j, "out_dir", base_dir)) cfg.out_dir = *out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  cfg.ci.validate();
  cfg.search.validate();
  if (cfg.folds == 1 || cfg.folds < 0) throw ConfigError("folds must be 0 (disabled) or at least 2");
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string ExperimentConfig::canonical() const {
  json j;
  j["data"] = path_json(data);
  j["fixture"] = fixture ? json(*fixture) : json(nullptr);
  j["fixture_rows"] = fixture_rows;
  j["eval_data"] = path_json(eval_data);
  j["schema"] = schema;
  json syn = json::array();
  for (const auto& s : synthetic) {
    json rules = json::array();
    for (const auto& r : s.rules) rules.push_back({{"when", r.when}, {"value", r.value}});
    syn.push_back({{"name", s.name}, {"parents", s.parents}, {"states", s.states}, {"rules", rules}, {"default", s.fallback}});
  }
  j["synthetic"] = syn;
  j["knowledge"] = path_json(knowledge);
  j["reference"] = path_json(reference);
  j["algorithms"] = algorithms;
  j["test"] = std::string(to_string(ci.test));
  j["alpha"] = ci.alpha;
  j["max_conditioning"] = ci.max_conditioning ? json(*ci.max_conditioning) : json(nullptr);
  j["max_degree"] = search.max_degree ? json(*search.max_degree) : json(nullptr);
  j["max_iterations"] = search.max_iterations ? json(*search.max_iterations) : json(nullptr);
  j["tabu_length"] = search.tabu_length;
  j["tabu_budget"] = search.tabu_budget;
  j["folds"] = folds;
  j["seed"] = seed;
  j["causes"] = causes;
  j["target"] = target ? json(*target) : json(nullptr);
  j["sweep_sizes"] = sweep_sizes;
  j["missing"] = std::string(to_string(missing));
  j["timing"] = timing;
  return j.dump();
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical()); }

// ---------------------------------------------------------------------------
// Learners

const std::vector<std::string>& learner_names() {
  static const std::vector<std::string> names{"pc-stable", "gs",    "iamb",   "hc",    "tabu",    "ges",      "fges3",
                                              "fges4",     "mmhc",  "rsmax2", "empty", "random3", "reference"};
  return names;
}

const std::vector<std::string>& core_learner_names() {
  static const std::vector<std::string> names{"pc-stable", "gs", "iamb", "hc", "tabu", "ges", "mmhc", "rsmax2"};
  return names;
}

LearnerOutput run_learner(std::string_view label, const Dataset& data, const CiConfig& ci, const SearchConfig& search,
                          const Knowledge& k, std::uint64_t seed, const Dag* reference) {
  const auto start = std::chrono::steady_clock::now();
  const int n = data.num_vars();
  LearnerOutput out;
  out.label = std::string(label);
  if (label == "pc-stable") {
    out.graph = pc_stable(data, ci, k);
  } else if (label == "gs") {
    out.graph = grow_shrink(data, ci, k);
  } else if (label == "iamb") {
    out.graph = iamb(data, ci, k);
  } else if (label == "hc") {
    out.graph = Pdag::from_dag(hill_climb(data, search, k));
  } else if (label == "tabu") {
    out.graph = Pdag::from_dag(tabu_search(data, search, k));
  } else if (label == "ges" || label == "fges" || label == "fges3" || label == "fges4") {
    SearchConfig s = search;
    if (label == "fges3") s.max_degree = 3;
    if (label == "fges4") s.max_degree = 4;
    out.graph = ges(data, s, k);
  } else if (label == "mmhc") {
    out.graph = Pdag::from_dag(mmhc(data, ci, search, k));
  } else if (label == "rsmax2") {
    out.graph = Pdag::from_dag(
        restrict_maximize(data, RestrictMethod::HitonStyle, MaximizeMethod::HillClimb, ci, search, k));
  } else if (label == "empty") {
    out.graph = Pdag(n);
  } else if (label == "random3") {
    out.graph = Pdag::from_dag(random_connected_dag(n, 3, 3, mix64(seed ^ 0x72616e646f6d33ULL)));
  } else if (label == "reference") {
    if (!reference) throw ConfigError("the reference baseline needs a reference graph");
    if (reference->size() != n) throw DataError("reference graph does not match the data's variables");
    out.graph = Pdag::from_dag(*reference);
  } else {
    throw ConfigError("unknown algorithm: " + std::string(label));
  }
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::uint64_t evaluation_seed(std::uint64_t seed) { return mix64(seed ^ 0x6576616cULL); }

Dag evaluation_dag(const Pdag& g, std::uint64_t seed) {
  if (g.fully_directed() && g.directed_part_acyclic()) return g.to_dag();
  try {
    return extend_to_dag(g, seed);
  } catch (const UnextendableError&) {
  }
  if (auto d = consistent_extension(g)) return *d;
  Dag d(g.size());
  for (const auto& [a, b] : g.directed_arcs()) {
    if (!d.creates_cycle(a, b)) d.add_arc(a, b);
  }
  for (const auto& [a, b] : g.undirected_edges()) {
    if (!d.creates_cycle(a, b)) {
      d.add_arc(a, b);
    } else if (!d.creates_cycle(b, a)) {
      d.add_arc(b, a);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Evaluation

ReferenceComparison compare_to_reference(const NamedGraph& learned, const NamedGraph& reference) {
  for (const auto& name : reference.names) {
    if (std::find(learned.names.begin(), learned.names.end(), name) == learned.names.end()) {
      throw DataError("reference variable " + name + " is absent from the compared graph");
    }
  }
  const Dag g = induced_subgraph(learned, reference.names);
  ReferenceComparison r;
  r.counts = confusion(g, reference.dag);
  r.pr = precision_recall_f1(r.counts);
  r.shd = shd(g, reference.dag);
  const auto a = r.counts.tp + r.counts.fn;
  const auto pairs = static_cast<std::int64_t>(g.size()) * (g.size() - 1) / 2;
  if (a > 0 && pairs - a > 0) r.bsf = bsf(r.counts, g.size());
  return r;
}

ComparisonReport evaluate(const std::string& label, const Dag& g, const EvaluationContext& ctx, double elapsed) {
  const Dataset& data = *ctx.eval_data;
  ComparisonReport r;
  r.label = label;
  r.fragments = fragments(g);
  r.edges = static_cast<std::int64_t>(g.num_arcs());
  const auto score = graph_bic(data, g);
  r.bic = score.bic;
  r.free_params = score.free_params;
  if (ctx.folds >= 2) r.cv_loss = cv_loss(data, g, ctx.folds, 1.0, ctx.seed);
  if (ctx.reference) {
    const auto cmp = compare_to_reference({label, data.names(), g}, *ctx.reference);
    r.counts = cmp.counts;
    r.pr = cmp.pr;
    r.shd = cmp.shd;
    r.bsf = cmp.bsf;
  }
  if (ctx.target) {
    if (const auto t = data.find(*ctx.target)) {
      std::vector<int> causes;
      for (const auto& c : ctx.causes) {
        if (const auto v = data.find(c)) causes.push_back(*v);
      }
      r.causal_paths = causal_paths(g, causes, *t);
    }
  }
  r.elapsed_seconds = elapsed;
  return r;
}

// ---------------------------------------------------------------------------
// Inputs

namespace {

ParameterizedBn fixture_bn(const std::string& name) {
  if (name == "survey") return fixtures::survey_bn();
  if (name == "chain") return fixtures::chain_bn();
  if (name == "collider") return fixtures::collider_bn();
  throw ConfigError("unknown fixture: " + name);
}

std::uint64_t fixture_sample_seed(std::uint64_t seed) { return mix64(seed ^ 0x73616d706c65ULL); }

Knowledge bind_knowledge(const KnowledgeSpec& spec, const Dataset& data) {
  const auto names = data.names();
  return Knowledge::bind(spec, names);
}

// Keeps only statements whose variables exist in `names`.
KnowledgeSpec restrict_spec(const KnowledgeSpec& spec, const std::vector<std::string>& names, bool tiers, bool required) {
  auto has = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  KnowledgeSpec out;
  if (tiers) {
    for (const auto& [v, t] : spec.tiers) {
      if (has(v)) out.tiers.emplace(v, t);
    }
    for (const auto& arc : spec.forbidden) {
      if (has(arc.first) && has(arc.second)) out.forbidden.insert(arc);
    }
  }
  if (required) {
    for (const auto& arc : spec.required) {
      if (has(arc.first) && has(arc.second)) out.required.insert(arc);
    }
  }
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

fs::path write_file(const fs::path& path, const std::string& content) {
  ensure_dir(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  return path;
}

double timed(const ExperimentConfig& cfg, double seconds) { return cfg.timing ? seconds : 0.0; }

std::vector<std::string> algorithms_or(const ExperimentConfig& cfg, const std::vector<std::string>& fallback) {
  return cfg.algorithms.empty() ? fallback : cfg.algorithms;
}

bool is_baseline(const std::string& label) { return label == "empty" || label == "random3" || label == "reference"; }

std::string graph_stem(const std::string& label) { return label; }

std::vector<fs::path> write_graph(const fs::path& dir, const std::string& label, const Pdag& g,
                                  const std::vector<std::string>& names, const Provenance& prov) {
  std::ostringstream csv;
  write_provenance(csv, prov);
  csv << to_arc_csv(g, names);
  return {write_file(dir / (graph_stem(label) + ".dot"), to_dot(g, names)),
          write_file(dir / (graph_stem(label) + ".arcs.csv"), csv.str())};
}

// The reference baseline needs a DAG over the training variables.
std::optional<Dag> reference_over(const ExperimentInputs& in, const Dataset& data) {
  if (!in.reference) return std::nullopt;
  std::vector<int> index(in.reference->names.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = data.index_of(in.reference->names[i]);
  Dag d(data.num_vars());
  for (const auto& [a, b] : in.reference->dag.arcs()) d.add_arc(index[a], index[b]);
  return d;
}

}  // namespace

Dataset load_raw_data(const ExperimentConfig& cfg) {
  if (cfg.fixture) {
    return forward_sample(fixture_bn(*cfg.fixture), cfg.fixture_rows, fixture_sample_seed(cfg.seed));
  }
  if (!cfg.data) throw ConfigError("no dataset: set `data` or `fixture`");
  return load_csv(*cfg.data, cfg.schema.empty() ? nullptr : &cfg.schema);
}

Dataset apply_missing(const Dataset& data, MissingTreatment m) {
  switch (m) {
    case MissingTreatment::None:
      return data;
    case MissingTreatment::Drop:
      return drop_missing(data);
    case MissingTreatment::Impute:
      return impute_mode(data);
    case MissingTreatment::Category:
      return missing_as_category(data);
  }
  return data;
}

Dataset apply_synthetic(const Dataset& data, const std::vector<SyntheticDefinition>& defs) {
  Dataset out = data;
  for (const auto& d : defs) out = add_synthetic(out, d.resolve(out));
  return out;
}

ExperimentInputs load_inputs(const ExperimentConfig& cfg) {
  ExperimentInputs in;
  in.base = apply_missing(load_raw_data(cfg), cfg.missing);
  in.data = apply_synthetic(in.base, cfg.synthetic);
  if (cfg.eval_data) {
    const Dataset eval_raw = load_csv(*cfg.eval_data, cfg.schema.empty() ? nullptr : &cfg.schema);
    in.eval_data = apply_synthetic(apply_missing(eval_raw, cfg.missing), cfg.synthetic);
    if (in.eval_data.variables() != in.data.variables()) {
      throw DataError("evaluation data does not share the training data's variables and states");
    }
  } else {
    in.eval_data = in.data;
  }
  if (cfg.knowledge) in.knowledge = load_knowledge(*cfg.knowledge);

  const auto base_names = in.base.names();
  if (cfg.reference) {
    if (cfg.reference->extension() == ".bn") {
      const auto bn = load_bn(*cfg.reference);
      std::vector<std::string> names;
      for (const auto& v : bn.variables()) names.push_back(v.name);
      in.reference = NamedGraph{"reference", names, bn.dag()};
    } else {
      const Pdag p = load_arc_csv(cfg.reference->string(), base_names);
      in.reference = NamedGraph{"reference", base_names, evaluation_dag(p, evaluation_seed(cfg.seed))};
    }
  } else if (cfg.fixture) {
    const auto bn = fixture_bn(*cfg.fixture);
    in.reference = NamedGraph{"reference", base_names, bn.dag()};
  }
  return in;
}

Provenance provenance(const ExperimentConfig& cfg) {
  Provenance p;
  p.version = BNSL_VERSION;
  p.seed = cfg.seed;
  p.eval_seed = evaluation_seed(cfg.seed);
  p.config_hash = cfg.hash();
  p.test = std::string(to_string(cfg.ci.test));
  p.missing = std::string(to_string(cfg.missing));
  return p;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

EvaluationContext context_for(const ExperimentConfig& cfg, const ExperimentInputs& in) {
  EvaluationContext ctx;
  ctx.eval_data = &in.eval_data;
  ctx.reference = in.reference ? &*in.reference : nullptr;
  ctx.causes = cfg.causes;
  ctx.target = cfg.target;
  ctx.folds = cfg.folds;
  ctx.seed = cfg.seed;
  return ctx;
}

struct LearnedGraph {
  std::string label;
  Pdag graph;
  Dag dag;
  double elapsed = 0.0;
};

std::vector<LearnedGraph> learn_all(const ExperimentConfig& cfg, const ExperimentInputs& in, const Dataset& train,
                                    const std::vector<std::string>& algorithms) {
  const Knowledge k = bind_knowledge(in.knowledge, train);
  const auto ref = reference_over(in, train);
  std::vector<LearnedGraph> out;
  for (const auto& label : algorithms) {
    if (label == "reference" && !ref) continue;
    auto result = run_learner(label, train, cfg.ci, cfg.search, k, cfg.seed, ref ? &*ref : nullptr);
    Dag dag = evaluation_dag(result.graph, evaluation_seed(cfg.seed));
    out.push_back({label, std::move(result.graph), std::move(dag), timed(cfg, result.elapsed_seconds)});
  }
  return out;
}

std::string report_csv(const Provenance& prov, const std::vector<ComparisonReport>& rows) {
  std::ostringstream out;
  write_provenance(out, prov);
  write_report_csv(out, rows);
  return out.str();
}

std::vector<fs::path> write_matrices(const fs::path& dir, const std::string& prefix, std::span<const NamedGraph> graphs,
                                     const Provenance& prov) {
  std::vector<fs::path> paths;
  for (const auto& [metric, name] : {std::pair{PairMetric::Shd, "shd"}, std::pair{PairMetric::Bsf, "bsf"},
                                     std::pair{PairMetric::F1, "f1"}}) {
    std::ostringstream out;
    write_provenance(out, prov);
    write_matrix_csv(out, pairwise_matrix(graphs, metric));
    paths.push_back(write_file(dir / (prefix + name + ".csv"), out.str()));
  }
  return paths;
}

}  // namespace

std::vector<fs::path> run_learn(const ExperimentConfig& cfg) {
  if (cfg.algorithms.empty()) throw ConfigError("learn needs an algorithm");
  const auto in = load_inputs(cfg);
  const auto prov = provenance(cfg);
  const auto learned = learn_all(cfg, in, in.data, cfg.algorithms);
  const auto ctx = context_for(cfg, in);
  std::vector<fs::path> paths;
  std::vector<ComparisonReport> rows;
  const auto names = in.data.names();
  for (const auto& l : learned) {
    for (auto& p : write_graph(cfg.out_dir, l.label, l.graph, names, prov)) paths.push_back(std::move(p));
    rows.push_back(evaluate(l.label, l.dag, ctx, l.elapsed));
  }
  paths.push_back(write_file(cfg.out_dir / "learn_report.csv", report_csv(prov, rows)));
  return paths;
}

std::vector<fs::path> run_suite(const ExperimentConfig& cfg) {
  const auto in = load_inputs(cfg);
  const auto prov = provenance(cfg);
  const auto learned = learn_all(cfg, in, in.data, algorithms_or(cfg, learner_names()));
  const auto ctx = context_for(cfg, in);
  const auto names = in.data.names();
  std::vector<fs::path> paths;
  std::vector<ComparisonReport> rows;
  std::vector<NamedGraph> graphs;
  for (const auto& l : learned) {
    for (auto& p : write_graph(cfg.out_dir / "graphs", l.label, l.graph, names, prov)) paths.push_back(std::move(p));
    rows.push_back(evaluate(l.label, l.dag, ctx, l.elapsed));
    graphs.push_back({l.label, names, l.dag});
  }
  paths.push_back(write_file(cfg.out_dir / "suite.csv", report_csv(prov, rows)));
  for (auto& p : write_matrices(cfg.out_dir, "pairwise_", graphs, prov)) paths.push_back(std::move(p));
  return paths;
}

std::vector<fs::path> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep_sizes.empty()) throw ConfigError("sweep needs sweep_sizes");
  const auto in = load_inputs(cfg);
  const auto prov = provenance(cfg);
  auto algorithms = algorithms_or(cfg, core_learner_names());
  std::erase_if(algorithms, is_baseline);
  std::ostringstream out;
  write_provenance(out, prov);
  out << "algorithm,n,edges,bic,elapsed_s\n";
  ScoreCache cache(in.eval_data);
  for (const auto n : cfg.sweep_sizes) {
    if (n == 0 || n > in.data.num_rows()) {
      throw ConfigError("sweep size " + std::to_string(n) + " exceeds the dataset's " +
                        std::to_string(in.data.num_rows()) + " rows");
    }
  }
  for (const auto& label : algorithms) {
    for (const auto n : cfg.sweep_sizes) {
      const Dataset train = n == in.data.num_rows() ? in.data : subsample(in.data, n, mix64(cfg.seed ^ n));
      const auto l = learn_all(cfg, in, train, {label});
      const auto& g = l.front();
      out << label << ',' << n << ',' << g.dag.num_arcs() << ',' << format_real(graph_bic(in.eval_data, g.dag, cache).bic, 4)
          << ',' << format_real(g.elapsed, 3) << '\n';
    }
  }
  return {write_file(cfg.out_dir / "sweep.csv", out.str())};
}

std::vector<fs::path> run_knowledge_ablation(const ExperimentConfig& cfg) {
  const auto in = load_inputs(cfg);
  auto prov = provenance(cfg);
  auto algorithms = algorithms_or(cfg, core_learner_names());
  std::erase_if(algorithms, is_baseline);

  struct Condition {
    const char* name;
    bool tiers;
    bool synthetic;
    bool required;
  };
  const Condition conditions[] = {{"none", false, false, false},
                                  {"tiers", true, false, false},
                                  {"tiers+synthetic", true, true, false},
                                  {"tiers+synthetic+required", true, true, true}};

  std::ostringstream grid;
  write_provenance(grid, prov);
  grid << "condition,algorithm,edges,bic,bsf,shd,f1,causal_paths,violations\n";
  std::ostringstream diversity;
  write_provenance(diversity, prov);
  diversity << "condition,mean_bsf,mean_shd,mean_f1\n";

  for (const auto& c : conditions) {
    const Dataset& data = c.synthetic ? in.data : in.base;
    const auto names = data.names();
    ExperimentInputs cond = in;
    cond.knowledge = restrict_spec(in.knowledge, names, c.tiers, c.required);
    const Knowledge k = bind_knowledge(cond.knowledge, data);
    const auto learned = learn_all(cfg, cond, data, algorithms);
    std::vector<NamedGraph> graphs;
    for (const auto& l : learned) {
      graphs.push_back({l.label, names, l.dag});
      grid << c.name << ',' << l.label << ',' << l.dag.num_arcs() << ',' << format_real(graph_bic(data, l.dag).bic, 4) << ',';
      if (in.reference) {
        const auto cmp = compare_to_reference(graphs.back(), *in.reference);
        grid << (cmp.bsf ? format_real(*cmp.bsf, 3) : "") << ',' << cmp.shd << ',' << format_real(cmp.pr.f1, 3);
      } else {
        grid << ",,";
      }
      grid << ',';
      if (cfg.target && data.find(*cfg.target)) {
        std::vector<int> causes;
        for (const auto& name : cfg.causes) {
          if (const auto v = data.find(name)) causes.push_back(*v);
        }
        grid << causal_paths(l.dag, causes, data.index_of(*cfg.target));
      }
      grid << ',' << validate_output(k, l.graph).size() << '\n';
    }
    diversity << c.name << ',' << format_real(pairwise_matrix(graphs, PairMetric::Bsf).mean, 4) << ','
              << format_real(pairwise_matrix(graphs, PairMetric::Shd).mean, 4) << ','
              << format_real(pairwise_matrix(graphs, PairMetric::F1).mean, 4) << '\n';
  }
  return {write_file(cfg.out_dir / "ablation.csv", grid.str()),
          write_file(cfg.out_dir / "ablation_diversity.csv", diversity.str())};
}

std::vector<fs::path> run_missing_ablation(const ExperimentConfig& cfg) {
  const Dataset raw = load_raw_data(cfg);
  const Dataset dropped = drop_missing(raw);
  Dataset imputed = impute_mode(raw);
  if (dropped.num_rows() < imputed.num_rows()) {
    imputed = subsample(imputed, dropped.num_rows(), mix64(cfg.seed ^ 0x6d697373ULL));
  }
  auto prov = provenance(cfg);
  prov.missing = "drop vs impute";
  prov.extra.emplace("rows_with_missing", std::to_string(raw.num_rows() - dropped.num_rows()));

  ExperimentInputs base;
  base.base = dropped;
  base.data = apply_synthetic(dropped, cfg.synthetic);
  base.eval_data = base.data;
  if (cfg.knowledge) base.knowledge = load_knowledge(*cfg.knowledge);
  ExperimentInputs imp = base;
  imp.base = imputed;
  imp.data = apply_synthetic(imputed, cfg.synthetic);
  imp.eval_data = imp.data;

  auto algorithms = algorithms_or(cfg, core_learner_names());
  std::erase_if(algorithms, is_baseline);
  std::ostringstream out;
  write_provenance(out, prov);
  out << "algorithm,rows_drop,rows_impute,edges_drop,edges_impute,bsf,shd,f1\n";
  const auto names = base.data.names();
  for (const auto& label : algorithms) {
    const auto a = learn_all(cfg, base, base.data, {label}).front();
    const auto b = learn_all(cfg, imp, imp.data, {label}).front();
    const auto cmp = compare_to_reference({label, names, b.dag}, {label, names, a.dag});
    out << label << ',' << base.data.num_rows() << ',' << imp.data.num_rows() << ',' << a.dag.num_arcs() << ','
        << b.dag.num_arcs() << ',' << (cmp.bsf ? format_real(*cmp.bsf, 3) : "") << ',' << cmp.shd << ','
        << format_real(cmp.pr.f1, 3) << '\n';
  }
  return {write_file(cfg.out_dir / "missing.csv", out.str())};
}

namespace {

// Variables named in any of the arc files, sorted. Used when compare runs
// without a dataset; variables isolated in every graph are not seen.
std::vector<std::string> arc_file_names(const std::vector<fs::path>& paths) {
  std::set<std::string> names;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open graph: " + p.string());
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      std::stringstream row(line);
      std::string parent, child;
      std::getline(row, parent, ',');
      std::getline(row, child, ',');
      names.insert(parent);
      names.insert(child);
    }
  }
  return {names.begin(), names.end()};
}

}  // namespace

std::vector<fs::path> run_compare(const ExperimentConfig& cfg, const std::vector<fs::path>& graph_paths) {
  if (graph_paths.size() < 2) throw ConfigError("compare needs at least two graphs");
  const auto names = (cfg.data || cfg.fixture) ? load_inputs(cfg).data.names() : arc_file_names(graph_paths);
  std::vector<NamedGraph> graphs;
  for (const auto& p : graph_paths) {
    std::string label = p.filename().string();
    if (const auto dot = label.find('.'); dot != std::string::npos) label.erase(dot);
    const Pdag g = load_arc_csv(p.string(), names);
    graphs.push_back({label, names, evaluation_dag(g, evaluation_seed(cfg.seed))});
  }
  return write_matrices(cfg.out_dir, "compare_", graphs, provenance(cfg));
}

std::vector<fs::path> run_sample(const fs::path& bn_path, std::size_t rows, std::uint64_t seed, const fs::path& out_dir) {
  if (rows == 0) throw ConfigError("sample needs a positive row count");
  const auto bn = load_bn(bn_path);
  const Dataset data = forward_sample(bn, rows, seed);
  std::ostringstream out;
  out << "# tool: bnsl " << BNSL_VERSION << '\n';
  out << "# seed: " << seed << '\n';
  out << "# network: " << bn_path.filename().string() << '\n';
  write_csv(out, data);
  return {write_file(out_dir / "sample.csv", out.str())};
}

std::vector<fs::path> run_rank(const ExperimentConfig& cfg) {
  if (!cfg.target) throw ConfigError("rank needs a target");
  const auto in = load_inputs(cfg);
  const auto ranks = rank_features(in.data, in.data.index_of(*cfg.target));
  std::ostringstream out;
  write_provenance(out, provenance(cfg));
  out << "variable,information_gain,correlation\n";
  for (const auto& r : ranks) {
    out << in.data.variable(r.variable).name << ',' << format_real(r.information_gain, 6) << ','
        << format_real(r.correlation, 6) << '\n';
  }
  return {write_file(cfg.out_dir / "rank.csv", out.str())};
}

}  // namespace bnsl
