#include "bnsl/params.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bnsl/errors.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

std::size_t Cpt::rows() const {
  std::size_t r = 1;
  for (const int c : parent_cards) r *= static_cast<std::size_t>(c);
  return r;
}

std::size_t Cpt::row_index(std::span<const int> parent_states) const {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < parent_cards.size(); ++i) {
    idx += static_cast<std::size_t>(parent_states[i]) * stride;
    stride *= static_cast<std::size_t>(parent_cards[i]);
  }
  return idx;
}

void Cpt::validate() const {
  if (child_card < 1 || parents.size() != parent_cards.size() ||
      probs.size() != rows() * static_cast<std::size_t>(child_card)) {
    throw DataError("CPT dimensions do not match");
  }
  for (std::size_t r = 0; r < rows(); ++r) {
    double sum = 0.0;
    for (int s = 0; s < child_card; ++s) {
      const double p = prob(r, s);
      if (!(p >= 0.0)) throw DataError("CPT entry is negative or NaN");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DataError("CPT row does not sum to 1");
  }
}

ParameterizedBn::ParameterizedBn(std::vector<Variable> variables, Dag dag, std::vector<Cpt> cpts)
    : variables_(std::move(variables)), dag_(std::move(dag)), cpts_(std::move(cpts)) {
  const int n = dag_.size();
  if (static_cast<int>(variables_.size()) != n || static_cast<int>(cpts_.size()) != n) {
    throw DataError("network needs one variable and one CPT per node");
  }
  for (int v = 0; v < n; ++v) {
    const Cpt& c = cpts_[v];
    if (c.child != v || c.parents != dag_.parents(v) || c.child_card != variables_[v].cardinality()) {
      throw DataError("CPT of " + variables_[v].name + " does not match the graph");
    }
    for (std::size_t i = 0; i < c.parents.size(); ++i) {
      if (c.parent_cards[i] != variables_[c.parents[i]].cardinality()) {
        throw DataError("CPT of " + variables_[v].name + " has a wrong parent cardinality");
      }
    }
    c.validate();
  }
}

double ParameterizedBn::log_prob(std::span<const int> row) const {
  double lp = 0.0;
  std::vector<int> ps;
  for (int v = 0; v < size(); ++v) {
    const Cpt& c = cpts_[v];
    ps.clear();
    for (const int p : c.parents) ps.push_back(row[p]);
    lp += std::log(c.prob(c.row_index(ps), row[v]));
  }
  return lp;
}

ParameterizedBn fit_mle(const Dataset& data, const Dag& g, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("fit_mle: alpha must be non-negative");
  const int n = data.num_vars();
  if (g.size() != n) throw std::invalid_argument("fit_mle: graph size does not match data");
  if (data.has_missing()) throw DataError("fit_mle requires complete data");
  std::vector<Cpt> cpts(n);
  for (int v = 0; v < n; ++v) {
    Cpt& c = cpts[v];
    c.child = v;
    c.parents = g.parents(v);
    c.child_card = data.cardinality(v);
    for (const int p : c.parents) c.parent_cards.push_back(data.cardinality(p));
    const std::size_t rows = c.rows();
    const auto r = static_cast<std::size_t>(c.child_card);
    if (rows > (std::size_t{1} << 24) / r) throw DataError("CPT of " + data.variable(v).name + " is too large");

    std::vector<double> counts(rows * r, 0.0);
    const auto child_col = data.column(v);
    std::vector<std::size_t> row_of(data.num_rows(), 0);
    std::size_t stride = 1;
    for (std::size_t i = 0; i < c.parents.size(); ++i) {
      const auto col = data.column(c.parents[i]);
      for (std::size_t row = 0; row < data.num_rows(); ++row) row_of[row] += static_cast<std::size_t>(col[row]) * stride;
      stride *= static_cast<std::size_t>(c.parent_cards[i]);
    }
    for (std::size_t row = 0; row < data.num_rows(); ++row) {
      counts[row_of[row] * r + static_cast<std::size_t>(child_col[row])] += 1.0;
    }
    c.probs.assign(rows * r, 0.0);
    for (std::size_t u = 0; u < rows; ++u) {
      double total = 0.0;
      for (std::size_t s = 0; s < r; ++s) total += counts[u * r + s];
      const double denom = total + alpha * static_cast<double>(r);
      for (std::size_t s = 0; s < r; ++s) {
        c.probs[u * r + s] = denom > 0.0 ? (counts[u * r + s] + alpha) / denom : 1.0 / static_cast<double>(r);
      }
    }
  }
  return ParameterizedBn(data.variables(), g, std::move(cpts));
}

Dataset forward_sample(const ParameterizedBn& bn, std::size_t n, std::uint64_t seed) {
  const int vars = bn.size();
  const auto order = bn.dag().topological_order();
  std::vector<std::vector<int>> columns(vars, std::vector<int>(n, 0));
  Rng rng(seed);
  std::vector<int> ps;
  for (std::size_t row = 0; row < n; ++row) {
    for (const int v : order) {
      const Cpt& c = bn.cpt(v);
      ps.clear();
      for (const int p : c.parents) ps.push_back(columns[p][row]);
      const std::size_t u = c.row_index(ps);
      const double draw = rng.uniform();
      double cum = 0.0;
      int state = -1;
      for (int s = 0; s < c.child_card; ++s) {
        const double p = c.prob(u, s);
        if (p <= 0.0) continue;
        cum += p;
        state = s;
        if (draw < cum) break;
      }
      columns[v][row] = state;
    }
  }
  return Dataset(bn.variables(), std::move(columns));
}

double mean_negative_log_likelihood(const Dataset& data, const ParameterizedBn& bn) {
  if (data.num_rows() == 0) throw DataError("no rows to score");
  std::vector<int> row(data.num_vars());
  double total = 0.0;
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (int v = 0; v < data.num_vars(); ++v) row[v] = data.at(r, v);
    total -= bn.log_prob(row);
  }
  return total / static_cast<double>(data.num_rows());
}

double cv_loss(const Dataset& data, const Dag& g, int folds, double alpha, std::uint64_t seed) {
  const std::size_t n = data.num_rows();
  if (folds < 2 || static_cast<std::size_t>(folds) > n) throw std::invalid_argument("cv_loss: need 2 <= folds <= rows");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));

  const auto k = static_cast<std::size_t>(folds);
  double total = 0.0;
  std::vector<int> row(data.num_vars());
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t lo = f * n / k;
    const std::size_t hi = (f + 1) * n / k;
    std::vector<std::size_t> train;
    train.reserve(n - (hi - lo));
    train.insert(train.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(lo));
    train.insert(train.end(), perm.begin() + static_cast<std::ptrdiff_t>(hi), perm.end());
    const auto bn = fit_mle(data.select_rows(train), g, alpha);
    for (std::size_t i = lo; i < hi; ++i) {
      for (int v = 0; v < data.num_vars(); ++v) row[v] = data.at(perm[i], v);
      total -= bn.log_prob(row);
    }
  }
  return total / static_cast<double>(n);
}

namespace {

void check_token(const std::string& s) {
  if (s.empty() || s.find_first_of(" \t\r\n:#") != std::string::npos) {
    throw DataError("name or state not representable in network format: '" + s + "'");
  }
}

std::string format_prob(double p) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_bn(std::ostream& out, const ParameterizedBn& bn) {
  const auto& vars = bn.variables();
  for (const auto& v : vars) {
    check_token(v.name);
    out << "variable " << v.name;
    for (const auto& s : v.states) {
      check_token(s);
      out << ' ' << s;
    }
    out << '\n';
  }
  for (const auto& [a, b] : bn.dag().arcs()) out << "arc " << vars[a].name << ' ' << vars[b].name << '\n';
  for (int v = 0; v < bn.size(); ++v) {
    const Cpt& c = bn.cpt(v);
    out << "cpt " << vars[v].name << '\n';
    std::vector<int> ps(c.parents.size(), 0);
    for (std::size_t u = 0; u < c.rows(); ++u) {
      for (std::size_t i = 0; i < ps.size(); ++i) out << vars[c.parents[i]].states[ps[i]] << ' ';
      out << ':';
      for (int s = 0; s < c.child_card; ++s) out << ' ' << format_prob(c.prob(u, s));
      out << '\n';
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (++ps[i] < c.parent_cards[i]) break;
        ps[i] = 0;
      }
    }
  }
}

ParameterizedBn read_bn(std::istream& in) {
  std::vector<Variable> vars;
  std::map<std::string, int> index;
  std::vector<Arc> arcs;
  std::vector<Cpt> cpts;
  std::vector<char> seen;
  Dag dag;
  bool graph_built = false;
  int current = -1;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& msg) -> DataError {
    return DataError("network line " + std::to_string(line_no) + ": " + msg);
  };
  auto lookup = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw fail("unknown variable '" + name + "'");
    return it->second;
  };
  auto build_graph = [&] {
    if (graph_built) return;
    if (!is_acyclic(arcs, static_cast<int>(vars.size()))) throw fail("arcs form a cycle");
    dag = Dag(static_cast<int>(vars.size()), arcs);
    cpts.resize(vars.size());
    seen.assign(vars.size(), 0);
    for (int v = 0; v < static_cast<int>(vars.size()); ++v) {
      Cpt& c = cpts[v];
      c.child = v;
      c.parents = dag.parents(v);
      c.child_card = vars[v].cardinality();
      for (const int p : c.parents) c.parent_cards.push_back(vars[p].cardinality());
      c.probs.assign(c.rows() * static_cast<std::size_t>(c.child_card), -1.0);
    }
    graph_built = true;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "variable") {
      if (graph_built) throw fail("variable after cpt block");
      Variable v;
      if (!(ls >> v.name)) throw fail("missing variable name");
      for (std::string s; ls >> s;) v.states.push_back(s);
      if (v.states.size() < 2) throw fail("variable needs at least two states");
      if (!index.emplace(v.name, static_cast<int>(vars.size())).second) throw fail("duplicate variable");
      vars.push_back(std::move(v));
    } else if (head == "arc") {
      if (graph_built) throw fail("arc after cpt block");
      std::string a, b;
      if (!(ls >> a >> b)) throw fail("arc needs two names");
      arcs.emplace_back(lookup(a), lookup(b));
    } else if (head == "cpt") {
      build_graph();
      std::string name;
      if (!(ls >> name)) throw fail("cpt needs a variable name");
      current = lookup(name);
      if (seen[current]) throw fail("duplicate cpt block");
      seen[current] = 1;
    } else {
      if (current < 0) throw fail("probability row outside a cpt block");
      Cpt& c = cpts[current];
      std::istringstream rs(line);
      std::vector<int> ps;
      std::string tok;
      while (rs >> tok && tok != ":") {
        if (ps.size() >= c.parents.size()) throw fail("too many parent states");
        const auto& states = vars[c.parents[ps.size()]].states;
        const auto it = std::find(states.begin(), states.end(), tok);
        if (it == states.end()) throw fail("unknown parent state '" + tok + "'");
        ps.push_back(static_cast<int>(it - states.begin()));
      }
      if (tok != ":" || ps.size() != c.parents.size()) throw fail("malformed probability row");
      const std::size_t u = c.row_index(ps);
      for (int s = 0; s < c.child_card; ++s) {
        std::string p;
        if (!(rs >> p)) throw fail("too few probabilities");
        try {
          std::size_t used = 0;
          c.probs[u * static_cast<std::size_t>(c.child_card) + static_cast<std::size_t>(s)] = std::stod(p, &used);
          if (used != p.size()) throw std::invalid_argument(p);
        } catch (const std::logic_error&) {
          throw fail("bad probability '" + p + "'");
        }
      }
      if (rs >> tok) throw fail("too many probabilities");
    }
  }
  build_graph();
  for (std::size_t v = 0; v < cpts.size(); ++v) {
    for (const double p : cpts[v].probs) {
      if (p < 0.0) throw DataError("network: incomplete cpt for " + vars[v].name);
    }
  }
  return ParameterizedBn(std::move(vars), std::move(dag), std::move(cpts));
}

ParameterizedBn load_bn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open network file: " + path.string());
  return read_bn(in);
}

void save_bn(const std::filesystem::path& path, const ParameterizedBn& bn) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write network file: " + path.string());
  write_bn(out, bn);
}

}  // namespace bnsl
