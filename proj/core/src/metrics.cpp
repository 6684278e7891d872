#include "bnsl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bnsl {
namespace {

void check_sizes(const Dag& g, const Dag& ref) {
  if (g.size() != ref.size()) throw std::invalid_argument("graphs have different variable counts");
}

std::int64_t pair_count(int n) { return static_cast<std::int64_t>(n) * (n - 1) / 2; }

int pair_status(const Dag& g, int a, int b) {
  if (g.has_arc(a, b)) return 1;
  if (g.has_arc(b, a)) return 2;
  return 0;
}

}  // namespace

ConfusionCounts confusion(const Dag& g, const Dag& ref) {
  check_sizes(g, ref);
  ConfusionCounts c;
  for (const auto& [a, b] : g.arcs()) {
    if (ref.has_arc(a, b)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<std::int64_t>(ref.num_arcs()) - c.tp;
  const int n = g.size();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!g.adjacent(a, b) && !ref.adjacent(a, b)) ++c.tn;
    }
  }
  return c;
}

PrecisionRecall precision_recall_f1(const ConfusionCounts& c) {
  PrecisionRecall r;
  if (c.tp + c.fp > 0) r.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) r.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (r.precision + r.recall > 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

int shd(const Dag& g, const Dag& ref) {
  check_sizes(g, ref);
  int d = 0;
  for (int a = 0; a < g.size(); ++a) {
    for (int b = a + 1; b < g.size(); ++b) d += pair_status(g, a, b) != pair_status(ref, a, b) ? 1 : 0;
  }
  return d;
}

double bsf(const ConfusionCounts& c, int n) {
  const double a = static_cast<double>(c.tp + c.fn);
  const double i = static_cast<double>(pair_count(n)) - a;
  if (a <= 0.0 || i <= 0.0) throw std::invalid_argument("bsf needs a reference with at least one arc and one non-adjacent pair");
  return 0.5 * (static_cast<double>(c.tp) / a + static_cast<double>(c.tn) / i - static_cast<double>(c.fp) / i -
                static_cast<double>(c.fn) / a);
}

double bsf(const Dag& g, const Dag& ref) { return bsf(confusion(g, ref), g.size()); }

int causal_paths(const Dag& g, std::span<const int> causes, int target) {
  const auto anc = g.ancestors(target);
  int count = 0;
  for (const int c : causes) {
    if (c != target && std::binary_search(anc.begin(), anc.end(), c)) ++count;
  }
  return count;
}

Dag induced_subgraph(const NamedGraph& g, std::span<const std::string> keep) {
  std::vector<int> index_of(g.names.size(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto it = std::find(g.names.begin(), g.names.end(), keep[k]);
    if (it == g.names.end()) throw std::invalid_argument("unknown variable " + keep[k]);
    index_of[static_cast<std::size_t>(it - g.names.begin())] = static_cast<int>(k);
  }
  std::vector<Arc> arcs;
  for (const auto& [a, b] : g.dag.arcs()) {
    if (index_of[a] >= 0 && index_of[b] >= 0) arcs.emplace_back(index_of[a], index_of[b]);
  }
  return Dag(static_cast<int>(keep.size()), arcs);
}

PairwiseMatrix pairwise_matrix(std::span<const NamedGraph> graphs, PairMetric metric) {
  PairwiseMatrix m;
  m.metric = metric;
  if (graphs.empty()) return m;
  for (const auto& name : graphs.front().names) {
    const bool everywhere = std::all_of(graphs.begin(), graphs.end(), [&](const NamedGraph& g) {
      return std::find(g.names.begin(), g.names.end(), name) != g.names.end();
    });
    if (everywhere) m.shared_variables.push_back(name);
  }
  std::vector<Dag> dags;
  for (const auto& g : graphs) {
    m.labels.push_back(g.label);
    if (g.names.size() != m.shared_variables.size()) m.restricted = true;
    dags.push_back(induced_subgraph(g, m.shared_variables));
  }

  const std::size_t k = graphs.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.values.assign(k, std::vector<double>(k, 0.0));
  double sum = 0.0;
  std::size_t terms = 0;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      double v = 0.0;
      switch (metric) {
        case PairMetric::Shd:
          v = shd(dags[c], dags[r]);
          break;
        case PairMetric::F1:
          v = precision_recall_f1(confusion(dags[c], dags[r])).f1;
          break;
        case PairMetric::Bsf: {
          const auto cc = confusion(dags[c], dags[r]);
          const auto a = cc.tp + cc.fn;
          const auto i = pair_count(dags[r].size()) - a;
          v = (a > 0 && i > 0) ? bsf(cc, dags[r].size()) : nan;
          break;
        }
      }
      m.values[r][c] = v;
      if (r != c && !std::isnan(v)) {
        sum += v;
        ++terms;
      }
    }
  }
  m.mean = terms > 0 ? sum / static_cast<double>(terms) : nan;
  return m;
}

std::string format_real(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_matrix_csv(std::ostream& out, const PairwiseMatrix& m) {
  const char* metric = m.metric == PairMetric::Shd ? "shd" : m.metric == PairMetric::Bsf ? "bsf" : "f1";
  out << "# metric: " << metric << '\n';
  out << "# rows: reference, columns: compared graph\n";
  if (m.restricted) out << "# restricted to " << m.shared_variables.size() << " shared variables\n";
  out << "# mean_off_diagonal: " << format_real(m.mean) << '\n';
  out << "graph";
  for (const auto& l : m.labels) out << ',' << l;
  out << '\n';
  for (std::size_t r = 0; r < m.labels.size(); ++r) {
    out << m.labels[r];
    for (const double v : m.values[r]) out << ',' << format_real(v, m.metric == PairMetric::Shd ? 0 : 6);
    out << '\n';
  }
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_provenance(std::ostream& out, const Provenance& p) {
  out << "# tool: bnsl " << p.version << '\n';
  out << "# seed: " << p.seed << '\n';
  out << "# eval_seed: " << p.eval_seed << '\n';
  out << "# config_hash: " << p.config_hash << '\n';
  out << "# test: " << p.test << '\n';
  out << "# score: " << p.score << '\n';
  out << "# missing: " << p.missing << '\n';
  for (const auto& [k, v] : p.extra) out << "# " << k << ": " << v << '\n';
}

void write_report_csv(std::ostream& out, std::span<const ComparisonReport> rows) {
  out << "label,fragments,edges,free_params,bic,cv_loss,tp,fp,fn,precision,recall,f1,shd,bsf,causal_paths,elapsed_s\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.fragments << ',' << r.edges << ',' << r.free_params << ',' << format_real(r.bic, 4) << ',';
    if (r.cv_loss) out << format_real(*r.cv_loss);
    out << ',';
    if (r.counts) out << r.counts->tp << ',' << r.counts->fp << ',' << r.counts->fn;
    else out << ",,";
    out << ',';
    if (r.pr) out << format_real(r.pr->precision, 3) << ',' << format_real(r.pr->recall, 3) << ',' << format_real(r.pr->f1, 3);
    else out << ",,";
    out << ',';
    if (r.shd) out << *r.shd;
    out << ',';
    if (r.bsf) out << format_real(*r.bsf, 3);
    out << ',';
    if (r.causal_paths) out << *r.causal_paths;
    out << ',' << format_real(r.elapsed_seconds, 3) << '\n';
  }
}

}  // namespace bnsl
