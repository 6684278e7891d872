#include "bnsl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "bnsl/errors.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<Variable> variables, std::vector<std::vector<int>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
  if (variables_.size() != columns_.size()) throw DataError("dataset: variable and column counts differ");
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::set<std::string> seen;
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    const auto& var = variables_[v];
    if (!seen.insert(var.name).second) throw DataError("dataset: duplicate variable name '" + var.name + "'");
    std::set<std::string> labels(var.states.begin(), var.states.end());
    if (labels.size() != var.states.size()) throw DataError("dataset: duplicate state label in '" + var.name + "'");
    if (columns_[v].size() != rows_) throw DataError("dataset: ragged columns");
    const int card = var.cardinality();
    for (int x : columns_[v]) {
      if (x != kMissing && (x < 0 || x >= card)) {
        throw DataError("dataset: state index out of range in '" + var.name + "'");
      }
    }
  }
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

std::optional<int> Dataset::find(std::string_view name) const {
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (variables_[v].name == name) return static_cast<int>(v);
  }
  return std::nullopt;
}

int Dataset::index_of(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw DataError("unknown variable '" + std::string(name) + "'");
}

std::size_t Dataset::missing_count(int v) const {
  return static_cast<std::size_t>(std::count(columns_[v].begin(), columns_[v].end(), kMissing));
}

bool Dataset::has_missing() const {
  for (int v = 0; v < num_vars(); ++v) {
    if (missing_count(v) > 0) return true;
  }
  return false;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<int>> cols(columns_.size());
  for (std::size_t v = 0; v < columns_.size(); ++v) {
    cols[v].reserve(rows.size());
    for (std::size_t r : rows) cols[v].push_back(columns_[v].at(r));
  }
  return Dataset(variables_, std::move(cols));
}

Dataset Dataset::select_columns(std::span<const int> vars) const {
  std::vector<Variable> vs;
  std::vector<std::vector<int>> cols;
  for (int v : vars) {
    vs.push_back(variables_.at(v));
    cols.push_back(columns_.at(v));
  }
  return Dataset(std::move(vs), std::move(cols));
}

Dataset Dataset::with_column(Variable variable, std::vector<int> column) const {
  auto vs = variables_;
  auto cols = columns_;
  vs.push_back(std::move(variable));
  cols.push_back(std::move(column));
  return Dataset(std::move(vs), std::move(cols));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

// One CSV record; handles double-quoted fields with "" escapes.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  std::string field;
  bool quoted = false;
  for (;;) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c != '\r') {
        field += c;
      }
    }
    if (!quoted) break;
    field += '\n';
    if (!std::getline(in, line)) throw DataError("csv: unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

bool is_missing_token(const std::string& s) { return s.empty() || s == "?"; }

std::optional<double> as_number(const std::string& s) {
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

// Observed labels sorted numerically when every label is a number, otherwise
// lexicographically.
std::vector<std::string> order_labels(const std::set<std::string>& labels) {
  std::vector<std::string> out(labels.begin(), labels.end());
  bool numeric = std::all_of(out.begin(), out.end(), [](const std::string& s) { return as_number(s).has_value(); });
  if (numeric) {
    std::stable_sort(out.begin(), out.end(),
                     [](const std::string& a, const std::string& b) { return *as_number(a) < *as_number(b); });
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

Dataset read_csv(std::istream& in, const Schema* schema) {
  std::vector<std::string> header;
  do {
    if (!read_record(in, header)) throw DataError("csv: missing header row");
  } while (!header.empty() && !header[0].empty() && header[0].front() == '#');
  for (auto& h : header) h = trim(h);
  const std::size_t p = header.size();
  std::vector<std::vector<std::string>> raw(p);
  std::vector<std::string> fields;
  std::size_t line = 1;
  while (read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() != p) {
      throw DataError("csv line " + std::to_string(line) + ": expected " + std::to_string(p) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < p; ++c) raw[c].push_back(trim(fields[c]));
  }

  std::vector<Variable> vars(p);
  std::vector<std::vector<int>> cols(p);
  for (std::size_t c = 0; c < p; ++c) {
    vars[c].name = header[c];
    const std::vector<std::string>* declared = nullptr;
    if (schema) {
      auto it = schema->find(header[c]);
      if (it != schema->end()) declared = &it->second;
    }
    if (declared) {
      vars[c].states = *declared;
    } else {
      std::set<std::string> labels;
      for (const auto& s : raw[c]) {
        if (!is_missing_token(s)) labels.insert(s);
      }
      vars[c].states = order_labels(labels);
    }
    if (vars[c].states.size() < 2) {
      throw DataError("csv: variable '" + header[c] + "' has fewer than 2 states");
    }
    std::unordered_map<std::string, int> code;
    for (std::size_t s = 0; s < vars[c].states.size(); ++s) code.emplace(vars[c].states[s], static_cast<int>(s));
    cols[c].reserve(raw[c].size());
    for (std::size_t r = 0; r < raw[c].size(); ++r) {
      const auto& s = raw[c][r];
      if (is_missing_token(s)) {
        cols[c].push_back(kMissing);
        continue;
      }
      auto it = code.find(s);
      if (it == code.end()) {
        throw DataError("csv line " + std::to_string(r + 2) + ": value '" + s + "' not in schema of '" + header[c] + "'");
      }
      cols[c].push_back(it->second);
    }
  }
  return Dataset(std::move(vars), std::move(cols));
}

Dataset load_csv(const std::filesystem::path& path, const Schema* schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (int v = 0; v < data.num_vars(); ++v) out << (v ? "," : "") << csv_escape(data.variable(v).name);
  out << '\n';
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (int v = 0; v < data.num_vars(); ++v) {
      if (v) out << ',';
      const int x = data.at(r, v);
      out << (x == kMissing ? std::string("?") : csv_escape(data.variable(v).states[x]));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Missing-value treatments

Dataset drop_missing(const Dataset& data) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    bool complete = true;
    for (int v = 0; v < data.num_vars() && complete; ++v) complete = !data.is_missing(r, v);
    if (complete) keep.push_back(r);
  }
  if (keep.empty() && data.num_rows() > 0) throw DataError("drop_missing: every row has a missing value");
  return data.select_rows(keep);
}

Dataset impute_mode(const Dataset& data) {
  std::vector<std::vector<int>> cols;
  for (int v = 0; v < data.num_vars(); ++v) {
    auto col = data.column(v);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(data.cardinality(v)), 0);
    std::size_t observed = 0;
    for (int x : col) {
      if (x != kMissing) {
        ++counts[x];
        ++observed;
      }
    }
    std::vector<int> out(col.begin(), col.end());
    if (observed < col.size()) {
      if (observed == 0) throw DataError("impute_mode: column '" + data.variable(v).name + "' has no observed value");
      // max_element returns the first maximum, i.e. the lowest state index.
      const int mode = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      std::replace(out.begin(), out.end(), kMissing, mode);
    }
    cols.push_back(std::move(out));
  }
  return Dataset(data.variables(), std::move(cols));
}

Dataset missing_as_category(const Dataset& data) {
  auto vars = data.variables();
  std::vector<std::vector<int>> cols;
  for (int v = 0; v < data.num_vars(); ++v) {
    auto col = data.column(v);
    std::vector<int> out(col.begin(), col.end());
    if (data.missing_count(v) > 0) {
      const int extra = vars[v].cardinality();
      vars[v].states.emplace_back(kMissingState);
      std::replace(out.begin(), out.end(), kMissing, extra);
    }
    cols.push_back(std::move(out));
  }
  return Dataset(std::move(vars), std::move(cols));
}

Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("subsample: sample size must be positive");
  if (n > data.num_rows()) throw std::invalid_argument("subsample: sample size exceeds row count");
  std::vector<std::size_t> rows(data.num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first n slots are a uniform draw without replacement.
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(rows[i], rows[i + rng.below(rows.size() - i)]);
  }
  rows.resize(n);
  return data.select_rows(rows);
}

Dataset add_synthetic(const Dataset& data, const SyntheticSpec& spec) {
  if (spec.states.size() < 2) throw ConfigError("synthetic '" + spec.name + "': needs at least 2 output states");
  if (data.find(spec.name)) throw ConfigError("synthetic '" + spec.name + "': name already exists");
  std::vector<int> parents;
  std::size_t configs = 1;
  for (const auto& p : spec.parents) {
    auto idx = data.find(p);
    if (!idx) throw DataError("synthetic '" + spec.name + "': unknown parent '" + p + "'");
    parents.push_back(*idx);
    configs *= static_cast<std::size_t>(data.cardinality(*idx));
  }
  if (spec.table.size() != configs) {
    throw ConfigError("synthetic '" + spec.name + "': mapping must cover all " + std::to_string(configs) +
                      " parent configurations");
  }
  std::set<int> image;
  for (int s : spec.table) {
    if (s < 0 || s >= static_cast<int>(spec.states.size())) {
      throw ConfigError("synthetic '" + spec.name + "': mapping value out of range");
    }
    image.insert(s);
  }
  if (image.size() < 2) throw ConfigError("synthetic '" + spec.name + "': mapping is constant");

  std::vector<int> column(data.num_rows());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    std::size_t key = 0;
    std::size_t stride = 1;
    for (int p : parents) {
      const int x = data.at(r, p);
      if (x == kMissing) {
        throw DataError("synthetic '" + spec.name + "': parent '" + data.variable(p).name + "' missing in row " +
                        std::to_string(r));
      }
      key += stride * static_cast<std::size_t>(x);
      stride *= static_cast<std::size_t>(data.cardinality(p));
    }
    column[r] = spec.table[key];
  }
  return data.with_column(Variable{spec.name, spec.states}, std::move(column));
}

// ---------------------------------------------------------------------------
// Contingency tables

ContingencyTable contingency(const Dataset& data, int child, std::span<const int> conditioning) {
  constexpr std::uint64_t kDenseLimit = 1U << 20;
  ContingencyTable t;
  t.child = child;
  t.child_card = data.cardinality(child);
  t.conditioning.assign(conditioning.begin(), conditioning.end());
  const std::size_t n = data.num_rows();

  std::uint64_t space = 1;
  bool overflow = false;
  for (int v : conditioning) {
    const auto card = static_cast<std::uint64_t>(data.cardinality(v));
    t.conditioning_cards.push_back(static_cast<int>(card));
    if (space > std::numeric_limits<std::uint64_t>::max() / card) overflow = true;
    space *= card;
  }
  if (overflow) throw DataError("contingency: conditioning configuration space overflows");

  auto child_col = data.column(child);
  for (int x : child_col) {
    if (x == kMissing) throw DataError("contingency: missing values in '" + data.variable(child).name + "'");
  }
  std::vector<std::uint64_t> keys(n, 0);
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < conditioning.size(); ++i) {
    auto col = data.column(conditioning[i]);
    for (std::size_t r = 0; r < n; ++r) {
      if (col[r] == kMissing) {
        throw DataError("contingency: missing values in '" + data.variable(conditioning[i]).name + "'");
      }
      keys[r] += stride * static_cast<std::uint64_t>(col[r]);
    }
    stride *= static_cast<std::uint64_t>(t.conditioning_cards[i]);
  }

  const auto r_card = static_cast<std::size_t>(t.child_card);
  std::vector<std::size_t> stratum_of(n);
  if (space * r_card <= kDenseLimit) {
    t.strata = static_cast<std::size_t>(space);
    for (std::size_t r = 0; r < n; ++r) stratum_of[r] = static_cast<std::size_t>(keys[r]);
  } else {
    t.compressed = true;
    t.stratum_keys = keys;
    std::sort(t.stratum_keys.begin(), t.stratum_keys.end());
    t.stratum_keys.erase(std::unique(t.stratum_keys.begin(), t.stratum_keys.end()), t.stratum_keys.end());
    t.strata = t.stratum_keys.size();
    for (std::size_t r = 0; r < n; ++r) {
      stratum_of[r] = static_cast<std::size_t>(
          std::lower_bound(t.stratum_keys.begin(), t.stratum_keys.end(), keys[r]) - t.stratum_keys.begin());
    }
  }

  t.counts.assign(t.strata * r_card, 0);
  t.stratum_totals.assign(t.strata, 0);
  t.child_totals.assign(r_card, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto c = static_cast<std::size_t>(child_col[r]);
    ++t.counts[stratum_of[r] * r_card + c];
    ++t.stratum_totals[stratum_of[r]];
    ++t.child_totals[c];
  }
  t.total = static_cast<std::int64_t>(n);
  return t;
}

// ---------------------------------------------------------------------------
// Feature ranking

namespace {

double entropy(std::span<const std::int64_t> counts, double total) {
  double h = 0.0;
  for (auto c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

std::vector<FeatureRank> rank_features(const Dataset& data, int target) {
  auto t_col = data.column(target);
  if (std::find(t_col.begin(), t_col.end(), kMissing) != t_col.end()) {
    throw DataError("rank_features: target '" + data.variable(target).name + "' has missing values");
  }
  {
    std::set<int> observed(t_col.begin(), t_col.end());
    if (observed.size() < 2) throw DataError("rank_features: target is constant");
  }
  const auto tc = static_cast<std::size_t>(data.cardinality(target));
  std::vector<FeatureRank> out;
  for (int v = 0; v < data.num_vars(); ++v) {
    if (v == target) continue;
    auto x_col = data.column(v);
    const auto xc = static_cast<std::size_t>(data.cardinality(v));
    std::vector<std::int64_t> joint(xc * tc, 0);
    std::vector<std::int64_t> t_marg(tc, 0);
    std::vector<std::int64_t> x_marg(xc, 0);
    double n = 0, sx = 0, st = 0, sxx = 0, stt = 0, sxt = 0;
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
      if (x_col[r] == kMissing) continue;
      const auto x = static_cast<std::size_t>(x_col[r]);
      const auto t = static_cast<std::size_t>(t_col[r]);
      ++joint[x * tc + t];
      ++t_marg[t];
      ++x_marg[x];
      n += 1;
      sx += static_cast<double>(x);
      st += static_cast<double>(t);
      sxx += static_cast<double>(x * x);
      stt += static_cast<double>(t * t);
      sxt += static_cast<double>(x * t);
    }
    FeatureRank fr;
    fr.variable = v;
    if (n > 0) {
      double h_t_given_x = 0.0;
      for (std::size_t x = 0; x < xc; ++x) {
        if (x_marg[x] == 0) continue;
        h_t_given_x += static_cast<double>(x_marg[x]) / n *
                       entropy(std::span<const std::int64_t>(joint.data() + x * tc, tc), static_cast<double>(x_marg[x]));
      }
      fr.information_gain = std::max(0.0, entropy(t_marg, n) - h_t_given_x);
      const double cov = sxt / n - (sx / n) * (st / n);
      const double vx = sxx / n - (sx / n) * (sx / n);
      const double vt = stt / n - (st / n) * (st / n);
      fr.correlation = (vx > 0 && vt > 0) ? cov / std::sqrt(vx * vt) : 0.0;
    }
    out.push_back(fr);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureRank& a, const FeatureRank& b) { return a.information_gain > b.information_gain; });
  return out;
}

}  // namespace bnsl
