#include "qtel/sweep.hpp"

#include "qtel/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace qtel {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  bool used = false;
  std::map<std::string, Entry> keys;
  std::map<std::string, Section> subsections;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Token {
  enum Kind { Word, Open, Close, Equals, Comma, End } kind = End;
  std::string text;
  int line = 0;
};

// Lexer: '{', '}', '=', ',' are punctuation; everything else whitespace-split.
// '#' comments to end of line.
std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '{' || c == '}' || c == '=' || c == ',') {
      const Token::Kind k = c == '{' ? Token::Open
                            : c == '}' ? Token::Close
                            : c == '=' ? Token::Equals
                                       : Token::Comma;
      out.push_back({k, std::string(1, c), line});
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && std::string(" \t\r\n#{}=,").find(text[j]) ==
                                  std::string::npos)
      ++j;
    out.push_back({Token::Word, text.substr(i, j - i), line});
    i = j;
  }
  out.push_back({Token::End, "", line});
  return out;
}

class TreeParser {
 public:
  explicit TreeParser(const std::string& text) : tokens_(lex(text)) {}

  Section parse() {
    Section root;
    root.line = 1;
    parse_entries(root);
    if (peek().kind != Token::End)
      throw ConfigError(peek().line, "unmatched '}'");
    return root;
  }

 private:
  const Token& peek(int ahead = 0) const {
    const size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  void parse_entries(Section& section) {
    for (;;) {
      if (peek().kind == Token::End || peek().kind == Token::Close) return;
      const Token& name = take();
      if (name.kind != Token::Word)
        throw ConfigError(name.line, "expected a key or section name, got '" +
                                         name.text + "'");
      const Token& next = take();
      if (next.kind == Token::Open) {
        Section& sub = section.subsections[name.text];
        if (sub.line != 0)
          throw ConfigError(name.line, "duplicate section '" + name.text + "'");
        sub.line = name.line;
        parse_entries(sub);
        const Token& close = take();
        if (close.kind != Token::Close)
          throw ConfigError(close.line, "missing '}' for section '" + name.text + "'");
        continue;
      }
      if (next.kind != Token::Equals)
        throw ConfigError(next.line,
                          "expected '=' or '{' after '" + name.text + "'");
      // value = word (',' word)*  -- commas glue list elements together
      const Token& first = take();
      if (first.kind != Token::Word)
        throw ConfigError(first.line, "missing value for '" + name.text + "'");
      std::string value = first.text;
      while (peek().kind == Token::Comma) {
        take();
        const Token& part = take();
        if (part.kind != Token::Word)
          throw ConfigError(part.line, "dangling ',' in value of '" + name.text + "'");
        value += "," + part.text;
      }
      if (section.keys.count(name.text))
        throw ConfigError(name.line, "duplicate key '" + name.text + "'");
      section.keys[name.text] = Entry{value, name.line, false};
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

Section parse_tree(const std::string& text) { return TreeParser(text).parse(); }

double parse_number(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(line, "expected a number, got '" + s + "'");
  }
}

Param parse_param(const Entry& e) {
  Param p;
  if (!e.value.empty() && e.value[0] == '$') {
    p.is_var = true;
    p.var = e.value.substr(1);
    if (p.var.empty()) throw ConfigError(e.line, "empty variable reference");
    return p;
  }
  p.value = parse_number(e.value, e.line);
  return p;
}

std::vector<double> parse_grid_values(const Entry& e) {
  const std::string& v = e.value;
  std::vector<double> out;
  if (v.rfind("linspace(", 0) == 0) {
    if (v.back() != ')') throw ConfigError(e.line, "malformed linspace");
    std::istringstream args(v.substr(9, v.size() - 10));
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(args, tok, ',')) parts.push_back(trim(tok));
    if (parts.size() != 3) throw ConfigError(e.line, "linspace needs (start, stop, count)");
    const double a = parse_number(parts[0], e.line);
    const double b = parse_number(parts[1], e.line);
    const double nd = parse_number(parts[2], e.line);
    const int n = static_cast<int>(nd);
    if (n < 2 || nd != n) throw ConfigError(e.line, "linspace count must be an integer >= 2");
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
  }
  std::istringstream list(v);
  std::string tok;
  while (std::getline(list, tok, ',')) out.push_back(parse_number(trim(tok), e.line));
  if (out.empty()) throw ConfigError(e.line, "empty grid");
  return out;
}

NoiseKind parse_kind(const Entry& e) {
  const std::string& v = e.value;
  if (v == "none") return NoiseKind::None;
  if (v == "bit_flip") return NoiseKind::BitFlip;
  if (v == "phase_flip") return NoiseKind::PhaseFlip;
  if (v == "depolarizing") return NoiseKind::Depolarizing;
  if (v == "amplitude_damping") return NoiseKind::AmplitudeDamping;
  throw ConfigError(e.line, "unknown noise kind '" + v +
                                "' (none | bit_flip | phase_flip | depolarizing | "
                                "amplitude_damping)");
}

Entry& require_key(Section& s, const std::string& key, const char* context) {
  auto it = s.keys.find(key);
  if (it == s.keys.end())
    throw ConfigError(s.line, std::string(context) + " is missing '" + key + "'");
  it->second.used = true;
  return it->second;
}

Entry* optional_key(Section& s, const std::string& key) {
  auto it = s.keys.find(key);
  if (it == s.keys.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

NoiseTemplate parse_noise(Section& s, const char* name) {
  NoiseTemplate t;
  t.kind = parse_kind(require_key(s, "kind", name));
  Entry* p = optional_key(s, "p");
  Entry* p1 = optional_key(s, "p1");
  Entry* p2 = optional_key(s, "p2");
  if (t.kind == NoiseKind::None) {
    if (p || p1 || p2)
      throw ConfigError(s.line, std::string(name) + ": 'none' takes no strength");
    return t;
  }
  if (p1 || p2) {
    if (t.kind != NoiseKind::AmplitudeDamping)
      throw ConfigError(s.line,
                        std::string(name) + ": p1/p2 apply only to amplitude_damping");
    if (!p1 || !p2 || p)
      throw ConfigError(s.line,
                        std::string(name) + ": give either 'p' or both 'p1' and 'p2'");
    t.split_ad = true;
    t.p1 = parse_param(*p1);
    t.p2 = parse_param(*p2);
    return t;
  }
  if (!p) throw ConfigError(s.line, std::string(name) + " is missing 'p'");
  t.p = parse_param(*p);
  return t;
}

void check_all_used(const Section& s, const std::string& path) {
  for (const auto& [k, e] : s.keys)
    if (!e.used)
      throw ConfigError(e.line, "unknown key '" + path + k + "'");
  for (const auto& [k, sub] : s.subsections) {
    if (!sub.used)
      throw ConfigError(sub.line, "unknown section '" + path + k + "'");
    check_all_used(sub, path + k + ".");
  }
}

void collect_vars(const Param& p, std::set<std::string>& vars) {
  if (p.is_var) vars.insert(p.var);
}

double resolve(const Param& p, const SweepConfig& cfg,
               const std::vector<double>& values) {
  if (!p.is_var) return p.value;
  for (size_t i = 0; i < cfg.grids.size(); ++i)
    if (cfg.grids[i].first == p.var) return values[i];
  throw std::logic_error("unbound variable $" + p.var);
}

NoiseSpec bind_noise(const NoiseTemplate& t, const SweepConfig& cfg,
                     const std::vector<double>& values) {
  if (t.kind == NoiseKind::None) return NoiseSpec::none();
  if (t.split_ad)
    return NoiseSpec::amplitude_damping(resolve(t.p1, cfg, values),
                                        resolve(t.p2, cfg, values));
  return NoiseSpec::of(t.kind, resolve(t.p, cfg, values));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

TeleportScenario SweepConfig::bind(const std::vector<double>& values) const {
  TeleportScenario s;
  s.input = bind_noise(scenario.input, *this, values);
  s.alice = bind_noise(scenario.alice, *this, values);
  s.bob = bind_noise(scenario.bob, *this, values);
  if (scenario.cad) {
    CadParams c;
    c.eta = resolve(scenario.cad->eta, *this, values);
    c.p1 = resolve(scenario.cad->p1, *this, values);
    c.p2 = resolve(scenario.cad->p2, *this, values);
    c.swap_pairing = scenario.cad->swap_pairing;
    s.cad = c;
  }
  return s;
}

SweepConfig parse_config(const std::string& text) {
  Section root = parse_tree(text);
  SweepConfig cfg;

  // scenario
  auto scen_it = root.subsections.find("scenario");
  if (scen_it == root.subsections.end())
    throw ConfigError(0, "missing 'scenario' section");
  Section& scen = scen_it->second;
  scen.used = true;
  for (const char* name : {"input", "alice", "bob"}) {
    auto it = scen.subsections.find(name);
    if (it == scen.subsections.end()) continue;
    it->second.used = true;
    NoiseTemplate t = parse_noise(it->second, name);
    if (std::string(name) == "input") cfg.scenario.input = t;
    else if (std::string(name) == "alice") cfg.scenario.alice = t;
    else cfg.scenario.bob = t;
  }
  if (auto it = scen.subsections.find("cad"); it != scen.subsections.end()) {
    it->second.used = true;
    Section& c = it->second;
    CadTemplate t;
    t.eta = parse_param(require_key(c, "eta", "cad"));
    t.p1 = parse_param(require_key(c, "p1", "cad"));
    t.p2 = parse_param(require_key(c, "p2", "cad"));
    if (Entry* pairing = optional_key(c, "pairing")) {
      if (pairing->value == "swapped") t.swap_pairing = true;
      else if (pairing->value != "standard")
        throw ConfigError(pairing->line, "pairing must be 'standard' or 'swapped'");
    }
    cfg.scenario.cad = t;
    if (cfg.scenario.alice.kind != NoiseKind::None ||
        cfg.scenario.bob.kind != NoiseKind::None)
      throw ConfigError(c.line,
                        "cad replaces the alice/bob noise; remove those sections");
  }

  // grids
  if (auto it = root.subsections.find("grids"); it != root.subsections.end()) {
    it->second.used = true;
    // preserve file order: sort keys by line number
    std::vector<std::pair<int, std::string>> order;
    for (auto& [name, e] : it->second.keys) order.emplace_back(e.line, name);
    std::sort(order.begin(), order.end());
    for (const auto& [line, name] : order) {
      Entry& e = it->second.keys[name];
      e.used = true;
      std::vector<double> values = parse_grid_values(e);
      for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
          throw ConfigError(e.line, "grid '" + name + "' value " + format_double(v) +
                                        " outside [0,1]");
      cfg.grids.emplace_back(name, std::move(values));
    }
  }

  // averaging
  if (auto it = root.subsections.find("averaging"); it != root.subsections.end()) {
    it->second.used = true;
    Section& a = it->second;
    if (Entry* m = optional_key(a, "method")) {
      if (m->value == "quadrature") cfg.averaging.method = AveragingSpec::Method::Quadrature;
      else if (m->value == "monte-carlo") cfg.averaging.method = AveragingSpec::Method::MonteCarlo;
      else throw ConfigError(m->line, "method must be 'quadrature' or 'monte-carlo'");
    }
    if (Entry* e = optional_key(a, "theta_nodes"))
      cfg.averaging.quadrature.theta_nodes = static_cast<int>(parse_number(e->value, e->line));
    if (Entry* e = optional_key(a, "phi_nodes"))
      cfg.averaging.quadrature.phi_nodes = static_cast<int>(parse_number(e->value, e->line));
    if (Entry* e = optional_key(a, "samples"))
      cfg.averaging.samples = static_cast<int>(parse_number(e->value, e->line));
    if (Entry* e = optional_key(a, "seed"))
      cfg.averaging.seed = static_cast<std::uint64_t>(parse_number(e->value, e->line));
  }

  // output
  if (auto it = root.subsections.find("output"); it != root.subsections.end()) {
    it->second.used = true;
    Section& o = it->second;
    if (Entry* e = optional_key(o, "path")) cfg.output.path = e->value;
    if (Entry* e = optional_key(o, "format")) {
      if (e->value == "csv") cfg.output.format = OutputSpec::Format::Csv;
      else if (e->value == "json") cfg.output.format = OutputSpec::Format::Json;
      else throw ConfigError(e->line, "format must be 'csv' or 'json'");
    }
  }

  if (Entry* e = optional_key(root, "compare")) {
    cfg.compare = e->value;
    if (!find_formula(cfg.compare))
      throw ConfigError(e->line, "compare references unknown formula '" + cfg.compare + "'");
  }

  check_all_used(root, "");

  // variable/grid cross-checks
  std::set<std::string> wanted;
  for (const NoiseTemplate* t :
       {&cfg.scenario.input, &cfg.scenario.alice, &cfg.scenario.bob}) {
    collect_vars(t->p, wanted);
    collect_vars(t->p1, wanted);
    collect_vars(t->p2, wanted);
  }
  if (cfg.scenario.cad) {
    collect_vars(cfg.scenario.cad->eta, wanted);
    collect_vars(cfg.scenario.cad->p1, wanted);
    collect_vars(cfg.scenario.cad->p2, wanted);
  }
  std::set<std::string> provided;
  for (const auto& [name, values] : cfg.grids) {
    if (!provided.insert(name).second)
      throw ConfigError(0, "duplicate grid '" + name + "'");
  }
  for (const std::string& v : wanted)
    if (!provided.count(v))
      throw ConfigError(0, "scenario references $" + v + " but no grid defines it");
  for (const std::string& g : provided)
    if (!wanted.count(g))
      throw ConfigError(0, "grid '" + g + "' is not referenced by the scenario");

  if (!cfg.compare.empty()) {
    const Formula* f = find_formula(cfg.compare);
    if (f->vars.size() != cfg.grids.size())
      throw ConfigError(0, "compare formula '" + cfg.compare + "' has " +
                               std::to_string(f->vars.size()) +
                               " variables but the sweep has " +
                               std::to_string(cfg.grids.size()) + " grids");
  }

  // literal probabilities must be in range too
  try {
    std::vector<double> zeros(cfg.grids.size(), 0.0);
    cfg.bind(zeros).validate();
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }

  return cfg;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  size_t total = 1;
  for (const auto& [name, values] : cfg.grids) total *= values.size();

  std::vector<SweepRow> rows(total);
  parallel_for(total, [&](size_t idx) {
    // lexicographic decode: first grid is the outermost axis
    std::vector<double> values(cfg.grids.size());
    size_t rem = idx;
    for (size_t g = cfg.grids.size(); g-- > 0;) {
      const auto& axis = cfg.grids[g].second;
      values[g] = axis[rem % axis.size()];
      rem /= axis.size();
    }
    SweepRow& row = rows[idx];
    row.values = values;
    const TeleportScenario s = cfg.bind(values);
    if (cfg.averaging.method == AveragingSpec::Method::Quadrature) {
      row.f_avg = average_fidelity(s, cfg.averaging.quadrature);
    } else {
      row.f_avg = monte_carlo_average(s, cfg.averaging.samples,
                                      cfg.averaging.seed + idx)
                      .mean;
    }
    if (!cfg.compare.empty()) {
      const Formula* f = find_formula(cfg.compare);
      row.f_closed_form = closed_form(*f, values);
      row.abs_diff = std::abs(row.f_avg - *row.f_closed_form);
    }
  });
  return rows;
}

void write_csv(std::ostream& os, const SweepConfig& cfg,
               const std::vector<SweepRow>& rows) {
  // formula ids contain commas, so that field is always quoted
  const std::string id = cfg.compare.empty() ? "" : "\"" + cfg.compare + "\"";
  for (const auto& [name, values] : cfg.grids) os << name << ",";
  os << "f_avg,f_closed_form,abs_diff,formula_id\n";
  for (const SweepRow& row : rows) {
    for (double v : row.values) os << format_double(v) << ",";
    os << format_double(row.f_avg) << ",";
    if (row.f_closed_form) os << format_double(*row.f_closed_form);
    os << ",";
    if (row.abs_diff) os << format_double(*row.abs_diff);
    os << "," << id << "\n";
  }
}

void write_json(std::ostream& os, const SweepConfig& cfg,
                const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& row : rows) {
    nlohmann::ordered_json obj;
    for (size_t g = 0; g < cfg.grids.size(); ++g)
      obj[cfg.grids[g].first] = row.values[g];
    obj["f_avg"] = row.f_avg;
    if (row.f_closed_form) obj["f_closed_form"] = *row.f_closed_form;
    if (row.abs_diff) obj["abs_diff"] = *row.abs_diff;
    if (!cfg.compare.empty()) obj["formula_id"] = cfg.compare;
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << "\n";
}

void write_output(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                  const std::string& path_override) {
  const std::string path = path_override.empty() ? cfg.output.path : path_override;
  auto emit = [&](std::ostream& os) {
    if (cfg.output.format == OutputSpec::Format::Csv) write_csv(os, cfg, rows);
    else write_json(os, cfg, rows);
  };
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  emit(out);
}

}  // namespace qtel
