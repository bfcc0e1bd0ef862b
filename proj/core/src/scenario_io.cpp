#include "hughes/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hughes {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ------------------------------------------------------------- TOML subset

namespace {

struct TomlValue {
  enum class Type { Number, String, Boolean, NumberArray, TableArray };
  Type type = Type::Number;
  double number = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<double> numbers;
  std::vector<std::map<std::string, double>> tables;
};

using TomlTable = std::map<std::string, TomlValue>;
using TomlDoc = std::map<std::string, TomlTable>;

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : text_(text) {}

  TomlDoc parse() {
    TomlDoc doc;
    std::string section;
    while (true) {
      skip_blank();
      if (eof()) break;
      if (peek() == '[') {
        section = parse_section_header();
        doc[section]; // section may stay empty
        continue;
      }
      if (section.empty()) fail("key outside of any [section]");
      const std::string key = parse_key();
      skip_spaces();
      expect('=');
      skip_spaces();
      doc[section][key] = parse_value();
      skip_spaces();
      if (!eof() && peek() == '#') skip_comment();
      if (!eof() && peek() != '\n') fail("unexpected trailing characters after value");
    }
    return doc;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ScenarioParseError("scenario file line " + std::to_string(line_) + ": " + msg);
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') get();
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
  }

  // whitespace, newlines and comments
  void skip_blank() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  std::string parse_section_header() {
    expect('[');
    std::string name;
    while (!eof() && peek() != ']') {
      if (peek() == '\n') fail("unterminated section header");
      name += get();
    }
    expect(']');
    if (name.empty()) fail("empty section name");
    return name;
  }

  std::string parse_key() {
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      key += get();
    if (key.empty()) fail("expected a key");
    return key;
  }

  double parse_number() {
    std::string tok;
    while (!eof()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ']' || c == '}' ||
          c == '#')
        break;
      tok += get();
    }
    if (tok.empty()) fail("expected a number");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail("malformed number '" + tok + "'");
    return v;
  }

  std::map<std::string, double> parse_inline_table() {
    expect('{');
    std::map<std::string, double> table;
    skip_spaces();
    while (!eof() && peek() != '}') {
      const std::string key = parse_key();
      skip_spaces();
      expect('=');
      skip_spaces();
      table[key] = parse_number();
      skip_spaces();
      if (!eof() && peek() == ',') {
        get();
        skip_spaces();
      }
    }
    expect('}');
    return table;
  }

  TomlValue parse_value() {
    TomlValue v;
    const char c = peek();
    if (c == '"') {
      get();
      v.type = TomlValue::Type::String;
      while (!eof() && peek() != '"') {
        if (peek() == '\n') fail("unterminated string");
        v.str += get();
      }
      expect('"');
      return v;
    }
    if (c == '[') {
      get();
      skip_blank();
      if (!eof() && peek() == '{') {
        v.type = TomlValue::Type::TableArray;
        while (!eof() && peek() != ']') {
          v.tables.push_back(parse_inline_table());
          skip_blank();
          if (!eof() && peek() == ',') {
            get();
            skip_blank();
          }
        }
      } else {
        v.type = TomlValue::Type::NumberArray;
        while (!eof() && peek() != ']') {
          v.numbers.push_back(parse_number());
          skip_blank();
          if (!eof() && peek() == ',') {
            get();
            skip_blank();
          }
        }
      }
      expect(']');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string word = parse_key();
      if (word == "true" || word == "false") {
        v.type = TomlValue::Type::Boolean;
        v.boolean = (word == "true");
        return v;
      }
      fail("unexpected bare word '" + word + "'");
    }
    v.type = TomlValue::Type::Number;
    v.number = parse_number();
    return v;
  }
};

// --- typed access with field-level error messages ---

const TomlTable& need_section(const TomlDoc& doc, const std::string& name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ScenarioParseError("missing [" + name + "] section");
  return it->second;
}

const TomlValue* find_key(const TomlTable& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

double need_number(const TomlTable& t, const std::string& section, const std::string& key) {
  const TomlValue* v = find_key(t, key);
  if (!v || v->type != TomlValue::Type::Number)
    throw ScenarioParseError("[" + section + "] " + key + ": required number missing");
  return v->number;
}

double get_number(const TomlTable& t, const std::string& section, const std::string& key,
                  double fallback) {
  const TomlValue* v = find_key(t, key);
  if (!v) return fallback;
  if (v->type != TomlValue::Type::Number)
    throw ScenarioParseError("[" + section + "] " + key + ": expected a number");
  return v->number;
}

bool get_bool(const TomlTable& t, const std::string& section, const std::string& key,
              bool fallback) {
  const TomlValue* v = find_key(t, key);
  if (!v) return fallback;
  if (v->type != TomlValue::Type::Boolean)
    throw ScenarioParseError("[" + section + "] " + key + ": expected true/false");
  return v->boolean;
}

std::string get_string(const TomlTable& t, const std::string& section, const std::string& key,
                       const std::string& fallback) {
  const TomlValue* v = find_key(t, key);
  if (!v) return fallback;
  if (v->type != TomlValue::Type::String)
    throw ScenarioParseError("[" + section + "] " + key + ": expected a string");
  return v->str;
}

std::vector<double> need_array(const TomlTable& t, const std::string& section,
                               const std::string& key) {
  const TomlValue* v = find_key(t, key);
  if (!v || v->type != TomlValue::Type::NumberArray)
    throw ScenarioParseError("[" + section + "] " + key + ": required numeric array missing");
  return v->numbers;
}

} // namespace

Scenario parse_scenario(const std::string& toml_text) {
  const TomlDoc doc = TomlParser(toml_text).parse();
  Scenario s;

  {
    const TomlTable& flux = need_section(doc, "flux");
    const std::string kind = get_string(flux, "flux", "kind", "parabolic");
    const double ls = get_number(flux, "flux", "left_scale", 1.0);
    const double rs = get_number(flux, "flux", "right_scale", 1.0);
    if (kind == "parabolic") {
      s.flux = FluxModel::parabolic(get_number(flux, "flux", "vmax", 1.0), ls, rs);
    } else if (kind == "tabulated") {
      s.flux = FluxModel::tabulated(need_array(flux, "flux", "values"), ls, rs);
    } else {
      throw ScenarioParseError("[flux] kind: unknown value '" + kind + "'");
    }
  }

  {
    const TomlTable& cost = need_section(doc, "cost");
    const std::string kind = get_string(cost, "cost", "kind", "affine");
    if (kind == "affine") {
      const double alpha = need_number(cost, "cost", "alpha");
      if (alpha <= 0.0) throw ScenarioParseError("[cost] alpha: must be positive");
      s.cost = CostModel::affine(alpha);
    } else if (kind == "tabulated") {
      s.cost = CostModel::tabulated(need_array(cost, "cost", "values"));
    } else {
      throw ScenarioParseError("[cost] kind: unknown value '" + kind + "'");
    }
  }

  if (doc.count("exit")) {
    const TomlTable& exit = doc.at("exit");
    const std::string kind = get_string(exit, "exit", "kind", "open");
    if (kind == "open") {
      s.exit = OpenExit{};
    } else if (kind == "constrained") {
      ConstrainedExit ce;
      ce.sigma = need_number(exit, "exit", "sigma");
      if (!(ce.sigma > 0.0 && ce.sigma < 1.0))
        throw ScenarioParseError("[exit] sigma: must lie in (0,1)");
      std::vector<double> g = need_array(exit, "exit", "g");
      ce.g = (g.size() == 1) ? Limiter::constant(g[0]) : Limiter::tabulated(std::move(g));
      if (const TomlValue* wl = find_key(exit, "w_left_values");
          wl && wl->type == TomlValue::Type::NumberArray)
        ce.w_left = WeightProfile::tabulated(-1.0, -ce.sigma, wl->numbers);
      else
        ce.w_left = WeightProfile::uniform(-1.0, -ce.sigma);
      if (const TomlValue* wr = find_key(exit, "w_right_values");
          wr && wr->type == TomlValue::Type::NumberArray)
        ce.w_right = WeightProfile::tabulated(ce.sigma, 1.0, wr->numbers);
      else
        ce.w_right = WeightProfile::uniform(ce.sigma, 1.0);
      s.exit = std::move(ce);
    } else {
      throw ScenarioParseError("[exit] kind: unknown value '" + kind + "'");
    }
  }

  if (doc.count("operator")) {
    const TomlTable& op = doc.at("operator");
    const std::string kind = get_string(op, "operator", "kind", "equilibrium");
    if (kind == "equilibrium") {
      s.turning = EquilibriumOp{};
    } else if (kind == "memory") {
      s.turning = MemoryOp{need_number(op, "operator", "delta")};
    } else if (kind == "relaxed") {
      RelaxedOp r;
      r.epsilon = need_number(op, "operator", "epsilon");
      r.flip_sign = get_bool(op, "operator", "flip_sign", false);
      s.turning = r;
    } else if (kind == "frozen") {
      FrozenOp f;
      f.path.times = need_array(op, "operator", "times");
      f.path.values = need_array(op, "operator", "values");
      if (f.path.times.size() != f.path.values.size() || f.path.times.empty())
        throw ScenarioParseError("[operator] times/values: need matching non-empty arrays");
      s.turning = std::move(f);
    } else {
      throw ScenarioParseError("[operator] kind: unknown value '" + kind + "'");
    }
  }

  {
    const TomlTable& init = need_section(doc, "initial");
    const TomlValue* segs = find_key(init, "segments");
    // An empty list parses as an empty numeric array; both spell vacuum.
    const bool empty_list =
        segs && segs->type == TomlValue::Type::NumberArray && segs->numbers.empty();
    if (!segs || (segs->type != TomlValue::Type::TableArray && !empty_list))
      throw ScenarioParseError("[initial] segments: required list of {from,to,value} missing");
    std::vector<InitialDatum::Segment> segments;
    for (const auto& t : segs->tables) {
      InitialDatum::Segment seg{};
      for (const char* key : {"from", "to", "value"})
        if (!t.count(key))
          throw ScenarioParseError(std::string("[initial] segment missing '") + key + "'");
      seg.from = t.at("from");
      seg.to = t.at("to");
      seg.value = t.at("value");
      segments.push_back(seg);
    }
    s.initial = InitialDatum(std::move(segments));
  }

  {
    const TomlTable& num = need_section(doc, "numerics");
    s.numerics.t_end = need_number(num, "numerics", "t_end");
    s.numerics.cells_j = static_cast<int>(need_number(num, "numerics", "cells_j"));
    s.numerics.cfl_safety = get_number(num, "numerics", "cfl_safety", 0.5);
    s.numerics.b_dom = need_number(num, "numerics", "b_dom");
    s.numerics.snapshots = static_cast<int>(get_number(num, "numerics", "snapshots", 64));
  }

  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ScenarioParseError("cannot open scenario file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// -------------------------------------------------------------- serializers

namespace {

void write_array(std::ostream& os, const std::vector<double>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << format_double(v[i]);
  }
  os << ']';
}

} // namespace

std::string write_scenario(const Scenario& s) {
  std::ostringstream os;

  os << "[flux]\n";
  switch (s.flux.kind()) {
    case FluxModel::Kind::Parabolic:
      os << "kind = \"parabolic\"\n";
      os << "vmax = " << format_double(s.flux.vmax()) << "\n";
      break;
    case FluxModel::Kind::Tabulated:
      os << "kind = \"tabulated\"\n";
      os << "values = ";
      write_array(os, s.flux.table());
      os << "\n";
      break;
    case FluxModel::Kind::Custom:
      throw std::invalid_argument("write_scenario: custom flux is not serializable");
  }
  os << "left_scale = " << format_double(s.flux.left_scale()) << "\n";
  os << "right_scale = " << format_double(s.flux.right_scale()) << "\n\n";

  os << "[cost]\n";
  if (s.cost.kind() == CostModel::Kind::Affine) {
    os << "kind = \"affine\"\n";
    os << "alpha = " << format_double(s.cost.alpha()) << "\n\n";
  } else {
    os << "kind = \"tabulated\"\n";
    os << "values = ";
    write_array(os, s.cost.table());
    os << "\n\n";
  }

  os << "[exit]\n";
  if (const auto* ce = std::get_if<ConstrainedExit>(&s.exit)) {
    os << "kind = \"constrained\"\n";
    os << "sigma = " << format_double(ce->sigma) << "\n";
    os << "g = ";
    write_array(os, ce->g.table());
    os << "\n";
    if (!ce->w_left.is_uniform()) {
      os << "w_left_values = ";
      write_array(os, ce->w_left.table());
      os << "\n";
    }
    if (!ce->w_right.is_uniform()) {
      os << "w_right_values = ";
      write_array(os, ce->w_right.table());
      os << "\n";
    }
    os << "\n";
  } else {
    os << "kind = \"open\"\n\n";
  }

  os << "[operator]\n";
  if (std::holds_alternative<EquilibriumOp>(s.turning)) {
    os << "kind = \"equilibrium\"\n\n";
  } else if (const auto* mem = std::get_if<MemoryOp>(&s.turning)) {
    os << "kind = \"memory\"\n";
    os << "delta = " << format_double(mem->delta) << "\n\n";
  } else if (const auto* rel = std::get_if<RelaxedOp>(&s.turning)) {
    os << "kind = \"relaxed\"\n";
    os << "epsilon = " << format_double(rel->epsilon) << "\n";
    os << "flip_sign = " << (rel->flip_sign ? "true" : "false") << "\n\n";
  } else {
    const auto& frozen = std::get<FrozenOp>(s.turning);
    os << "kind = \"frozen\"\n";
    os << "times = ";
    write_array(os, frozen.path.times);
    os << "\nvalues = ";
    write_array(os, frozen.path.values);
    os << "\n\n";
  }

  os << "[initial]\n";
  os << "segments = [";
  const auto& segs = s.initial.segments();
  for (size_t i = 0; i < segs.size(); ++i) {
    if (i) os << ", ";
    os << "{from = " << format_double(segs[i].from) << ", to = " << format_double(segs[i].to)
       << ", value = " << format_double(segs[i].value) << "}";
  }
  os << "]\n\n";

  os << "[numerics]\n";
  os << "t_end = " << format_double(s.numerics.t_end) << "\n";
  os << "cells_j = " << s.numerics.cells_j << "\n";
  os << "cfl_safety = " << format_double(s.numerics.cfl_safety) << "\n";
  os << "b_dom = " << format_double(s.numerics.b_dom) << "\n";
  os << "snapshots = " << s.numerics.snapshots << "\n";
  return os.str();
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = write_scenario(s);
  uint64_t h = 14695981039346656037ull; // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --------------------------------------------------------------- CSV output

void write_snapshots_csv(std::ostream& os, const RunResult& run) {
  os << "t,x_left,x_right,rho\n";
  const auto& e = run.output_edges;
  for (const auto& snap : run.snapshots) {
    const std::string t = format_double(snap.t);
    for (size_t i = 0; i < snap.values.size(); ++i)
      os << t << ',' << format_double(e[i]) << ',' << format_double(e[i + 1]) << ','
         << format_double(snap.values[i]) << '\n';
  }
}

void write_xi_csv(std::ostream& os, const TurningPath& path) {
  os << "t,xi,slope\n";
  const int n = path.n_steps();
  for (int i = 0; i <= n; ++i) {
    const double slope = path.slopes.empty() ? 0.0 : path.slopes[std::min(i, n - 1)];
    os << format_double(i * path.dt) << ',' << format_double(path.xi[i]) << ','
       << format_double(slope) << '\n';
  }
}

void write_constraints_csv(std::ostream& os, const RunResult& run) {
  os << "t,q_left,q_right,exit_flux_left,exit_flux_right\n";
  if (!run.constraints) return;
  const auto& c = *run.constraints;
  for (size_t n = 0; n < c.q_left.size(); ++n)
    os << format_double(n * run.numerics.dt) << ',' << format_double(c.q_left[n]) << ','
       << format_double(c.q_right[n]) << ',' << format_double(c.exit_flux_left[n]) << ','
       << format_double(c.exit_flux_right[n]) << '\n';
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "J,dx,error_L1,observed_order\n";
  for (const auto& r : rows) {
    os << r.cells_j << ',' << format_double(r.dx) << ',' << format_double(r.error_l1) << ',';
    if (std::isfinite(r.observed_order)) os << format_double(r.observed_order);
    os << '\n';
  }
}

// --------------------------------------------------------------- JSON output

std::string diagnostics_json(const RunResult& run) {
  nlohmann::ordered_json j;
  j["mass_series"] = run.diagnostics.mass_series;
  j["xi_series"] = run.path.xi;
  j["max_slope"] = run.diagnostics.max_slope;
  j["slope_bound"] = run.diagnostics.slope_bound;
  j["clamp_events"] = run.diagnostics.clamp_events;
  if (!run.diagnostics.picard_residuals.empty())
    j["picard_residuals"] = run.diagnostics.picard_residuals;
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["status"] = m.status;
  j["scenario_hash"] = m.hash;
  j["resolved"] = {{"dx", m.numerics.dx},
                   {"dt", m.numerics.dt},
                   {"n_steps", m.numerics.n_steps},
                   {"half_cells", m.numerics.half_cells},
                   {"b_eff", m.numerics.b_eff},
                   {"slope_bound", m.numerics.slope_bound},
                   {"max_admissible_slope", m.numerics.max_admissible_slope}};
  j["outputs"] = m.outputs;
  j["conformance"] = {{"clamp_events", m.clamp_events}, {"conforming", m.conforming}};
  return j.dump(2) + "\n";
}

RunManifest write_run_outputs(const std::filesystem::path& dir, const Scenario& s,
                              const RunResult& run) {
  std::filesystem::create_directories(dir);

  RunManifest m;
  m.status = "running";
  m.hash = scenario_hash(s);
  m.numerics = run.numerics;
  m.outputs = {"snapshots.csv", "xi.csv"};
  if (run.constraints) m.outputs.push_back("constraints.csv");
  m.outputs.push_back("diagnostics.json");
  m.clamp_events = run.diagnostics.clamp_events;
  m.conforming = run.diagnostics.clamp_events == 0;

  auto write_file = [&dir](const std::string& name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
  };

  write_file("manifest.json", manifest_json(m));

  {
    std::ofstream f(dir / "snapshots.csv", std::ios::binary);
    write_snapshots_csv(f, run);
  }
  {
    std::ofstream f(dir / "xi.csv", std::ios::binary);
    write_xi_csv(f, run.path);
  }
  if (run.constraints) {
    std::ofstream f(dir / "constraints.csv", std::ios::binary);
    write_constraints_csv(f, run);
  }
  write_file("diagnostics.json", diagnostics_json(run));

  m.status = "completed";
  write_file("manifest.json", manifest_json(m));
  return m;
}

} // namespace hughes
