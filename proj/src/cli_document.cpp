#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <set>

#include "uhf/cli.hpp"
#include "uhf/crossed.hpp"

namespace uhf {

namespace {

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (lead) *lead = b;
  return s.substr(b, e - b);
}

struct Piece {
  std::string text;
  std::size_t offset = 0;  // 0-based offset in the parent string
};

// Split on sep, trimming each piece and keeping its offset.
std::vector<Piece> split(const std::string& s, char sep, std::size_t base) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] != sep) continue;
    std::size_t lead = 0;
    const std::string piece = trim(s.substr(start, i - start), &lead);
    out.push_back({piece, base + start + lead});
    start = i + 1;
  }
  return out;
}

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& msg) {
  if (line == 0) throw Error(msg);
  throw DocumentError(line, column, msg);
}

std::int64_t parse_int(const std::string& s, std::size_t line, std::size_t column, const std::string& what) {
  if (s.empty()) fail_at(line, column, what + ": expected an integer");
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) fail_at(line, column, what + ": expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& s, std::size_t line, std::size_t column,
                                         const std::string& what) {
  std::vector<std::int64_t> out;
  if (trim(s).empty()) return out;
  for (const auto& p : split(s, ',', 0)) out.push_back(parse_int(p.text, line, column + p.offset, what));
  return out;
}

std::int64_t positive(const DocumentEntry& e) {
  const auto v = parse_int(e.value, e.line, e.column, e.key);
  if (v < 1) fail_at(e.line, e.column, e.key + ": expected a positive integer");
  return v;
}

bool is_phase_literal(double re, double im, Rational& out) {
  if (re == 1.0 && im == 0.0) out = Rational(0);
  else if (re == -1.0 && im == 0.0) out = Rational(1, 2);
  else if (re == 0.0 && im == 1.0) out = Rational(1, 4);
  else if (re == 0.0 && im == -1.0) out = Rational(3, 4);
  else return false;
  return true;
}

struct MatrixEntry {
  Complex value;
  std::optional<Rational> phase;
  bool zero = false;
};

double parse_real(const std::string& s, std::size_t line, std::size_t column) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) fail_at(line, column, "bad number '" + s + "'");
  return v;
}

MatrixEntry parse_entry(const std::string& raw, std::size_t line, std::size_t column) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail_at(line, column, "empty matrix entry");
  MatrixEntry e;
  if (s.rfind("ph(", 0) == 0) {
    if (s.back() != ')') fail_at(line, column, "unterminated ph(...)");
    const std::string inner = s.substr(3, s.size() - 4);
    const auto slash = inner.find('/');
    const std::int64_t p = parse_int(inner.substr(0, slash), line, column + 3, "ph");
    const std::int64_t q = slash == std::string::npos ? 1 : parse_int(inner.substr(slash + 1), line, column + 4 + slash, "ph");
    if (q <= 0) fail_at(line, column, "ph: denominator must be positive");
    Rational r(p, q);
    r -= Rational(static_cast<std::int64_t>(std::floor(boost::rational_cast<double>(r))));
    while (r < Rational(0)) r += Rational(1);
    while (r >= Rational(1)) r -= Rational(1);
    e.phase = r;
    e.value = phase_value(r);
    return e;
  }
  double re = 0.0, im = 0.0;
  if (s.back() == 'i') {
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split_at = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;)
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        split_at = i;
        break;
      }
    if (split_at == std::string::npos) {
      im = parse_real(body, line, column);
    } else {
      re = parse_real(body.substr(0, split_at), line, column);
      im = parse_real(body.substr(split_at), line, column + split_at);
    }
  } else {
    re = parse_real(s, line, column);
  }
  e.value = Complex(re, im);
  if (re == 0.0 && im == 0.0) {
    e.zero = true;
    return e;
  }
  Rational ph;
  if (is_phase_literal(re, im, ph)) e.phase = ph;
  return e;
}

std::vector<Piece> call_arguments(const std::string& s, const std::string& name, std::size_t line, std::size_t column) {
  if (s.back() != ')') fail_at(line, column, name + ": missing ')'");
  return split(s.substr(name.size() + 1, s.size() - name.size() - 2), ',', name.size() + 1);
}

Unitary parse_matrix(const std::string& raw, std::size_t line, std::size_t column) {
  std::size_t lead = 0;
  const std::string s = trim(raw, &lead);
  column += lead;
  if (s.empty()) fail_at(line, column, "empty matrix literal");
  if (s.rfind("perm(", 0) == 0) {
    std::vector<std::size_t> perm;
    for (const auto& p : call_arguments(s, "perm", line, column)) {
      const auto v = parse_int(p.text, line, column + p.offset, "perm");
      if (v < 0) fail_at(line, column + p.offset, "perm: negative index");
      perm.push_back(static_cast<std::size_t>(v));
    }
    try {
      return Unitary::permutation(perm);
    } catch (const Error& err) {
      fail_at(line, column, err.what());
    }
  }
  if (s.rfind("id(", 0) == 0) {
    const auto args = call_arguments(s, "id", line, column);
    if (args.size() != 1) fail_at(line, column, "id: expected one dimension");
    const auto n = parse_int(args[0].text, line, column + args[0].offset, "id");
    if (n < 1) fail_at(line, column, "id: dimension must be positive");
    return Unitary::identity(static_cast<std::size_t>(n));
  }
  std::vector<std::vector<MatrixEntry>> rows;
  if (s.rfind("diag(", 0) == 0) {
    const auto args = call_arguments(s, "diag", line, column);
    const std::size_t n = args.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<MatrixEntry> row(n);
      for (auto& x : row) x.zero = true;
      row[i] = parse_entry(args[i].text, line, column + args[i].offset);
      rows.push_back(row);
    }
  } else if (s.front() == '[') {
    if (s.back() != ']') fail_at(line, column, "matrix literal: missing ']'");
    for (const auto& r : split(s.substr(1, s.size() - 2), ';', 1)) {
      std::vector<MatrixEntry> row;
      for (const auto& p : split(r.text, ',', r.offset)) row.push_back(parse_entry(p.text, line, column + p.offset));
      rows.push_back(row);
    }
  } else {
    fail_at(line, column, "matrix literal: expected [..], diag(..), perm(..) or id(..)");
  }
  const std::size_t n = rows.size();
  for (const auto& r : rows)
    if (r.size() != n) fail_at(line, column, "matrix literal is not square");
  bool exact = true;
  std::vector<std::size_t> perm(n, n);
  std::vector<Rational> phase(n, Rational(0));
  std::vector<bool> row_used(n, false);
  for (std::size_t j = 0; j < n && exact; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = rows[i][j];
      if (e.zero) continue;
      if (!e.phase || perm[j] != n || row_used[i]) {
        exact = false;
        break;
      }
      perm[j] = i;
      phase[j] = *e.phase;
      row_used[i] = true;
    }
  for (std::size_t j = 0; j < n && exact; ++j)
    if (perm[j] == n) exact = false;
  if (exact) return Unitary::from_monomial({perm, phase});
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].value;
  try {
    return Unitary::from_matrix(m);
  } catch (const Error&) {
    fail_at(line, column, "matrix literal is not unitary");
  }
}

template <class F>
auto located(const DocumentEntry& e, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& err) {
    fail_at(e.line, e.column, e.key + ": " + err.what());
  }
}

FiniteGroup named_group(const std::string& name, std::int64_t n, const DocumentEntry& e) {
  if (name == "cyclic") return FiniteGroup::cyclic(static_cast<std::size_t>(n));
  if (name == "symmetric") {
    if (n > 5) fail_at(e.line, e.column, "symmetric: n must be at most 5");
    return FiniteGroup::symmetric(static_cast<std::size_t>(n));
  }
  fail_at(e.line, e.column, "unknown group '" + name + "'");
}

}  // namespace

DocumentError::DocumentError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const DocumentEntry* DocumentSection::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

const DocumentEntry& DocumentSection::require(const std::string& key) const {
  if (const auto* e = find(key)) return *e;
  throw DocumentError(line, 1, "[" + name + "] needs '" + key + "'");
}

std::string DocumentSection::get(const std::string& key, const std::string& fallback) const {
  const auto* e = find(key);
  return e ? e->value : fallback;
}

ActionSpecDocument ActionSpecDocument::parse(const std::string& text) {
  ActionSpecDocument doc;
  doc.text = text;
  DocumentSection* current = nullptr;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t lead = 0;
    const std::string t = trim(line, &lead);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw DocumentError(line_no, lead + t.size(), "section header needs ']'");
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name == "task") {
        doc.tasks.push_back({name, line_no, {}});
        current = &doc.tasks.back();
        continue;
      }
      DocumentSection* s = name == "group" ? &doc.group : name == "factors" ? &doc.factors : name == "action" ? &doc.action : nullptr;
      if (!s) throw DocumentError(line_no, lead + 2, "unknown section [" + name + "]");
      if (!seen.insert(name).second) throw DocumentError(line_no, lead + 1, "duplicate section [" + name + "]");
      s->name = name;
      s->line = line_no;
      current = s;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DocumentError(line_no, lead + 1, "expected 'key = value'");
    if (!current) throw DocumentError(line_no, lead + 1, "entry outside a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DocumentError(line_no, lead + 1, "empty key");
    for (std::size_t i = 0; i < key.size(); ++i) {
      const char c = key[i];
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
        throw DocumentError(line_no, lead + 1 + i, "invalid character in key '" + key + "'");
    }
    if (current->find(key)) throw DocumentError(line_no, lead + 1, "duplicate key '" + key + "'");
    std::size_t vlead = 0;
    const std::string value = trim(line.substr(eq + 1), &vlead);
    current->entries.push_back({key, value, line_no, eq + 2 + vlead});
  }
  if (!seen.count("group")) throw DocumentError(1, 1, "missing [group] section");
  if (!seen.count("action")) throw DocumentError(1, 1, "missing [action] section");
  const auto& commands = cli_commands();
  for (const auto& t : doc.tasks) {
    const auto& kind = t.require("kind");
    if (std::find(commands.begin(), commands.end(), kind.value) == commands.end())
      throw DocumentError(kind.line, kind.column, "unknown task kind '" + kind.value + "'");
  }
  return doc;
}

Unitary parse_matrix_literal(const std::string& text) { return parse_matrix(text, 1, 1); }

Element parse_element(const GroupSpec& g, const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw Error("empty element");
  if (g.is_table()) {
    const auto& t = g.table();
    if (std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const auto v = std::stoull(s);
      if (v >= t.order()) throw Error("element index " + s + " out of range");
      return g.element(static_cast<std::size_t>(v));
    }
    for (std::size_t a = 0; a < t.order(); ++a)
      if (t.label(a) == s) return g.element(a);
    throw Error("unknown element '" + s + "'");
  }
  const std::size_t r = g.presented().rank();
  Element e = g.identity();
  if (s == "0" || s == "e") return e;
  if (s.find('g') != std::string::npos) {
    std::string term;
    auto flush = [&](const std::string& t0) {
      const std::string t = trim(t0);
      if (t.empty()) throw Error("empty term in '" + s + "'");
      const auto gpos = t.find('g');
      if (gpos == std::string::npos) throw Error("term '" + t + "' has no generator");
      const std::string c = trim(t.substr(0, gpos));
      const std::int64_t coeff = c.empty() || c == "+" ? 1 : c == "-" ? -1 : parse_int(c, 0, 0, "coefficient");
      const std::int64_t idx = parse_int(trim(t.substr(gpos + 1)), 0, 0, "generator index");
      if (idx < 0 || static_cast<std::size_t>(idx) >= r) throw Error("generator g" + std::to_string(idx) + " out of range");
      e.v[static_cast<std::size_t>(idx)] += coeff;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
      if ((s[i] == '+' || s[i] == '-') && i > 0) {
        flush(term);
        term.clear();
      }
      term += s[i];
    }
    flush(term);
  } else {
    std::string spaced = s;
    std::replace(spaced.begin(), spaced.end(), ' ', ',');
    std::vector<std::int64_t> v;
    for (const auto& p : split(spaced, ',', 0))
      if (!p.text.empty()) v.push_back(parse_int(p.text, 0, 0, "exponent"));
    if (v.size() != r) throw Error("expected " + std::to_string(r) + " exponents in '" + s + "'");
    e.v = v;
  }
  g.validate(e);
  return g.normalize(e);
}

GroupSpec build_group(const DocumentSection& s) {
  const auto& type = s.require("type");
  if (type.value == "trivial") return GroupSpec(FiniteGroup::trivial());
  if (type.value == "cyclic" || type.value == "symmetric") {
    const auto& n = s.require("n");
    return located(n, [&] { return GroupSpec(named_group(type.value, positive(n), n)); });
  }
  if (type.value == "product") {
    const auto& f = s.require("factors");
    std::optional<FiniteGroup> g;
    for (const auto& p : split(f.value, ',', 0)) {
      std::size_t lead = 0;
      const std::string t = trim(p.text, &lead);
      const auto sp = t.find(' ');
      if (sp == std::string::npos) fail_at(f.line, f.column + p.offset, "product factor needs 'name n'");
      const std::int64_t n = parse_int(trim(t.substr(sp + 1)), f.line, f.column + p.offset + sp + 1, "order");
      if (n < 1) fail_at(f.line, f.column + p.offset, "order must be positive");
      const FiniteGroup part = named_group(t.substr(0, sp), n, DocumentEntry{f.key, f.value, f.line, f.column + p.offset});
      g = g ? FiniteGroup::direct_product(*g, part) : part;
    }
    if (!g) fail_at(f.line, f.column, "product needs at least one factor");
    return GroupSpec(*g);
  }
  if (type.value == "table") {
    const auto& rows = s.require("rows");
    FiniteGroup::Table table;
    for (const auto& r : split(rows.value, ';', 0)) {
      std::vector<std::size_t> row;
      std::string spaced = r.text;
      std::replace(spaced.begin(), spaced.end(), ',', ' ');
      std::size_t i = 0;
      while (i < spaced.size()) {
        while (i < spaced.size() && spaced[i] == ' ') ++i;
        std::size_t j = i;
        while (j < spaced.size() && spaced[j] != ' ') ++j;
        if (j > i) {
          const auto v = parse_int(spaced.substr(i, j - i), rows.line, rows.column + r.offset + i, "table entry");
          if (v < 0) fail_at(rows.line, rows.column + r.offset + i, "table entry must be nonnegative");
          row.push_back(static_cast<std::size_t>(v));
        }
        i = j;
      }
      table.push_back(row);
    }
    std::size_t identity = 0;
    if (const auto* id = s.find("identity")) {
      const auto v = parse_int(id->value, id->line, id->column, "identity");
      if (v < 0) fail_at(id->line, id->column, "identity must be nonnegative");
      identity = static_cast<std::size_t>(v);
    }
    FiniteGroup g = located(rows, [&] { return FiniteGroup::from_table(table, identity); });
    if (const auto* labels = s.find("labels")) {
      std::vector<std::string> names;
      for (const auto& p : split(labels->value, ',', 0)) names.push_back(p.text);
      located(*labels, [&] {
        g.set_labels(names);
        return 0;
      });
    }
    return GroupSpec(std::move(g));
  }
  if (type.value == "abelian") {
    const auto& orders = s.require("orders");
    std::vector<std::optional<std::int64_t>> out;
    for (const auto& p : split(orders.value, ',', 0)) {
      if (p.text == "inf") {
        out.push_back(std::nullopt);
        continue;
      }
      const auto v = parse_int(p.text, orders.line, orders.column + p.offset, "order");
      if (v < 1) fail_at(orders.line, orders.column + p.offset, "order must be positive or 'inf'");
      out.push_back(v);
    }
    return located(orders, [&] { return GroupSpec(AbelianGroup::from_orders(out)); });
  }
  fail_at(type.line, type.column, "unknown group type '" + type.value + "'");
}

std::optional<FactorSequence> build_factors(const DocumentSection& s) {
  if (s.name.empty()) return std::nullopt;
  const auto& pattern = s.require("pattern");
  auto sizes = [&](const char* key, bool required) {
    const auto* e = required ? &s.require(key) : s.find(key);
    std::vector<std::int64_t> v;
    if (!e) return v;
    v = parse_int_list(e->value, e->line, e->column, key);
    for (auto x : v)
      if (x < 2) fail_at(e->line, e->column, std::string(key) + ": factor sizes must be at least 2");
    return v;
  };
  if (pattern.value == "universal") return FactorSequence::universal();
  if (pattern.value == "constant") {
    const auto& n = s.require("n");
    const auto v = positive(n);
    if (v < 2) fail_at(n.line, n.column, "n must be at least 2");
    return FactorSequence::constant(v);
  }
  if (pattern.value == "prefix") {
    auto v = sizes("entries", true);
    if (v.empty()) fail_at(pattern.line, pattern.column, "prefix needs entries");
    return FactorSequence::prefix(v);
  }
  if (pattern.value == "periodic") {
    auto head = sizes("head", false);
    auto period = sizes("period", true);
    if (period.empty()) fail_at(pattern.line, pattern.column, "periodic needs a nonempty period");
    return FactorSequence::periodic(head, period);
  }
  fail_at(pattern.line, pattern.column, "unknown pattern '" + pattern.value + "'");
}

namespace {

std::vector<Factor> explicit_factors(const DocumentSection& s, const GroupSpec& g, const std::string& part) {
  std::map<std::size_t, std::map<std::size_t, std::pair<Unitary, const DocumentEntry*>>> slots;
  const std::size_t count = image_count(g);
  for (const auto& e : s.entries) {
    if (e.key.rfind(part + ".", 0) != 0) continue;
    const std::string rest = e.key.substr(part.size() + 1);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) fail_at(e.line, 1, "expected '" + part + ".<factor>.<element>'");
    const auto idx = parse_int(rest.substr(0, dot), e.line, 1, "factor index");
    if (idx < 0) fail_at(e.line, 1, "factor index must be nonnegative");
    const std::string name = rest.substr(dot + 1);
    std::size_t slot = 0;
    if (g.is_table()) {
      const Element el = located(e, [&] { return parse_element(g, name); });
      slot = static_cast<std::size_t>(el.v[0]);
    } else {
      if (name.size() < 2 || name[0] != 'g') fail_at(e.line, 1, "presented groups take images of generators g<i>");
      const auto gi = parse_int(name.substr(1), e.line, 1, "generator");
      if (gi < 0 || static_cast<std::size_t>(gi) >= count) fail_at(e.line, 1, "generator out of range");
      slot = static_cast<std::size_t>(gi);
    }
    slots[static_cast<std::size_t>(idx)].emplace(slot, std::make_pair(parse_matrix(e.value, e.line, e.column), &e));
  }
  std::vector<Factor> out;
  for (const auto& [idx, images] : slots) {
    if (idx != out.size()) fail_at(s.line, 1, part + ": factor " + std::to_string(out.size()) + " is missing");
    Factor f;
    f.dim = static_cast<std::int64_t>(images.begin()->second.first.dim());
    for (std::size_t slot = 0; slot < count; ++slot) {
      const auto it = images.find(slot);
      if (it != images.end()) {
        if (static_cast<std::int64_t>(it->second.first.dim()) != f.dim)
          fail_at(it->second.second->line, it->second.second->column, "image dimension differs within the factor");
        f.images.push_back(it->second.first);
        continue;
      }
      if (g.is_table() && slot == g.table().identity()) {
        f.images.push_back(Unitary::identity(static_cast<std::size_t>(f.dim)));
        continue;
      }
      fail_at(s.line, 1,
              part + "." + std::to_string(idx) + ": missing image of " +
                  (g.is_table() ? g.describe(g.element(slot)) : "g" + std::to_string(slot)));
    }
    if (f.dim < 2) fail_at(s.line, 1, part + "." + std::to_string(idx) + ": factors must have dimension at least 2");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

ProductAction build_action(const ActionSpecDocument& doc, const GroupSpec& g) {
  const auto& s = doc.action;
  const auto& ctor = s.require("constructor");
  Theta theta = Theta::sqrt(2);
  if (const auto* t = s.find("theta")) theta = located(*t, [&] { return Theta::parse(t->value); });
  std::optional<ProductAction> a;
  located(ctor, [&] {
    const std::string& c = ctor.value;
    if (c == "regular") a = regular_action(g);
    else if (c == "map-embed") a = map_embed_action(g);
    else if (c == "abelian") a = abelian_action(g, theta);
    else if (c == "trivial") {
      auto f = build_factors(doc.factors);
      if (!f) fail_at(ctor.line, ctor.column, "trivial action needs a [factors] section");
      a = trivial_action(g, *f);
    } else if (c == "sign3" || c == "control") {
      if (!g.is_table() || g.table().order() != 2) fail_at(ctor.line, ctor.column, c + " needs the group Z/2");
      a = c == "sign3" ? sign_three_action() : control_family_action();
    } else if (c == "explicit") {
      auto head = explicit_factors(s, g, "head");
      auto period = explicit_factors(s, g, "period");
      if (period.empty() && head.empty()) fail_at(ctor.line, ctor.column, "explicit action needs head.* or period.* images");
      a = explicit_action(g, head, period, s.get("name", "explicit"));
      for (std::size_t l = 0; l < head.size() + period.size(); ++l)
        if (a->factor_defect(l) > kStructuralTol)
          fail_at(ctor.line, ctor.column, "explicit factor " + std::to_string(l) + " is not a representation");
    } else {
      fail_at(ctor.line, ctor.column, "unknown constructor '" + c + "'");
    }
    return 0;
  });
  if (const auto* copies = s.find("copies")) {
    const auto n = positive(*copies);
    if (n > 1) a = located(*copies, [&] { return tensor_power(*a, static_cast<std::size_t>(n)); });
  }
  if (const auto* il = s.find("interleave")) {
    if (il->value == "identity") a = interleave_identity(*a);
    else if (il->value != "none") fail_at(il->line, il->column, "interleave: expected 'identity' or 'none'");
  }
  return *a;
}

}  // namespace uhf
