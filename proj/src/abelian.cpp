#include <algorithm>
#include <cmath>
#include <numeric>

#include "uhf/groups.hpp"

namespace uhf {

void AbelianElement::set(std::size_t index, Rational q, Rational r) {
  r = reduce_phase(r);
  if (q == Rational(0) && r == Rational(0))
    coords_.erase(index);
  else
    coords_[index] = {q, r};
}

AbelianElement::Coordinate AbelianElement::at(std::size_t index) const {
  auto it = coords_.find(index);
  if (it == coords_.end()) return {Rational(0), Rational(0)};
  return it->second;
}

AbelianElement AbelianElement::scaled(std::int64_t n) const {
  AbelianElement out;
  for (const auto& [i, c] : coords_) out.set(i, c.q * n, c.r * n);
  return out;
}

AbelianElement AbelianElement::shifted(std::size_t offset) const {
  AbelianElement out;
  for (const auto& [i, c] : coords_) out.set(i + offset, c.q, c.r);
  return out;
}

AbelianElement operator+(const AbelianElement& a, const AbelianElement& b) {
  AbelianElement out = a;
  for (const auto& [i, c] : b.coords_) {
    const auto x = a.at(i);
    out.set(i, x.q + c.q, x.r + c.r);
  }
  return out;
}

bool operator==(const AbelianElement& a, const AbelianElement& b) {
  if (a.coords_.size() != b.coords_.size()) return false;
  for (const auto& [i, c] : a.coords_) {
    const auto d = b.at(i);
    if (c.q != d.q || c.r != d.r) return false;
  }
  return true;
}

Theta Theta::rational(Rational r) {
  Theta t;
  t.value = boost::rational_cast<double>(r);
  t.exact = r;
  t.label = r.denominator() == 1 ? std::to_string(r.numerator())
                                  : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  return t;
}

Theta Theta::sqrt(std::int64_t n) {
  if (n <= 0) throw Error("theta: sqrt needs a positive argument");
  const auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (s * s == n) return rational(Rational(s));
  Theta t;
  t.value = std::sqrt(static_cast<double>(n));
  t.label = "sqrt" + std::to_string(n);
  return t;
}

Theta Theta::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '(' && c != ')') s += c;
  if (s.rfind("sqrt", 0) == 0) return sqrt(std::stoll(s.substr(4)));
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) return rational(Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))));
    const auto dot = s.find('.');
    if (dot == std::string::npos) return rational(Rational(std::stoll(s)));
    const std::string frac = s.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !s.empty() && s[0] == '-';
    const std::int64_t whole = std::stoll(s.substr(0, dot).empty() || s.substr(0, dot) == "-" ? "0" : s.substr(0, dot));
    const std::int64_t part = frac.empty() ? 0 : std::stoll(frac);
    return rational(Rational(whole * den + (neg ? -part : part), den));
  } catch (const std::logic_error&) {
    throw Error("theta: cannot parse '" + text + "'");
  }
}

AbelianGroup AbelianGroup::from_orders(std::vector<std::optional<std::int64_t>> orders) {
  std::vector<AbelianGenerator> gens;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    AbelianGenerator g;
    g.order = orders[i];
    if (g.order)
      g.coordinate.set(i, Rational(0), Rational(1, *g.order));
    else
      g.coordinate.set(i, Rational(1), Rational(0));
    gens.push_back(std::move(g));
  }
  return AbelianGroup(std::move(gens));
}

AbelianGroup::AbelianGroup(std::vector<AbelianGenerator> gens) : gens_(std::move(gens)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    const std::string name = "generator " + std::to_string(i);
    if (g.order) {
      if (*g.order < 1) throw Error(name + ": order must be positive");
      std::int64_t den = 1;
      for (const auto& [idx, c] : g.coordinate.support()) {
        if (c.q != Rational(0)) throw Error(name + ": finite order but coordinate has a Q part");
        den = std::lcm(den, c.r.denominator());
      }
      if (den != *g.order) throw Error(name + ": coordinate order does not match the declared order");
    } else {
      bool free = false;
      for (const auto& [idx, c] : g.coordinate.support()) free = free || c.q != Rational(0);
      if (!free) throw Error(name + ": infinite order needs a nonzero Q coordinate");
    }
  }
}

bool AbelianGroup::is_finite() const {
  return std::all_of(gens_.begin(), gens_.end(), [](const auto& g) { return g.order.has_value(); });
}

std::size_t AbelianGroup::max_coordinate() const {
  std::size_t m = 0;
  for (const auto& g : gens_)
    for (const auto& [idx, c] : g.coordinate.support()) m = std::max(m, idx);
  return m;
}

// ---------------------------------------------------------------------------

const FiniteGroup& GroupSpec::table() const {
  if (!is_table()) throw Error("group is not given by a table");
  return std::get<FiniteGroup>(g_);
}

const AbelianGroup& GroupSpec::presented() const {
  if (is_table()) throw Error("group is not presented by generators");
  return std::get<AbelianGroup>(g_);
}

bool GroupSpec::is_finite() const { return is_table() || presented().is_finite(); }
bool GroupSpec::is_abelian() const { return !is_table() || table().is_abelian(); }

Element GroupSpec::identity() const {
  if (is_table()) return {{static_cast<std::int64_t>(table().identity())}};
  return {std::vector<std::int64_t>(presented().rank(), 0)};
}

void GroupSpec::validate(const Element& a) const {
  if (is_table()) {
    if (a.v.size() != 1 || a.v[0] < 0 || static_cast<std::size_t>(a.v[0]) >= table().order())
      throw Error("element is not in the group");
  } else if (a.v.size() != presented().rank()) {
    throw Error("element has " + std::to_string(a.v.size()) + " exponents, group has " +
                std::to_string(presented().rank()) + " generators");
  }
}

Element GroupSpec::normalize(const Element& a) const {
  validate(a);
  if (is_table()) return a;
  Element out = a;
  const auto& gens = presented().generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].order) out.v[i] = ((out.v[i] % *gens[i].order) + *gens[i].order) % *gens[i].order;
  return out;
}

Element GroupSpec::multiply(const Element& a, const Element& b) const {
  validate(a);
  validate(b);
  if (is_table())
    return {{static_cast<std::int64_t>(table().mul(static_cast<std::size_t>(a.v[0]), static_cast<std::size_t>(b.v[0])))}};
  Element out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return normalize(out);
}

Element GroupSpec::inverse(const Element& a) const {
  validate(a);
  if (is_table()) return {{static_cast<std::int64_t>(table().inv(static_cast<std::size_t>(a.v[0])))}};
  Element out = a;
  for (auto& x : out.v) x = -x;
  return normalize(out);
}

Element GroupSpec::power(const Element& a, std::int64_t e) const {
  validate(a);
  if (is_table()) return {{static_cast<std::int64_t>(table().pow(static_cast<std::size_t>(a.v[0]), e))}};
  Element out = a;
  for (auto& x : out.v) x *= e;
  return normalize(out);
}

bool GroupSpec::is_identity(const Element& a) const { return normalize(a) == identity(); }

std::optional<std::int64_t> GroupSpec::order_of(const Element& a) const {
  const Element n = normalize(a);
  if (is_table()) return static_cast<std::int64_t>(table().element_order(static_cast<std::size_t>(n.v[0])));
  std::int64_t ord = 1;
  const auto& gens = presented().generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (n.v[i] == 0) continue;
    if (!gens[i].order) return std::nullopt;
    ord = std::lcm(ord, *gens[i].order / std::gcd(*gens[i].order, n.v[i]));
  }
  return ord;
}

Element GroupSpec::element(std::size_t index) const {
  if (index >= table().order()) throw Error("element index out of range");
  return {{static_cast<std::int64_t>(index)}};
}

Element GroupSpec::generator(std::size_t i) const {
  if (i >= presented().rank()) throw Error("generator index out of range");
  Element e = identity();
  e.v[i] = 1;
  return normalize(e);
}

std::vector<Element> GroupSpec::elements() const {
  if (is_table()) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < table().order(); ++i) out.push_back(element(i));
    return out;
  }
  if (!is_finite()) throw Error("group is infinite");
  std::vector<Element> out{identity()};
  const auto& gens = presented().generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<Element> next;
    for (const auto& x : out)
      for (std::int64_t k = 0; k < *gens[i].order; ++k) {
        Element y = x;
        y.v[i] = k;
        next.push_back(y);
      }
    out = std::move(next);
    if (out.size() > 1u << 20) throw Error("group too large to enumerate");
  }
  return out;
}

std::vector<Element> GroupSpec::tracked(std::size_t ball) const {
  std::vector<Element> out;
  if (is_table()) {
    for (std::size_t i = 0; i < table().order() && out.size() < ball; ++i)
      if (i != table().identity()) out.push_back(element(i));
    return out;
  }
  const std::size_t r = presented().rank();
  for (std::size_t i = 0; i < r; ++i) {
    Element g = generator(i);
    if (!is_identity(g)) out.push_back(g);
  }
  // exponent vectors with entries in {-1, 0, 1}
  std::vector<std::int64_t> e(r, -1);
  while (out.size() < ball && r > 0) {
    Element x = normalize({e});
    if (!is_identity(x) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    std::size_t i = 0;
    while (i < r && e[i] == 1) e[i++] = -1;
    if (i == r) break;
    ++e[i];
  }
  return out;
}

std::string GroupSpec::describe(const Element& a) const {
  const Element n = normalize(a);
  if (is_table()) return table().label(static_cast<std::size_t>(n.v[0]));
  std::string s;
  for (std::size_t i = 0; i < n.v.size(); ++i) {
    if (n.v[i] == 0) continue;
    if (!s.empty()) s += "+";
    s += (n.v[i] == 1 ? "" : std::to_string(n.v[i])) + "g" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

GroupSpec direct_sum(const GroupSpec& a, const GroupSpec& b) {
  if (a.is_table() && b.is_table()) return GroupSpec(FiniteGroup::direct_product(a.table(), b.table()));
  if (a.is_table() || b.is_table()) throw Error("direct sum of a table group with a presented group is not supported");
  std::vector<AbelianGenerator> gens = a.presented().generators();
  const std::size_t offset = a.presented().max_coordinate() + 1;
  for (auto g : b.presented().generators()) {
    g.coordinate = g.coordinate.shifted(offset);
    gens.push_back(std::move(g));
  }
  return GroupSpec(AbelianGroup(std::move(gens)));
}

}  // namespace uhf
