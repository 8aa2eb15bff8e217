#include "uhf/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace uhf {

FiniteGroup::FiniteGroup(Table table, std::size_t identity) : table_(std::move(table)), identity_(identity) {
  const std::size_t n = table_.size();
  inverse_.assign(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[a] = b;
}

FiniteGroup FiniteGroup::from_table(Table table, std::size_t identity) {
  const std::size_t n = table.size();
  if (n == 0) throw Error("group table is empty");
  if (identity >= n) throw Error("group identity out of range");
  for (const auto& row : table) {
    if (row.size() != n) throw Error("group table is not square");
    std::vector<bool> seen(n, false);
    for (auto x : row) {
      if (x >= n) throw Error("group table entry out of range");
      if (seen[x]) throw Error("group table row is not a permutation");
      seen[x] = true;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    if (table[identity][a] != a || table[a][identity] != a) throw Error("group table: identity axiom fails");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) throw Error("group table is not associative");
  FiniteGroup g(std::move(table), identity);
  for (std::size_t a = 0; a < n; ++a)
    if (g.inverse_[a] == n || g.table_[g.inverse_[a]][a] != identity) throw Error("group table: missing inverse");
  return g;
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw Error("cyclic group needs n >= 1");
  Table t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(std::move(t), 0);
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  if (n == 0 || n > 6) throw Error("symmetric group supported for 1 <= n <= 6");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = i;
  Table t(perms.size(), std::vector<std::size_t>(perms.size()));
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) {
      std::vector<std::size_t> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = index[c];
    }
  FiniteGroup g(std::move(t), 0);
  std::vector<std::string> labels;
  for (const auto& q : perms) {
    std::string s;
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || q[i] == i) continue;
      s += "(";
      std::size_t j = i;
      bool first = true;
      while (!done[j]) {
        done[j] = true;
        if (!first) s += " ";
        s += std::to_string(j + 1);
        first = false;
        j = q[j];
      }
      s += ")";
    }
    labels.push_back(s.empty() ? "e" : s);
  }
  g.set_labels(std::move(labels));
  return g;
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order();
  Table t(na * nb, std::vector<std::size_t>(na * nb));
  for (std::size_t i = 0; i < na * nb; ++i)
    for (std::size_t j = 0; j < na * nb; ++j) t[i][j] = a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb);
  FiniteGroup g(std::move(t), a.identity() * nb + b.identity());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < na * nb; ++i) labels.push_back("(" + a.label(i / nb) + "," + b.label(i % nb) + ")");
  g.set_labels(std::move(labels));
  return g;
}

std::size_t FiniteGroup::pow(std::size_t a, std::int64_t e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  std::size_t r = identity_;
  for (std::int64_t i = 0; i < e % static_cast<std::int64_t>(element_order(a)); ++i) r = mul(r, a);
  return r;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t k = 1;
  for (std::size_t x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

std::size_t FiniteGroup::exponent() const {
  std::size_t e = 1;
  for (std::size_t a = 0; a < order(); ++a) e = std::lcm(e, element_order(a));
  return e;
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < order(); ++a)
    for (std::size_t b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool FiniteGroup::is_subgroup(const ElementSet& h) const {
  if (h.empty()) return false;
  std::vector<bool> in(order(), false);
  for (auto x : h) {
    if (x >= order()) return false;
    in[x] = true;
  }
  if (!in[identity_]) return false;
  for (auto x : h)
    for (auto y : h)
      if (!in[mul(x, inv(y))]) return false;
  return true;
}

ElementSet FiniteGroup::generated_by(std::span<const std::size_t> gens) const {
  std::set<std::size_t> s{identity_};
  std::vector<std::size_t> frontier{identity_};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto x : frontier)
      for (auto g : gens) {
        const std::size_t y = mul(x, g);
        if (s.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {s.begin(), s.end()};
}

std::vector<ElementSet> FiniteGroup::conjugacy_classes() const {
  std::vector<bool> seen(order(), false);
  std::vector<ElementSet> out;
  // the identity class first, then by least element
  std::vector<std::size_t> order_of_visit{identity_};
  for (std::size_t a = 0; a < order(); ++a)
    if (a != identity_) order_of_visit.push_back(a);
  for (auto a : order_of_visit) {
    if (seen[a]) continue;
    std::set<std::size_t> cls;
    for (std::size_t g = 0; g < order(); ++g) cls.insert(mul(mul(g, a), inv(g)));
    for (auto x : cls) seen[x] = true;
    out.emplace_back(cls.begin(), cls.end());
  }
  return out;
}

std::string FiniteGroup::label(std::size_t a) const {
  if (a < labels_.size()) return labels_[a];
  return std::to_string(a);
}

void FiniteGroup::set_labels(std::vector<std::string> labels) {
  if (labels.size() != order()) throw Error("group labels: size mismatch");
  labels_ = std::move(labels);
}

// ---------------------------------------------------------------------------

Subgroup subgroup(const FiniteGroup& g, const ElementSet& h) {
  ElementSet sorted = h;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!g.is_subgroup(sorted)) throw Error("subset is not a subgroup");
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < sorted.size(); ++i) local[sorted[i]] = i;
  FiniteGroup::Table t(sorted.size(), std::vector<std::size_t>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j < sorted.size(); ++j) t[i][j] = local.at(g.mul(sorted[i], sorted[j]));
  FiniteGroup sub = FiniteGroup::from_table(std::move(t), local.at(g.identity()));
  std::vector<std::string> labels;
  for (auto x : sorted) labels.push_back(g.label(x));
  sub.set_labels(std::move(labels));
  return {std::move(sub), sorted};
}

std::vector<std::size_t> coset_representatives(const FiniteGroup& g, const ElementSet& h) {
  if (!g.is_subgroup(h)) throw Error("coset representatives: not a subgroup");
  std::vector<bool> covered(g.order(), false);
  std::vector<std::size_t> reps;
  for (std::size_t a = 0; a < g.order(); ++a) {
    if (covered[a]) continue;
    reps.push_back(a);
    for (auto x : h) covered[g.mul(a, x)] = true;
  }
  return reps;
}

ElementSet normal_core(const FiniteGroup& g, const ElementSet& h) {
  if (!g.is_subgroup(h)) throw Error("normal core: not a subgroup");
  std::set<std::size_t> core(h.begin(), h.end());
  for (std::size_t x = 0; x < g.order(); ++x) {
    std::set<std::size_t> conj;
    for (auto y : h) conj.insert(g.mul(g.mul(x, y), g.inv(x)));
    std::set<std::size_t> next;
    std::set_intersection(core.begin(), core.end(), conj.begin(), conj.end(), std::inserter(next, next.begin()));
    core = std::move(next);
  }
  return {core.begin(), core.end()};
}

Quotient quotient(const FiniteGroup& g, const ElementSet& normal) {
  ElementSet n = normal;
  std::sort(n.begin(), n.end());
  if (normal_core(g, n) != n) throw Error("quotient: subgroup is not normal");
  const auto reps = coset_representatives(g, n);
  std::vector<std::size_t> proj(g.order());
  for (std::size_t c = 0; c < reps.size(); ++c)
    for (auto x : n) proj[g.mul(reps[c], x)] = c;
  FiniteGroup::Table t(reps.size(), std::vector<std::size_t>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) t[i][j] = proj[g.mul(reps[i], reps[j])];
  return {FiniteGroup::from_table(std::move(t), proj[g.identity()]), std::move(proj), reps};
}

Representation regular_representation(const FiniteGroup& g) {
  Representation rho{g.order(), {}};
  for (std::size_t h = 0; h < g.order(); ++h) {
    std::vector<std::size_t> perm(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) perm[x] = g.mul(h, x);
    rho.images.push_back(Unitary::permutation(std::move(perm)));
  }
  return rho;
}

Representation trivial_representation(const FiniteGroup& g, std::size_t dim) {
  return {dim, std::vector<Unitary>(g.order(), Unitary::identity(dim))};
}

double homomorphism_defect(const FiniteGroup& g, const Representation& rho) {
  if (rho.images.size() != g.order()) throw Error("representation: image count differs from group order");
  double d = operator_norm(rho.images[g.identity()].dense() - identity(rho.dim));
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      d = std::max(d, operator_norm((rho.images[a] * rho.images[b]).dense() - rho.images[g.mul(a, b)].dense()));
  return d;
}

bool is_homomorphism(const FiniteGroup& g, const Representation& rho, double tol) {
  return homomorphism_defect(g, rho) <= tol;
}

Representation compose(const Representation& rho, std::span<const std::size_t> hom) {
  Representation out{rho.dim, {}};
  for (auto x : hom) out.images.push_back(rho.images.at(x));
  return out;
}

Representation induce(const Representation& rho, const FiniteGroup& g, const ElementSet& h) {
  const Subgroup sub = subgroup(g, h);
  if (rho.images.size() != sub.embedding.size()) throw Error("induce: representation does not match the subgroup");
  if (!is_homomorphism(sub.group, rho, 1e-9)) throw Error("induce: rho is not a homomorphism on H");
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < sub.embedding.size(); ++i) local[sub.embedding[i]] = i;
  const auto reps = coset_representatives(g, sub.embedding);
  const std::size_t k = reps.size(), n = rho.dim;
  bool exact = true;
  for (const auto& u : rho.images) exact = exact && u.is_exact();

  Representation out{k * n, {}};
  for (std::size_t x = 0; x < g.order(); ++x) {
    // block (i, j) = rho(r_i^{-1} x r_j) when that lies in H
    std::vector<std::pair<std::size_t, std::size_t>> target(k);  // j -> (i, local h)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t y = g.mul(x, reps[j]);
      for (std::size_t i = 0; i < k; ++i) {
        auto it = local.find(g.mul(g.inv(reps[i]), y));
        if (it != local.end()) {
          target[j] = {i, it->second};
          break;
        }
      }
    }
    if (exact) {
      Unitary::Monomial m;
      m.perm.resize(k * n);
      m.phase.resize(k * n);
      for (std::size_t j = 0; j < k; ++j) {
        const auto& blk = rho.images[target[j].second].monomial();
        for (std::size_t c = 0; c < n; ++c) {
          m.perm[j * n + c] = target[j].first * n + blk.perm[c];
          m.phase[j * n + c] = blk.phase[c];
        }
      }
      out.images.push_back(Unitary::from_monomial(std::move(m)));
    } else {
      Matrix u = Matrix::Zero(static_cast<Eigen::Index>(k * n), static_cast<Eigen::Index>(k * n));
      for (std::size_t j = 0; j < k; ++j)
        u.block(static_cast<Eigen::Index>(target[j].first * n), static_cast<Eigen::Index>(j * n),
                static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = rho.images[target[j].second].dense();
      out.images.push_back(Unitary::from_matrix(std::move(u)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Class constants c_ijk = #{(x, y) in C_i x C_j : xy = z_k} for a fixed z_k in C_k.
std::vector<Matrix> class_matrices(const FiniteGroup& g, const std::vector<ElementSet>& classes,
                                   const std::vector<std::size_t>& class_of) {
  const auto r = static_cast<Eigen::Index>(classes.size());
  std::vector<Matrix> a(classes.size(), Matrix::Zero(r, r));
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = 0; j < classes.size(); ++j)
      for (auto x : classes[i])
        for (auto y : classes[j]) {
          const std::size_t z = g.mul(x, y);
          const std::size_t k = class_of[z];
          if (z == classes[k].front()) a[i](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += 1.0;
        }
  return a;
}

bool try_characters(const FiniteGroup& g, CharacterTable& t, unsigned seed) {
  const auto a = class_matrices(g, t.classes, t.class_of);
  const auto r = static_cast<Eigen::Index>(t.classes.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m = Matrix::Zero(r, r);
  for (const auto& ai : a) m += dist(rng) * ai;
  Eigen::ComplexEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) return false;
  const double n = static_cast<double>(g.order());
  std::vector<std::pair<double, std::vector<Complex>>> chars;
  for (Eigen::Index c = 0; c < r; ++c) {
    Vector w = es.eigenvectors().col(c);
    if (std::abs(w(0)) < 1e-8) return false;
    w /= w(0);
    std::vector<Complex> values(static_cast<std::size_t>(r));
    double s = 0.0;
    for (Eigen::Index k = 0; k < r; ++k) {
      const double size = static_cast<double>(t.classes[static_cast<std::size_t>(k)].size());
      values[static_cast<std::size_t>(k)] = w(k) / size;
      s += size * std::norm(values[static_cast<std::size_t>(k)]);
    }
    const double degree = std::sqrt(n / s);
    if (std::abs(degree - std::round(degree)) > 1e-6) return false;
    chars.emplace_back(std::round(degree), std::move(values));
  }
  // orthogonality of the unnormalized characters
  for (std::size_t i = 0; i < chars.size(); ++i)
    for (std::size_t j = 0; j < chars.size(); ++j) {
      Complex ip = 0.0;
      for (std::size_t k = 0; k < chars[i].second.size(); ++k)
        ip += static_cast<double>(t.classes[k].size()) * chars[i].first * chars[i].second[k] *
              std::conj(chars[j].first * chars[j].second[k]);
      if (std::abs(ip / n - (i == j ? 1.0 : 0.0)) > 1e-6) return false;
    }
  auto key = [](const std::vector<Complex>& v) {
    std::vector<double> k;
    for (const auto& z : v) {
      double ph = std::arg(z) / kTwoPi;
      if (ph < -1e-9) ph += 1.0;
      k.push_back(std::abs(z) < 1e-9 ? 2.0 : std::round(ph * 1e8) / 1e8);
    }
    return k;
  };
  std::sort(chars.begin(), chars.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return key(x.second) < key(y.second);
  });
  for (auto& c : chars) {
    t.degrees.push_back(c.first);
    t.normalized.push_back(std::move(c.second));
  }
  return true;
}

}  // namespace

CharacterTable character_table(const FiniteGroup& g) {
  CharacterTable t;
  t.classes = g.conjugacy_classes();
  t.class_of.assign(g.order(), 0);
  for (std::size_t c = 0; c < t.classes.size(); ++c)
    for (auto x : t.classes[c]) t.class_of[x] = c;
  for (unsigned seed = 1; seed <= 16; ++seed) {
    CharacterTable attempt = t;
    if (try_characters(g, attempt, seed)) return attempt;
  }
  throw Error("character table: class algebra diagonalization failed");
}

std::vector<SeparatingFamily> map_embedding(const FiniteGroup& g) {
  const CharacterTable t = character_table(g);
  const auto e = static_cast<std::int64_t>(g.exponent());
  std::vector<std::vector<Rational>> linear;  // exact phases per element
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.degrees[i] != 1.0) continue;
    std::vector<Rational> ph(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
      const Complex z = t.normalized[i][t.class_of[x]];
      const auto num = static_cast<std::int64_t>(std::llround(std::arg(z) / kTwoPi * static_cast<double>(e)));
      ph[x] = reduce_phase(Rational(num, e));
    }
    linear.push_back(std::move(ph));
  }
  const Representation reg = regular_representation(g);
  std::vector<SeparatingFamily> out;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (x == g.identity()) continue;
    SeparatingFamily f{x, {}, false};
    for (const auto& ph : linear)
      if (ph[x] != Rational(0)) {
        f.from_character = true;
        f.psi.dim = 2;
        for (std::size_t y = 0; y < g.order(); ++y) f.psi.images.push_back(Unitary::diagonal_phases({Rational(0), ph[y]}));
        break;
      }
    if (!f.from_character) {
      f.psi.dim = g.order() + 1;
      for (std::size_t y = 0; y < g.order(); ++y) f.psi.images.push_back(direct_sum(Unitary::identity(1), reg.images[y]));
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace uhf
