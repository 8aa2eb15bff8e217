#include "uhf/actions.hpp"

#include <algorithm>
#include <cmath>

namespace uhf {

std::size_t image_count(const GroupSpec& g) { return g.is_table() ? g.table().order() : g.presented().rank(); }

namespace {

bool same_group(const GroupSpec& a, const GroupSpec& b) {
  if (a.is_table() != b.is_table()) return false;
  if (a.is_table()) return a.table().table() == b.table().table() && a.table().identity() == b.table().identity();
  const auto& x = a.presented().generators();
  const auto& y = b.presented().generators();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i].order != y[i].order) return false;
  return true;
}

}  // namespace

Factor block_factor(const ProductAction& a, std::size_t begin, std::size_t end) {
  Factor out;
  out.dim = a.factors().product(begin, end);
  std::vector<Factor> parts;
  for (std::size_t l = begin; l < end; ++l) parts.push_back(a.factor(l));
  for (std::size_t i = 0; i < image_count(a.group()); ++i) {
    std::vector<Unitary> us;
    for (const auto& f : parts) us.push_back(f.images[i]);
    out.images.push_back(kron_all(us));
  }
  return out;
}

ProductAction tensor_actions(const std::vector<ProductAction>& parts, std::string name) {
  if (parts.empty()) throw Error("interleave: no actions");
  std::vector<FactorSequence> seqs;
  std::vector<std::optional<std::size_t>> lengths;
  for (const auto& p : parts) {
    if (!same_group(p.group(), parts.front().group())) throw Error("tensor: actions are of different groups");
    seqs.push_back(p.factors());
    lengths.push_back(p.factors().length());
  }
  Interleaving map(lengths);
  return ProductAction(parts.front().group(), interleave(seqs),
                       [parts, map](std::size_t l) {
                         auto [s, i] = map.source(l);
                         return parts[s].factor(i);
                       },
                       std::move(name));
}

ProductAction::ProductAction(GroupSpec group, FactorSequence factors, FactorFn fn, std::string name)
    : group_(std::make_shared<const GroupSpec>(std::move(group))),
      factors_(std::move(factors)),
      fn_(std::move(fn)),
      name_(std::move(name)) {}

Factor ProductAction::factor(std::size_t l) const {
  const std::int64_t n = factors_.at(l);
  Factor f = fn_(l);
  if (f.dim != n) throw Error(name_ + ": factor " + std::to_string(l + 1) + " has the wrong size");
  if (f.images.size() != image_count(*group_)) throw Error(name_ + ": factor image count does not match the group");
  for (const auto& u : f.images)
    if (static_cast<std::int64_t>(u.dim()) != n) throw Error(name_ + ": factor image has the wrong dimension");
  return f;
}

Unitary ProductAction::factor_image(const Element& g, std::size_t l) const {
  group_->validate(g);
  Factor f = factor(l);
  if (group_->is_table()) return f.images[static_cast<std::size_t>(g.v[0])];
  const Element n = group_->normalize(g);
  Unitary u = Unitary::identity(static_cast<std::size_t>(f.dim));
  for (std::size_t i = 0; i < n.v.size(); ++i)
    if (n.v[i] != 0) u = u * f.images[i].pow(n.v[i]);
  return u;
}

Unitary ProductAction::block_image(const Element& g, std::size_t begin, std::size_t end) const {
  if (end < begin) throw Error("block_image: empty range");
  std::vector<Unitary> us;
  for (std::size_t l = begin; l < end; ++l) us.push_back(factor_image(g, l));
  if (us.empty()) return Unitary::identity(1);
  return kron_all(us);
}

StageUnitary ProductAction::stage(const Element& g, std::size_t stage) const {
  return {factors_.head(stage), evaluate(g, stage)};
}

double ProductAction::factor_defect(std::size_t l) const {
  const Factor f = factor(l);
  if (group_->is_table()) return homomorphism_defect(group_->table(), Representation{static_cast<std::size_t>(f.dim), f.images});
  const auto& gens = group_->presented().generators();
  const Matrix one = identity(static_cast<std::size_t>(f.dim));
  double d = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].order) d = std::max(d, operator_norm(f.images[i].pow(*gens[i].order).dense() - one));
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      d = std::max(d, operator_norm((f.images[i] * f.images[j]).dense() - (f.images[j] * f.images[i]).dense()));
  }
  return d;
}

// ---------------------------------------------------------------------------

ProductAction explicit_action(GroupSpec group, std::vector<Factor> head, std::vector<Factor> period, std::string name) {
  std::vector<std::int64_t> h, p;
  for (const auto& f : head) h.push_back(f.dim);
  for (const auto& f : period) p.push_back(f.dim);
  auto seq = FactorSequence::periodic(h, p);
  ProductAction a(std::move(group), std::move(seq),
                  [head, period](std::size_t l) {
                    return l < head.size() ? head[l] : period[(l - head.size()) % period.size()];
                  },
                  std::move(name));
  for (std::size_t l = 0; l < head.size() + period.size(); ++l)
    if (a.factor_defect(l) > kStructuralTol)
      throw Error(a.name() + ": factor " + std::to_string(l + 1) + " is not a homomorphism");
  return a;
}

ProductAction constant_action(GroupSpec group, const Representation& rho, std::string name) {
  return explicit_action(std::move(group), {}, {Factor{static_cast<std::int64_t>(rho.dim), rho.images}}, std::move(name));
}

ProductAction regular_action(const GroupSpec& g) {
  if (g.table().order() < 2) throw Error("regular action needs a nontrivial group");
  return constant_action(g, regular_representation(g.table()), "regular");
}

ProductAction trivial_action(const GroupSpec& g, FactorSequence factors) {
  const std::size_t count = image_count(g);
  return ProductAction(g, factors,
                       [factors, count](std::size_t l) {
                         const std::int64_t n = factors.at(l);
                         return Factor{n, std::vector<Unitary>(count, Unitary::identity(static_cast<std::size_t>(n)))};
                       },
                       "trivial");
}

ProductAction map_embed_action(const GroupSpec& g) {
  const auto fam = map_embedding(g.table());
  if (fam.empty()) throw Error("map-embed action needs a nontrivial group");
  std::vector<Factor> period;
  for (const auto& f : fam) period.push_back({static_cast<std::int64_t>(f.psi.dim), f.psi.images});
  return explicit_action(g, {}, std::move(period), "map-embed");
}

Unitary diagonal_flow(std::int64_t n, const Theta& theta, const Rational& r) {
  if (n < 1) throw Error("diagonal_flow: n must be positive");
  const bool odd = n % 2 == 1;
  if (odd || theta.is_rational()) {
    const Rational t = odd ? Rational(1) : *theta.exact;
    std::vector<Rational> ph;
    for (std::int64_t l = 1; l <= n; ++l) ph.push_back(t * r * l);
    return Unitary::diagonal_phases(std::move(ph));
  }
  return diagonal_flow(n, theta, boost::rational_cast<double>(r));
}

Unitary diagonal_flow(std::int64_t n, const Theta& theta, double r) {
  if (n < 1) throw Error("diagonal_flow: n must be positive");
  const double t = n % 2 == 1 ? 1.0 : theta.value;
  Vector d(n);
  for (std::int64_t l = 1; l <= n; ++l) {
    const double x = t * static_cast<double>(l) * r;
    d(l - 1) = phase_value(x - std::floor(x));
  }
  return Unitary::from_diagonal(std::move(d));
}

Unitary cycle_unitary(std::int64_t n) {
  if (n < 1) throw Error("cycle_unitary: n must be positive");
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = (j + 1) % perm.size();
  return Unitary::permutation(std::move(perm));
}

// ---------------------------------------------------------------------------

ProductAction tensor_actions(const ProductAction& a, const ProductAction& b) {
  return tensor_actions(std::vector<ProductAction>{a, b}, "tensor(" + a.name() + "," + b.name() + ")");
}

ProductAction sum_actions(const ProductAction& a, const ProductAction& b) {
  const GroupSpec sum = direct_sum(a.group(), b.group());
  Interleaving map({a.factors().length(), b.factors().length()});
  const bool table = sum.is_table();
  const std::size_t na = image_count(a.group()), nb = image_count(b.group());
  return ProductAction(
      sum, interleave({a.factors(), b.factors()}),
      [a, b, map, table, na, nb](std::size_t l) {
        auto [s, i] = map.source(l);
        const Factor f = s == 0 ? a.factor(i) : b.factor(i);
        const Unitary one = Unitary::identity(static_cast<std::size_t>(f.dim));
        Factor out{f.dim, {}};
        if (table) {
          // element (x, y) has index x * |b| + y
          for (std::size_t x = 0; x < na; ++x)
            for (std::size_t y = 0; y < nb; ++y) out.images.push_back(s == 0 ? f.images[x] : f.images[y]);
        } else {
          for (std::size_t x = 0; x < na; ++x) out.images.push_back(s == 0 ? f.images[x] : one);
          for (std::size_t y = 0; y < nb; ++y) out.images.push_back(s == 0 ? one : f.images[y]);
        }
        return out;
      },
      "sum(" + a.name() + "," + b.name() + ")");
}

ProductAction tensor_power(const ProductAction& a, std::size_t copies) {
  if (copies == 0) throw Error("tensor_power: copies must be at least 1");
  if (copies == 1) return a;
  return tensor_actions(std::vector<ProductAction>(copies, a), "power(" + a.name() + "," + std::to_string(copies) + ")");
}

IncreasingBlocks increasing_blocks(const FactorSequence& seq, std::int64_t max_size) {
  IncreasingBlocks out;
  std::size_t begin = 0;
  std::int64_t prev = 1;
  while (seq.has(begin)) {
    std::size_t end = begin;
    std::int64_t size = 1;
    while (size <= prev) {
      if (!seq.has(end)) return out;
      const std::int64_t n = seq.at(end++);
      if (size > max_size / n) return out;
      size *= n;
    }
    if (size > max_size) return out;
    out.blocks.emplace_back(begin, end);
    out.sizes.push_back(size);
    prev = size;
    begin = end;
  }
  return out;
}

ProductAction interleave_identity(const ProductAction& a) {
  if (a.factors().is_finite()) throw Error("interleave_identity needs an infinite factor sequence");
  const std::size_t count = image_count(a.group());
  return ProductAction(a.group(), FactorSequence::universal(),
                       [a, count](std::size_t l) {
                         const auto n = static_cast<std::int64_t>(l) + 2;
                         const auto blocks = increasing_blocks(a.factors(), n);
                         if (!blocks.sizes.empty() && blocks.sizes.back() == n)
                           return block_factor(a, blocks.blocks.back().first, blocks.blocks.back().second);
                         return Factor{n, std::vector<Unitary>(count, Unitary::identity(static_cast<std::size_t>(n)))};
                       },
                       "interleave(" + a.name() + ")");
}

std::vector<std::size_t> interleave_positions(const ProductAction& a, std::size_t count) {
  std::vector<std::size_t> out;
  std::int64_t cap = 1 << 20;
  auto blocks = increasing_blocks(a.factors(), cap);
  for (std::size_t j = 0; j < std::min(count, blocks.sizes.size()); ++j)
    out.push_back(static_cast<std::size_t>(blocks.sizes[j] - 2));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<FlowSummand> abelian_summands(const AbelianGroup& g, const Theta& theta) {
  std::set<std::size_t> coords;
  for (const auto& gen : g.generators())
    for (const auto& [c, v] : gen.coordinate.support()) coords.insert(c);
  std::vector<FlowSummand> out;
  for (auto c : coords) {
    bool q_used = false, r_used = false;
    std::optional<Theta> own;
    std::size_t users = 0;
    for (const auto& gen : g.generators()) {
      const auto v = gen.coordinate.at(c);
      q_used = q_used || v.q != Rational(0);
      r_used = r_used || v.r != Rational(0);
      if (v.q != Rational(0) || v.r != Rational(0)) {
        ++users;
        own = gen.theta;
      }
    }
    if (q_used) {
      const Theta t = users == 1 && own ? *own : theta;
      if (t.is_rational())
        throw Error("abelian action: theta = " + t.label +
                    " is rational, but an infinite-order coordinate needs an irrational flow to be separated");
      out.push_back({c, true, t});
    }
    if (r_used) out.push_back({c, false, Theta::rational(Rational(1))});
  }
  return out;
}

std::vector<ProductAction> abelian_summand_actions(const GroupSpec& g, const Theta& theta) {
  const auto& pres = g.presented();
  const auto summands = abelian_summands(pres, theta);
  std::vector<ProductAction> parts;
  for (const auto& s : summands) {
    std::vector<Rational> values;
    for (const auto& gen : pres.generators()) {
      const auto v = gen.coordinate.at(s.coordinate);
      values.push_back(s.rational_part ? v.q : v.r);
    }
    const std::string name = std::string(s.rational_part ? "flow-Q" : "flow-Q/Z") + "[" + std::to_string(s.coordinate) + "]";
    parts.emplace_back(g, FactorSequence::universal(),
                       [values, s](std::size_t l) {
                         const auto n = static_cast<std::int64_t>(l) + 2;
                         Factor f{n, {}};
                         for (const auto& r : values) f.images.push_back(diagonal_flow(n, s.theta, r));
                         return f;
                       },
                       name);
  }
  return parts;
}

ProductAction abelian_action(const GroupSpec& g, const Theta& theta) {
  auto parts = abelian_summand_actions(g, theta);
  if (parts.empty()) return trivial_action(g, FactorSequence::universal());
  if (parts.size() == 1) return parts.front();
  return tensor_actions(parts, "abelian");
}

}  // namespace uhf
