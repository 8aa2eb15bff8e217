#include "uhf/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uhf {

namespace {

double geometric(std::size_t l) { return std::ldexp(1.0, -static_cast<int>(l)); }

Eigen::VectorXd kron_ones(const Eigen::VectorXd& v, std::int64_t q, std::int64_t r) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size() * q + r);
  for (Eigen::Index i = 0; i < v.size(); ++i) out.segment(i * q, q).setConstant(v(i));
  return out;
}

Factor restrict_factor(const Factor& f, const std::vector<std::size_t>& selected) {
  Factor out{static_cast<std::int64_t>(selected.size()), {}};
  for (const auto& u : f.images) {
    if (!u.is_exact() || !u.is_diagonal()) throw Error("cut_down: block image is not an exact diagonal unitary");
    const auto ph = u.diagonal_phases_exact();
    std::vector<Rational> sub;
    for (auto i : selected) sub.push_back(ph[i]);
    out.images.push_back(Unitary::diagonal_phases(std::move(sub)));
  }
  return out;
}

}  // namespace

Regrouping make_regrouping(const FactorSequence& seq, const Partition& p) {
  for (auto n : p.lengths)
    if (n == 0) throw Error("regroup: empty block");
  if (seq.is_finite() && !p.lengths.empty()) {
    const std::size_t used = std::accumulate(p.lengths.begin(), p.lengths.end(), std::size_t{0});
    if (used > *seq.length()) throw Error("regroup: blocks run past the " + std::to_string(*seq.length()) + " factors");
  }
  return {seq, p, regroup(seq, p)};
}

ProductAction regroup_action(const ProductAction& a, const Partition& p) {
  const Regrouping rg = make_regrouping(a.factors(), p);
  return ProductAction(a.group(), rg.result,
                       [a, p](std::size_t l) {
                         const auto [b, e] = p.block(l);
                         return block_factor(a, b, e);
                       },
                       "regroup(" + a.name() + ")");
}

// ---------------------------------------------------------------------------

Unitary bump_unitary(const Unitary& u, std::int64_t q, std::int64_t r) {
  if (q < 1 || r < 0) throw Error("bump_unitary: need q >= 1 and r >= 0");
  Unitary big = kron(u, Unitary::identity(static_cast<std::size_t>(q)));
  if (r == 0) return big;
  return direct_sum(big, Unitary::identity(static_cast<std::size_t>(r)));
}

RokhlinTower transport_tower(const RokhlinTower& t, std::int64_t q, std::int64_t r) {
  if (q < 1 || r < 0) throw Error("transport_tower: need q >= 1 and r >= 0");
  const auto n = static_cast<std::size_t>(static_cast<std::int64_t>(t.dim()) * q + r);
  if (t.is_diagonal()) {
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < t.length(); ++i) out.push_back(kron_ones(t.diagonal(i), q, r));
    return RokhlinTower::diagonal(std::move(out), t.cyclic());
  }
  if (n > kTowerDenseLimit) throw Error("transport_tower: dense tower of dimension " + std::to_string(n) + " is too large");
  std::vector<Projection> out;
  for (std::size_t i = 0; i < t.length(); ++i) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Matrix big = kron(t.projection(i), identity(static_cast<std::size_t>(q)));
    p.topLeftCorner(big.rows(), big.cols()) = big;
    out.emplace_back(std::move(p));
  }
  return RokhlinTower::dense(std::move(out), t.cyclic());
}

BumpUpPlan plan_bump(const std::vector<std::int64_t>& source_sizes, const FactorSequence& target, std::size_t block_cap) {
  BumpUpPlan plan{target, Partition{}, {}, true};
  std::size_t cursor = 0;
  for (std::size_t l = 1; l <= source_sizes.size(); ++l) {
    const std::int64_t s = source_sizes[l - 1];
    if (s < 1) throw Error("plan_bump: source sizes must be positive");
    BumpLevel lv;
    lv.level = l;
    lv.source_size = s;
    lv.target_begin = cursor;
    std::int64_t n = 1;
    std::size_t end = cursor;
    const double bound = geometric(l);
    while (!(static_cast<double>(s) / static_cast<double>(n) < bound)) {
      if (end - cursor >= block_cap || !target.has(end))
        throw Error("bump_up: target " + target.description() + " cannot reach S_" + std::to_string(l) + "/N_" +
                    std::to_string(l) + " < 2^-" + std::to_string(l) + " within " + std::to_string(block_cap) +
                    " factors");
      const std::int64_t f = target.at(end++);
      if (n > kLevelLimit / f)
        throw Error("bump_up: level " + std::to_string(l) + " needs a target block above " +
                    std::to_string(kLevelLimit) + " dimensions");
      n *= f;
    }
    lv.target_end = end;
    lv.target_size = n;
    lv.quotient = n / s;
    lv.remainder = n % s;
    lv.epsilon = geometric(l - 1);
    plan.partition.lengths.push_back(end - cursor);
    plan.levels.push_back(lv);
    cursor = end;
  }
  return plan;
}

BumpUpResult bump_up(const ProductAction& source, const Element& g, std::optional<std::int64_t> k,
                     const FactorSequence& target, std::size_t levels, bool require_certified) {
  if (levels == 0) throw Error("bump_up: need at least one level");
  TowerSchedule sched = certify_schedule(source, g, k, levels, ScheduleRule::geometric());
  if (require_certified && !sched.pass) throw Error("bump_up: source schedule is not certified: " + sched.diagnostics);

  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::vector<std::int64_t> sizes;
  std::size_t cursor = 0;
  for (std::size_t l = 1; l <= levels; ++l) {
    std::pair<std::size_t, std::size_t> b{cursor, cursor + 1};
    if (l <= sched.stages.size()) b = {sched.stages[l - 1].begin, sched.stages[l - 1].end};
    blocks.push_back(b);
    sizes.push_back(source.factors().product(b.first, b.second));
    cursor = b.second;
  }
  BumpUpPlan plan = plan_bump(sizes, target);
  for (std::size_t l = 1; l <= levels; ++l) {
    BumpLevel& lv = plan.levels[l - 1];
    lv.source_begin = blocks[l - 1].first;
    lv.source_end = blocks[l - 1].second;
    if (l > sched.stages.size()) {
      lv.pass = false;
      plan.pass = false;
      continue;
    }
    const TowerStage& st = sched.stages[l - 1];
    lv.certified = st.pass;
    lv.measured = true;
    lv.source_defects = st.defects;
    const double covered = st.tower ? st.tower->trace_covered() : 1.0 - st.defects.trace;
    const double scale = static_cast<double>(lv.quotient * lv.source_size) / static_cast<double>(lv.target_size);
    lv.transported.orthogonality = st.defects.orthogonality;
    lv.transported.shift = st.defects.shift;
    lv.transported.commutation = st.defects.commutation;
    lv.transported.trace = std::abs(1.0 - scale * covered);
    lv.pass = lv.certified && lv.transported.max() <= lv.epsilon;
    plan.pass = plan.pass && lv.pass;
  }

  const std::size_t count = image_count(source.group());
  const FactorSequence out_seq = regroup(target, plan.partition);
  auto levels_copy = plan.levels;
  ProductAction out(source.group(), out_seq,
                    [source, levels_copy, out_seq, count](std::size_t l) {
                      const auto n = out_seq.at(l);
                      if (l >= levels_copy.size())
                        return Factor{n, std::vector<Unitary>(count, Unitary::identity(static_cast<std::size_t>(n)))};
                      const BumpLevel& lv = levels_copy[l];
                      const Factor f = block_factor(source, lv.source_begin, lv.source_end);
                      Factor res{n, {}};
                      for (const auto& u : f.images) res.images.push_back(bump_unitary(u, lv.quotient, lv.remainder));
                      return res;
                    },
                    "bump(" + source.name() + ")");
  return {std::move(out), std::move(plan), std::move(sched)};
}

// ---------------------------------------------------------------------------

std::optional<std::vector<std::size_t>> select_class_entries(const ProductAction& a, const Element& g, std::int64_t k,
                                                             std::size_t begin, std::size_t end) {
  if (k < 1) throw Error("cut_down: k must be positive");
  if (a.factors().product(begin, end) > kLevelLimit)
    throw Error("cut_down: block [" + std::to_string(begin) + ", " + std::to_string(end) + ") is too large");
  const Unitary u = a.block_image(g, begin, end);
  if (!u.is_exact() || !u.is_diagonal()) throw Error("cut_down: block image is not an exact diagonal unitary");
  const auto ph = u.diagonal_phases_exact();
  std::vector<std::optional<std::size_t>> first(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ph.size(); ++i) {
    const Rational c = ph[i] * k;
    if (c.denominator() != 1) throw Error("cut_down: eigenvalue is not a k-th root of unity");
    const auto j = static_cast<std::size_t>(((c.numerator() % k) + k) % k);
    if (!first[j]) first[j] = i;
  }
  std::vector<std::size_t> out;
  for (const auto& f : first) {
    if (!f) return std::nullopt;
    out.push_back(*f);
  }
  return out;
}

CutDownResult cut_down(const ProductAction& a, const Element& g, const TowerSchedule& schedule) {
  if (!schedule.k) throw Error("cut_down: needs a finite-order schedule");
  const std::int64_t k = *schedule.k;
  if (!a.group().is_abelian()) throw Error("cut_down: the group must be abelian");
  CutDownResult res{a, k, 0, {}};
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (const auto& st : schedule.stages)
    if (st.pass) blocks.emplace_back(st.begin, st.end);
  if (blocks.empty()) throw Error("cut_down: the schedule has no certified stage");
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    auto sel = select_class_entries(a, g, k, blocks[l].first, blocks[l].second);
    if (res.first_stage == 0) {
      if (!sel) continue;
      res.first_stage = l + 1;
      const std::size_t b = 0, e = blocks[l].second;
      sel = select_class_entries(a, g, k, b, e);
      if (!sel) throw Error("cut_down: merged first block lost an eigenvalue class");
      res.blocks.push_back({b, e, *sel});
      continue;
    }
    if (!sel)
      throw Error("cut_down: block of stage " + std::to_string(l + 1) + " misses an eigenvalue class after l_0 = " +
                  std::to_string(res.first_stage));
    res.blocks.push_back({blocks[l].first, blocks[l].second, *sel});
  }
  if (res.first_stage == 0) throw Error("cut_down: no certified block contains every eigenvalue class");

  const auto listed = res.blocks;
  const std::size_t tail = listed.back().end - listed.back().begin;
  const Element h = g;
  res.action = ProductAction(
      a.group(), FactorSequence::constant(k),
      [a, h, k, listed, tail](std::size_t l) {
        CutDownBlock b;
        if (l < listed.size()) {
          b = listed[l];
        } else {
          b.begin = listed.back().end + (l - listed.size()) * tail;
          b.end = b.begin + tail;
          auto sel = select_class_entries(a, h, k, b.begin, b.end);
          if (!sel)
            throw Error("cut_down: repeated block [" + std::to_string(b.begin) + ", " + std::to_string(b.end) +
                        ") misses an eigenvalue class");
          b.selected = *sel;
        }
        return restrict_factor(block_factor(a, b.begin, b.end), b.selected);
      },
      "cut(" + a.name() + ")");
  return res;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t unitary_order(const Unitary& u, std::int64_t bound) {
  for (std::int64_t d = 1; d <= bound; ++d)
    if (bound % d == 0 && u.pow(d).is_identity()) return d;
  throw Error("folded_tower: image order does not divide the element order " + std::to_string(bound));
}

RokhlinTower part_tower(const Unitary& u, std::int64_t k) {
  if (k == 1) return RokhlinTower::diagonal({Eigen::VectorXd::Ones(static_cast<Eigen::Index>(u.dim()))}, true);
  if (u.is_exact() && !u.is_diagonal()) return orbit_tower(u, k);
  return best_cyclic_tower(u, k);
}

std::string fold_route(const std::vector<Unitary>& parts, std::int64_t order) {
  std::size_t active = 0;
  for (const auto& u : parts) active += u.is_identity() ? 0 : 1;
  if (active == 0) return "trivial";
  if (parts.size() != 2) return active == 1 ? "single-part" : "compose-k";
  const std::int64_t kb = unitary_order(parts[1], order);
  if (kb == 1) return "extend-left";
  if (parts[0].pow(kb).is_identity()) return "extend-right";
  return "compose-k";
}

FactorSequence scaled_sequence(const FactorSequence& seq, std::int64_t j) {
  if (j == 1) return seq;
  if (seq.pattern()) {
    auto [h, p] = *seq.pattern();
    for (auto& x : h) x *= j;
    for (auto& x : p) x *= j;
    return FactorSequence::periodic(std::move(h), std::move(p));
  }
  SupernaturalNumber t = seq.type();
  if (seq.is_finite())
    for (std::size_t l = 0; l < *seq.length(); ++l) t = t * SupernaturalNumber::of_integer(j);
  else
    t = t * SupernaturalNumber::infinite_part(j);
  return FactorSequence::custom([seq, j](std::size_t l) { return seq.at(l) * j; }, seq.length(), t,
                                seq.description() + "*" + std::to_string(j));
}

std::size_t index_in(const ElementSet& sorted, std::size_t x) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) throw Error("element is not in the subgroup");
  return static_cast<std::size_t>(it - sorted.begin());
}

Complex trace_of(const Unitary& u) { return u.normalized_trace() * static_cast<double>(u.dim()); }

std::vector<Element> nonidentity(const GroupSpec& g, std::vector<Element> tracked) {
  if (tracked.empty()) tracked = g.tracked();
  std::vector<Element> out;
  for (const auto& t : tracked) {
    const Element n = g.normalize(t);
    if (!g.is_identity(n) && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

}  // namespace

RokhlinTower folded_tower(const std::vector<Unitary>& parts, std::int64_t order, std::int64_t p) {
  if (parts.empty()) throw Error("folded_tower: no parts");
  if (order < 1 || p < 1) throw Error("folded_tower: order and power must be positive");
  const std::int64_t bound = order / std::gcd(order, p);
  if (parts.size() == 1) {
    const Unitary u = parts[0].pow(p);
    return part_tower(u, unitary_order(u, bound));
  }
  const std::vector<Unitary> head(parts.begin(), parts.end() - 1);
  const Unitary ub = parts.back().pow(p);
  const std::int64_t kb = unitary_order(ub, bound);
  const RokhlinTower ta = folded_tower(head, order, p * kb);
  const RokhlinTower tb = part_tower(ub, kb);
  const Unitary ua = kron_all(head).pow(p);
  return tensor_tower(ta, tb, TensorMode::ComposeK, &ua);
}

ElementTower round_towers(const std::vector<ProductAction>& parts, const Element& g, std::size_t l_max) {
  if (parts.empty()) throw Error("round_towers: no parts");
  const GroupSpec& group = parts.front().group();
  ElementTower et;
  et.element = group.normalize(g);
  et.label = group.describe(et.element);
  et.order = group.order_of(et.element);
  et.pass = true;
  const std::size_t m = parts.size();
  for (std::size_t l = 1; l <= l_max; ++l) {
    std::vector<Unitary> us;
    TowerStage st;
    st.stage = l;
    st.begin = (l - 1) * m;
    st.end = l * m;
    st.block_size = 1;
    for (const auto& part : parts) {
      us.push_back(part.factor_image(et.element, l - 1));
      st.block_size *= static_cast<std::int64_t>(us.back().dim());
    }
    const Unitary u = kron_all(us);
    try {
      if (et.order) {
        st.epsilon = kExactTowerTol;
        st.route = fold_route(us, *et.order);
        st.tower = folded_tower(us, *et.order);
      } else {
        st.epsilon = geometric(l);
        st.route = "arc";
        if (u.dim() > kTowerDenseLimit) throw Error("arc tower above the dense limit");
        st.tower = arc_tower(u, l);
      }
      st.tower_length = st.tower->length();
      if (et.order && st.route != "compose-k" && u.is_exact() && u.is_diagonal()) {
        // eigen-tuple tower of an exact diagonal: defects from the census
        const auto census = diagonal_census(us, *et.order);
        st.defects = TowerDefects{0.0, 0.0, census.trace_defect(), 0.0};
      } else {
        st.defects = tower_defects(*st.tower, u);
      }
      st.pass = st.defects.max() <= st.epsilon;
    } catch (const Error&) {
      st.defects = {1.0, 1.0, 1.0, 0.0};
      st.pass = false;
    }
    if (et.route.empty() || et.route == "trivial") et.route = st.route;
    et.pass = et.pass && st.pass;
    et.stages.push_back(std::move(st));
  }
  return et;
}

// ---------------------------------------------------------------------------

ExtensionResult extend_finite_index(const ProductAction& aH, const GroupSpec& G, const ElementSet& h, std::size_t l_max,
                                    std::vector<Element> tracked) {
  if (!G.is_table()) throw Error("extend_finite_index: G must be a finite table group");
  const FiniteGroup& fg = G.table();
  ElementSet hs = h;
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  if (!fg.is_subgroup(hs)) throw Error("extend_finite_index: H is not a subgroup of G");
  const Subgroup sub = subgroup(fg, hs);
  if (!aH.group().is_table() || aH.group().table().table() != sub.group.table())
    throw Error("extend_finite_index: aH is not an action of H");

  const ElementSet core = normal_core(fg, hs);
  const Quotient q = quotient(fg, core);
  const std::size_t j = fg.order() / hs.size();
  const std::size_t kq = q.group.order();

  ProductAction induced(G, scaled_sequence(aH.factors(), static_cast<std::int64_t>(j)),
                        [aH, fg, hs](std::size_t l) {
                          const Factor f = aH.factor(l);
                          const Representation ind =
                              induce(Representation{static_cast<std::size_t>(f.dim), f.images}, fg, hs);
                          return Factor{static_cast<std::int64_t>(ind.dim), ind.images};
                        },
                        "induced(" + aH.name() + ")");
  std::optional<ProductAction> quot;
  if (kq > 1) quot = constant_action(G, compose(regular_representation(q.group), q.projection), "quotient-regular");
  ProductAction gamma = quot ? tensor_actions(std::vector<ProductAction>{induced, *quot}, "extension(" + aH.name() + ")")
                             : induced;

  ExtensionResult r{gamma, induced, quot, hs, core, j, kq, coset_representatives(fg, hs), q, 0.0, true, {}};
  for (std::size_t l = 0; l < l_max && aH.factors().has(l); ++l) {
    const Factor f = aH.factor(l);
    const Factor fi = induced.factor(l);
    for (auto n : core) {
      const Complex chi = trace_of(f.images[index_in(hs, n)]);
      r.character_defect =
          std::max(r.character_defect, std::abs(trace_of(fi.images[n]) - static_cast<double>(j) * chi));
      for (std::size_t x = 0; x < fg.order(); ++x) {
        const std::size_t c = fg.mul(fg.mul(x, n), fg.inv(x));
        if (std::abs(trace_of(f.images[index_in(hs, c)]) - chi) > 1e-9) r.characters_invariant = false;
      }
    }
  }
  std::vector<ProductAction> parts{induced};
  if (quot) parts.push_back(*quot);
  for (const auto& t : nonidentity(G, std::move(tracked))) r.towers.push_back(round_towers(parts, t, l_max));
  return r;
}

// ---------------------------------------------------------------------------

StronglyOuterResult construct_strongly_outer(const GroupSpec& g, const FactorSequence& target,
                                             const StronglyOuterOptions& options) {
  if (options.copies == 0) throw Error("construct_strongly_outer: copies must be at least 1");
  if (options.l_max == 0) throw Error("construct_strongly_outer: l_max must be positive");
  const auto tracked = nonidentity(g, options.tracked);
  if (tracked.empty()) {
    ProductAction id = trivial_action(g, target);
    ProductAction uni = trivial_action(g, FactorSequence::universal());
    StronglyOuterResult r{id, id, uni, {}, {}, {}, {}, {}, true, true};
    return r;
  }
  ProductAction base = g.is_table() ? map_embed_action(g) : abelian_action(g, options.theta);
  ProductAction separating = tensor_power(base, options.copies);
  ProductAction universal = interleave_identity(separating);

  const std::size_t m = tracked.size();
  const std::size_t levels = options.l_max + options.extra_levels;
  std::vector<FactorSequence> slices;
  std::vector<BumpUpResult> bumps;
  std::vector<ProductAction> pieces;
  for (std::size_t i = 0; i < m; ++i) {
    slices.push_back(slice(target, m, i));
    const auto order = g.order_of(tracked[i]);
    bumps.push_back(bump_up(separating, tracked[i], order, slices.back(), levels, order.has_value()));
    pieces.push_back(bumps.back().action);
  }
  ProductAction action = m == 1 ? pieces.front() : tensor_actions(pieces, "strongly-outer");

  StronglyOuterResult r{action, separating, universal, tracked, slices, bumps, {}, {}, false, true};
  r.same_type = same_type(supernatural_of(action.factors()), supernatural_of(target));
  for (const auto& t : tracked) {
    const auto order = g.order_of(t);
    r.schedules.push_back(certify_schedule(action, t, order, options.l_max, ScheduleRule::geometric()));
    r.witnesses.push_back(action_witness(action, t, m * levels, order ? 1 : 2));
    r.pass = r.pass && r.schedules.back().pass && r.witnesses.back().witness();
  }
  r.pass = r.pass && r.same_type;
  return r;
}

UniversalRokhlinResult rokhlin_action_universal(const GroupSpec& g, std::size_t l_max, const Theta& theta,
                                                std::vector<Element> tracked) {
  if (l_max == 0) throw Error("rokhlin_action_universal: l_max must be positive");
  const auto elems = nonidentity(g, std::move(tracked));
  std::vector<ProductAction> parts;
  std::vector<std::string> names;
  std::vector<CutDownResult> cuts;
  std::optional<ExtensionResult> ext;
  if (g.is_table()) {
    const FiniteGroup& fg = g.table();
    if (fg.order() < 2) {
      ProductAction id = trivial_action(g, FactorSequence::universal());
      return {id, id, {id}, {"trivial"}, {}, std::nullopt, {}, true};
    }
    if (fg.is_abelian()) {
      parts.push_back(regular_action(g));
      names.push_back("regular");
    } else {
      ElementSet best;
      for (std::size_t x = 0; x < fg.order(); ++x) {
        const std::size_t gen[] = {x};
        ElementSet c = fg.generated_by(gen);
        if (c.size() > best.size()) best = std::move(c);
      }
      const GroupSpec hspec(subgroup(fg, best).group);
      ext = extend_finite_index(regular_action(hspec), g, best, l_max, elems);
      parts.push_back(ext->induced);
      names.push_back("induced-regular");
      if (ext->quotient_part) {
        parts.push_back(*ext->quotient_part);
        names.push_back("quotient-regular");
      }
    }
  } else {
    const auto& pres = g.presented();
    const auto summands = abelian_summands(pres, theta);
    const auto actions = abelian_summand_actions(g, theta);
    std::vector<Element> candidates;
    for (std::size_t i = 0; i < pres.rank(); ++i) candidates.push_back(g.generator(i));
    for (const auto& t : g.tracked()) candidates.push_back(t);
    for (std::size_t s = 0; s < summands.size(); ++s) {
      const std::size_t c = summands[s].coordinate;
      if (summands[s].rational_part) {
        parts.push_back(actions[s]);
        names.push_back("flow-Q[" + std::to_string(c) + "]");
        continue;
      }
      std::int64_t big_k = 1;
      for (const auto& gen : pres.generators()) big_k = std::lcm(big_k, gen.coordinate.at(c).r.denominator());
      std::optional<Element> pick;
      for (const auto& h : candidates) {
        Rational v(0);
        for (std::size_t i = 0; i < pres.rank(); ++i) v += pres.generators()[i].coordinate.at(c).r * h.v[i];
        if (reduce_phase(v).denominator() == big_k && g.order_of(h) == big_k) {
          pick = h;
          break;
        }
      }
      if (!pick)
        throw Error("rokhlin_action_universal: no tracked element generates coordinate " + std::to_string(c) +
                    " with matching order");
      const TowerSchedule sched = certify_schedule(actions[s], *pick, big_k, l_max, ScheduleRule::geometric());
      cuts.push_back(cut_down(actions[s], *pick, sched));
      parts.push_back(cuts.back().action);
      names.push_back("cut-Q/Z[" + std::to_string(c) + "]");
    }
    if (parts.empty()) {
      ProductAction id = trivial_action(g, FactorSequence::universal());
      return {id, id, {id}, {"trivial"}, {}, std::nullopt, {}, true};
    }
  }
  ProductAction rounds = parts.size() == 1 ? parts.front() : tensor_actions(parts, "rokhlin-rounds");
  UniversalRokhlinResult r{interleave_identity(rounds), rounds, parts, names, cuts, ext, {}, true};
  for (const auto& t : elems) {
    r.towers.push_back(round_towers(parts, t, l_max));
    if (r.towers.back().order) r.pass = r.pass && r.towers.back().pass;
  }
  return r;
}

}  // namespace uhf
