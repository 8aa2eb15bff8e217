#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uhf/cli.hpp"
#include "uhf/crossed.hpp"
#include "uhf/rokhlin.hpp"
#include "uhf/transforms.hpp"
#include "uhf/witness.hpp"

namespace uhf {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void param_fail(const DocumentEntry& e, const std::string& msg) {
  if (e.line == 0) throw Error("parameter '" + e.key + "': " + msg);
  throw DocumentError(e.line, e.column, e.key + ": " + msg);
}

class Params {
 public:
  Params(const ActionSpecDocument& doc, const RunOptions& o) {
    for (const auto& t : doc.tasks) {
      if (t.get("kind", "") != o.command) continue;
      for (const auto& e : t.entries)
        if (e.key != "kind") values_[e.key] = e;
      break;
    }
    for (const auto& [k, v] : o.overrides) values_[k] = DocumentEntry{k, v, 0, 0};
    used_ = {"output", "plan"};
  }

  const DocumentEntry* find(const std::string& key) {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  std::string str(const std::string& key, const std::string& fallback) {
    const auto* e = find(key);
    return record(key, e ? e->value : fallback);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min) {
    const auto* e = find(key);
    if (!e) return std::stoll(record(key, std::to_string(fallback)));
    std::int64_t v = 0;
    try {
      std::size_t pos = 0;
      v = std::stoll(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      param_fail(*e, "expected an integer");
    }
    if (v < min) param_fail(*e, "must be at least " + std::to_string(min));
    record(key, e->value);
    return v;
  }

  std::size_t size(const std::string& key, std::size_t fallback, std::size_t min = 0) {
    return static_cast<std::size_t>(integer(key, static_cast<std::int64_t>(fallback), static_cast<std::int64_t>(min)));
  }

  double real(const std::string& key, double fallback) {
    const auto* e = find(key);
    if (!e) {
      record(key, fmt(fallback));
      return fallback;
    }
    try {
      record(key, e->value);
      return Theta::parse(e->value).value;
    } catch (const Error&) {
      param_fail(*e, "expected a number");
    }
  }

  Theta theta(const std::string& key, const std::string& fallback) {
    const auto* e = find(key);
    const std::string text = record(key, e ? e->value : fallback);
    try {
      return Theta::parse(text);
    } catch (const Error&) {
      param_fail(e ? *e : DocumentEntry{key, text, 0, 0}, "expected a rational or sqrtN");
    }
  }

  Element element(const GroupSpec& g, const std::string& key = "element") {
    const auto* e = find(key);
    if (!e) {
      const auto t = g.tracked(1);
      if (t.empty()) throw Error("the group has no non-identity element");
      record(key, g.describe(t.front()));
      return t.front();
    }
    try {
      const Element el = parse_element(g, e->value);
      record(key, e->value);
      return el;
    } catch (const DocumentError&) {
      throw;
    } catch (const Error& err) {
      param_fail(*e, err.what());
    }
  }

  std::vector<Element> elements(const GroupSpec& g, const std::string& key) {
    std::vector<Element> out;
    const auto* e = find(key);
    if (!e) return out;
    record(key, e->value);
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ';')) {
      try {
        out.push_back(parse_element(g, item));
      } catch (const Error& err) {
        param_fail(*e, err.what());
      }
    }
    return out;
  }

  /// "auto" uses the order of g, "inf" infinite order.
  std::optional<std::int64_t> order(const GroupSpec& g, const Element& el) {
    const auto* e = find("k");
    const std::string v = e ? e->value : "auto";
    record("k", v);
    if (v == "auto") return g.order_of(el);
    if (v == "inf") return std::nullopt;
    const auto k = integer("k", 0, 1);
    return k;
  }

  ScheduleRule rule(std::size_t l_max) {
    const auto* e = find("rule");
    const std::string v = record("rule", e ? e->value : "geometric");
    if (v == "geometric") return ScheduleRule::geometric();
    std::vector<double> eps;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        eps.push_back(Theta::parse(item).value);
      } catch (const Error&) {
        param_fail(*e, "expected 'geometric' or a comma list of epsilons");
      }
    }
    auto r = ScheduleRule::listed(eps);
    try {
      r.validate(l_max);
    } catch (const Error& err) {
      param_fail(*e, err.what());
    }
    return r;
  }

  void check_unused() const {
    for (const auto& [k, e] : values_)
      if (!used_.count(k)) param_fail(e, "unknown parameter for this command");
  }

  json resolved() const {
    json j = json::object();
    for (const auto& [k, v] : resolved_) j[k] = v;
    return j;
  }

 private:
  std::string record(const std::string& key, const std::string& value) {
    resolved_[key] = value;
    return value;
  }

  std::map<std::string, DocumentEntry> values_;
  std::set<std::string> used_;
  std::map<std::string, std::string> resolved_;
};

struct Context {
  const ActionSpecDocument& doc;
  const GroupSpec& g;
  const ProductAction& a;
  Params& p;
  json plan;
};

std::string order_text(const std::optional<std::int64_t>& k) { return k ? std::to_string(*k) : "inf"; }

std::string defects_csv(const TowerDefects& d) {
  return fmt(d.orthogonality) + "," + fmt(d.shift) + "," + fmt(d.trace);
}

json sequence_json(const FactorSequence& s) {
  json j;
  j["description"] = s.description();
  j["type"] = s.type().to_string();
  if (s.pattern()) {
    j["head"] = s.pattern()->first;
    j["period"] = s.pattern()->second;
  }
  return j;
}

json partition_json(const Partition& p) {
  json j;
  j["lengths"] = p.lengths;
  j["cyclic"] = p.cyclic;
  return j;
}

json element_json(const GroupSpec& g, const Element& e) {
  json j;
  j["label"] = g.describe(e);
  j["exponents"] = e.v;
  return j;
}

std::string stage_rows(const std::string& prefix, const std::vector<TowerStage>& stages) {
  std::string out;
  for (const auto& s : stages)
    out += prefix + std::to_string(s.stage) + "," + std::to_string(s.begin) + "," + std::to_string(s.end) + "," +
           std::to_string(s.block_size) + "," + std::to_string(s.tower_length) + "," + defects_csv(s.defects) + "," +
           fmt(s.epsilon) + "," + (s.pass ? "PASS" : "FAIL") + "," + s.route + "\n";
  return out;
}

const char* kStageHeader = "stage,begin,end,block_size,tower_length,ortho_defect,shift_defect,trace_defect,epsilon,pass,route";

RunResult finish(Context& c, bool pass, std::string csv, std::string report) {
  RunResult r;
  r.exit_code = pass ? kExitPass : kExitFail;
  r.csv = std::move(csv);
  r.report = std::move(report) + "verdict: " + (pass ? "PASS" : "FAIL") + "\n";
  c.plan["verdict"] = pass ? "PASS" : "FAIL";
  r.plan = c.plan.dump(2) + "\n";
  return r;
}

RunResult run_info(Context& c) {
  const std::size_t count = c.p.size("count", 4, 1);
  std::ostringstream csv, rep;
  csv << "factor,dim,homomorphism_defect\n";
  bool pass = true;
  for (std::size_t l = 0; l < count && c.a.factors().has(l); ++l) {
    const double d = c.a.factor_defect(l);
    pass = pass && d <= kStructuralTol;
    csv << l << ',' << c.a.factors().at(l) << ',' << fmt(d) << '\n';
  }
  rep << "group: " << (c.g.is_table() ? "table of order " + std::to_string(c.g.table().order())
                                      : "presented abelian of rank " + std::to_string(c.g.presented().rank()))
      << "\n";
  rep << "action: " << c.a.name() << "\n";
  rep << "factors: " << c.a.factors().description() << " (type " << c.a.factors().type().to_string() << ")\n";
  return finish(c, pass, csv.str(), rep.str());
}

RunResult run_evaluate(Context& c) {
  const Element g = c.p.element(c.g);
  const std::size_t stage = c.p.size("stage", 1, 1);
  if (!c.a.factors().has(stage - 1)) throw Error("stage " + std::to_string(stage) + " is past the factor sequence");
  const Unitary u = c.a.evaluate(g, stage);
  std::ostringstream csv;
  csv << "row,col,re,im\n";
  if (u.is_exact()) {
    const auto& m = u.monomial();
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t j = 0; j < m.perm.size(); ++j) cells.emplace_back(m.perm[j], j);
    std::sort(cells.begin(), cells.end());
    for (const auto& [i, j] : cells) {
      const Complex z = phase_value(m.phase[j]);
      csv << i << ',' << j << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
    }
  } else {
    if (u.dim() > kTowerDenseLimit) throw Error("stage unitary is too large to print");
    const Matrix d = u.dense();
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = 0; j < d.cols(); ++j)
        if (d(i, j) != Complex(0.0))
          csv << i << ',' << j << ',' << fmt(d(i, j).real()) << ',' << fmt(d(i, j).imag()) << '\n';
  }
  const Complex tr = u.normalized_trace();
  std::ostringstream rep;
  rep << "element: " << c.g.describe(g) << "\nstage: " << stage << "\ndim: " << u.dim() << "\nnormalized trace: "
      << fmt(tr.real()) << (tr.imag() < 0 ? " - " : " + ") << fmt(std::abs(tr.imag())) << "i\n";
  return finish(c, true, csv.str(), rep.str());
}

RunResult run_tower(Context& c) {
  const Element g = c.p.element(c.g);
  const auto k = c.p.order(c.g, g);
  const std::size_t begin = c.p.size("begin", 0);
  const std::size_t end = c.p.size("end", begin + 1, begin + 1);
  if (!c.a.factors().has(end - 1)) throw Error("block is past the factor sequence");
  const Unitary u = c.a.block_image(g, begin, end);
  RokhlinTower t = RokhlinTower::empty(u.dim(), true);
  std::string route;
  double eps = 0.0;
  if (k) {
    eps = c.p.real("epsilon", kExactTowerTol);
    if (u.is_exact() && !u.is_diagonal()) {
      t = orbit_tower(u, *k);
      route = "orbit";
    } else {
      if (u.dim() > kTowerDenseLimit) throw Error("block is too large for a dense tower");
      t = best_cyclic_tower(u, *k);
      route = "dense";
    }
  } else {
    const std::size_t length = c.p.size("length", 2, 1);
    eps = c.p.real("epsilon", std::ldexp(1.0, -static_cast<int>(end)));
    if (u.dim() > kTowerDenseLimit) throw Error("block is too large for a dense tower");
    t = arc_tower(u, length);
    route = "arc";
  }
  const TowerDefects d = tower_defects(t, u);
  const bool pass = d.orthogonality <= eps && d.shift <= eps && d.trace <= eps;
  std::ostringstream csv;
  csv << "begin,end,block_size,tower_length,ortho_defect,shift_defect,trace_defect,epsilon,pass,route\n"
      << begin << ',' << end << ',' << u.dim() << ',' << t.length() << ',' << defects_csv(d) << ',' << fmt(eps) << ','
      << (pass ? "PASS" : "FAIL") << ',' << route << '\n';
  c.plan["tower"] = {{"element", element_json(c.g, g)}, {"k", order_text(k)}, {"route", route}};
  return finish(c, pass, csv.str(), "element: " + c.g.describe(g) + "\n");
}

RunResult run_certify(Context& c) {
  const Element g = c.p.element(c.g);
  const auto k = c.p.order(c.g, g);
  const std::size_t l_max = c.p.size("l_max", 4, 1);
  CertifyOptions opt;
  opt.block_cap = c.p.size("block_cap", opt.block_cap, 1);
  const ScheduleRule rule = c.p.rule(l_max);
  const TowerSchedule s = certify_schedule(c.a, g, k, l_max, rule, opt);
  json blocks = json::array();
  for (const auto& st : s.stages) blocks.push_back({st.begin, st.end});
  c.plan["schedule"] = {{"element", element_json(c.g, g)}, {"k", order_text(k)}, {"rule", s.rule}, {"blocks", blocks}};
  return finish(c, s.pass, schedule_csv(s), s.diagnostics.empty() ? "" : s.diagnostics + "\n");
}

RunResult run_witness(Context& c) {
  const std::string mode = c.p.str("mode", "action");
  const std::size_t window = c.p.size("window", 8, 1);
  const double threshold = c.p.real("threshold", 1e-3);
  if (mode == "flow") {
    const Theta theta = c.p.theta("theta", "sqrt2");
    const Theta r = c.p.theta("r", "1/2");
    const std::size_t n_max = c.p.size("n_max", 64, 1);
    const std::string formula = c.p.str("formula", "corrected");
    if (formula != "corrected" && formula != "displayed") throw Error("formula: expected 'corrected' or 'displayed'");
    const double tol = c.p.real("tolerance", 1e-12);
    std::vector<Unitary> us, vs;
    std::vector<std::int64_t> idx;
    for (std::size_t n = 1; n <= n_max; ++n) {
      const auto nn = static_cast<std::int64_t>(n);
      us.push_back(cycle_unitary(nn));
      vs.push_back(r.exact ? diagonal_flow(nn, theta, *r.exact) : diagonal_flow(nn, theta, r.value));
      idx.push_back(nn);
    }
    auto s = commutator_trace_sequence(us, vs, idx, window, threshold);
    s.classes = 2;
    std::ostringstream csv;
    csv << "n,re_tau,im_tau,abs_one_minus_tau,re_formula,im_formula,formula_error\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const auto n = s.index[i];
      const Complex f = formula == "corrected" ? flow_trace(n, theta.value, r.value) : closed_form_flow_trace(n, theta.value, r.value);
      const double err = std::abs(f - s.values[i]);
      worst = std::max(worst, err);
      csv << n << ',' << fmt(s.values[i].real()) << ',' << fmt(s.values[i].imag()) << ',' << fmt(std::abs(1.0 - s.values[i]))
          << ',' << fmt(f.real()) << ',' << fmt(f.imag()) << ',' << fmt(err) << '\n';
    }
    const bool agree = worst <= tol;
    csv << "# verdict=" << (s.witness() ? "WITNESS" : "NO_WITNESS") << ",gap=" << fmt(s.gap()) << ",formula=" << formula
        << ",max_formula_error=" << fmt(worst) << ",tolerance=" << fmt(tol) << '\n';
    c.plan["flow"] = {{"theta", theta.label}, {"r", r.label}, {"n_max", n_max}, {"formula", formula}};
    return finish(c, agree && s.witness(), csv.str(),
                  "formula " + formula + (agree ? " agrees" : " disagrees") + " with the brute-force traces (max error " +
                      fmt(worst) + ")\n");
  }
  if (mode != "action") throw Error("mode: expected 'action' or 'flow'");
  const Element g = c.p.element(c.g);
  const std::size_t count = c.p.size("count", 8, 1);
  const std::size_t classes = c.p.size("classes", c.g.order_of(g) ? 1 : 2, 1);
  const auto s = action_witness(c.a, g, count, classes, window, threshold);
  c.plan["witness"] = {{"element", element_json(c.g, g)}, {"count", count}, {"classes", classes}};
  return finish(c, s.witness(), witness_csv(s), "");
}

std::string bump_rows(const BumpUpPlan& plan, const std::string& prefix) {
  std::string out;
  for (const auto& l : plan.levels)
    out += prefix + std::to_string(l.level) + "," + std::to_string(l.source_begin) + "," + std::to_string(l.source_end) +
           "," + std::to_string(l.target_begin) + "," + std::to_string(l.target_end) + "," +
           std::to_string(l.source_size) + "," + std::to_string(l.target_size) + "," + std::to_string(l.quotient) + "," +
           std::to_string(l.remainder) + "," + defects_csv(l.transported) + "," + fmt(l.epsilon) + "," +
           (l.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

const char* kBumpHeader =
    "level,source_begin,source_end,target_begin,target_end,source_size,target_size,quotient,remainder,"
    "ortho_defect,shift_defect,trace_defect,epsilon,pass";

json bump_json(const BumpUpResult& b) {
  json levels = json::array();
  for (const auto& l : b.plan.levels)
    levels.push_back({{"level", l.level},
                      {"source", {l.source_begin, l.source_end}},
                      {"target", {l.target_begin, l.target_end}},
                      {"S", l.source_size},
                      {"N", l.target_size},
                      {"Q", l.quotient},
                      {"r", l.remainder}});
  return {{"target", sequence_json(b.plan.target)}, {"partition", partition_json(b.plan.partition)}, {"levels", levels}};
}

std::optional<FactorSequence> target_factors(const Context& c) { return build_factors(c.doc.factors); }

RunResult run_bump_up(Context& c) {
  const Element g = c.p.element(c.g);
  const auto k = c.p.order(c.g, g);
  const std::size_t levels = c.p.size("levels", 4, 1);
  const auto target = target_factors(c);
  if (!target) throw Error("bump-up needs a [factors] section for the target");
  const auto b = bump_up(c.a, g, k, *target, levels, k.has_value());
  c.plan["bump_up"] = bump_json(b);
  c.plan["bump_up"]["element"] = element_json(c.g, g);
  return finish(c, b.plan.pass, std::string(kBumpHeader) + "\n" + bump_rows(b.plan, ""), "");
}

json cut_json(const CutDownResult& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks) blocks.push_back({{"begin", b.begin}, {"end", b.end}, {"selected", b.selected}});
  return {{"k", r.k}, {"first_stage", r.first_stage}, {"blocks", blocks}};
}

RunResult run_cut_down(Context& c) {
  const Element g = c.p.element(c.g);
  const auto k = c.p.order(c.g, g);
  if (!k) throw Error("cut-down needs an element of finite order");
  const std::size_t l_max = c.p.size("l_max", 4, 1);
  const auto schedule = certify_schedule(c.a, g, k, l_max, ScheduleRule::geometric());
  const auto r = cut_down(c.a, g, schedule);
  const auto check = certify_schedule(r.action, g, k, l_max, ScheduleRule::geometric());
  std::ostringstream csv;
  csv << "block,begin,end,selected\n";
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    csv << i << ',' << r.blocks[i].begin << ',' << r.blocks[i].end << ',';
    for (std::size_t j = 0; j < r.blocks[i].selected.size(); ++j) csv << (j ? " " : "") << r.blocks[i].selected[j];
    csv << '\n';
  }
  csv << "# " << kStageHeader << '\n';
  for (const auto& s : check.stages) csv << "# " << stage_rows("", {s});
  c.plan["cut_down"] = cut_json(r);
  c.plan["cut_down"]["element"] = element_json(c.g, g);
  return finish(c, check.pass, csv.str(), "cut-down onto " + std::to_string(r.k) + "^infinity, first stage " +
                                              std::to_string(r.first_stage) + "\n");
}

ElementSet subgroup_param(Context& c) {
  if (!c.g.is_table()) throw Error("induce and extend need a table group");
  std::vector<std::size_t> gens;
  for (const auto& e : c.p.elements(c.g, "subgroup")) gens.push_back(static_cast<std::size_t>(e.v[0]));
  return c.g.table().generated_by(gens);
}

ProductAction subgroup_action(Context& c, const FiniteGroup& h) {
  const std::string base = c.p.str("base", "regular");
  const GroupSpec hs(h);
  if (base == "regular") return regular_action(hs);
  if (base == "map-embed") return map_embed_action(hs);
  throw Error("base: expected 'regular' or 'map-embed'");
}

json extension_json(const ExtensionResult& x) {
  return {{"subgroup", x.subgroup},
          {"core", x.core},
          {"index", x.index},
          {"core_index", x.core_index},
          {"coset_representatives", x.coset_representatives},
          {"quotient_representatives", x.quotient.representatives}};
}

std::string tower_rows(const GroupSpec& g, const std::vector<ElementTower>& towers) {
  std::string out;
  for (const auto& t : towers)
    out += stage_rows(g.describe(t.element) + "," + order_text(t.order) + "," + t.route + ",", t.stages);
  return out;
}

const char* kElementHeader = "element,order,element_route,";

RunResult run_induce(Context& c) {
  const ElementSet h = subgroup_param(c);
  const Subgroup sub = subgroup(c.g.table(), h);
  const ProductAction aH = subgroup_action(c, sub.group);
  const std::size_t count = c.p.size("count", 3, 1);
  const auto x = extend_finite_index(aH, c.g, h, 0);
  std::ostringstream csv;
  csv << "factor,dim,homomorphism_defect\n";
  bool pass = true;
  for (std::size_t l = 0; l < count && x.induced.factors().has(l); ++l) {
    const double d = x.induced.factor_defect(l);
    pass = pass && d <= kStructuralTol;
    csv << l << ',' << x.induced.factors().at(l) << ',' << fmt(d) << '\n';
  }
  if (x.characters_invariant) pass = pass && x.character_defect <= kStructuralTol;
  csv << "# index=" << x.index << ",character_defect=" << fmt(x.character_defect)
      << ",characters_invariant=" << (x.characters_invariant ? "true" : "false") << '\n';
  c.plan["extension"] = extension_json(x);
  return finish(c, pass, csv.str(), "");
}

RunResult run_extend(Context& c) {
  const ElementSet h = subgroup_param(c);
  const Subgroup sub = subgroup(c.g.table(), h);
  const ProductAction aH = subgroup_action(c, sub.group);
  const std::size_t l_max = c.p.size("l_max", 3, 1);
  const auto tracked = c.p.elements(c.g, "tracked");
  const auto x = extend_finite_index(aH, c.g, h, l_max, tracked);
  bool pass = true;
  for (const auto& t : x.towers) pass = pass && t.pass;
  c.plan["extension"] = extension_json(x);
  return finish(c, pass, std::string(kElementHeader) + kStageHeader + "\n" + tower_rows(c.g, x.towers), "");
}

RunResult run_construct(Context& c) {
  const std::string route = c.p.str("route", "strongly-outer");
  const std::size_t l_max = c.p.size("l_max", 4, 1);
  const Theta theta = c.p.theta("theta", "sqrt2");
  const auto tracked = c.p.elements(c.g, "tracked");
  if (route == "rokhlin") {
    const auto r = rokhlin_action_universal(c.g, l_max, theta, tracked);
    json cuts = json::array();
    for (const auto& cd : r.cut_downs) cuts.push_back(cut_json(cd));
    c.plan["rokhlin"] = {{"parts", r.part_names}, {"cut_downs", cuts}};
    if (r.extension) c.plan["rokhlin"]["extension"] = extension_json(*r.extension);
    return finish(c, r.pass, std::string(kElementHeader) + kStageHeader + "\n" + tower_rows(c.g, r.towers), "");
  }
  if (route != "strongly-outer") throw Error("route: expected 'strongly-outer' or 'rokhlin'");
  const auto target = target_factors(c);
  if (!target) throw Error("construct needs a [factors] section for the target");
  StronglyOuterOptions opt;
  opt.copies = c.p.size("copies", opt.copies, 1);
  opt.l_max = l_max;
  opt.extra_levels = c.p.size("extra_levels", opt.extra_levels);
  opt.theta = theta;
  opt.tracked = tracked;
  const auto r = construct_strongly_outer(c.g, *target, opt);
  std::ostringstream csv;
  csv << kElementHeader << kStageHeader << '\n';
  for (std::size_t i = 0; i < r.schedules.size(); ++i)
    csv << stage_rows(c.g.describe(r.tracked[i]) + "," + order_text(r.schedules[i].k) + ",schedule,", r.schedules[i].stages);
  for (std::size_t i = 0; i < r.witnesses.size(); ++i)
    csv << "# witness element=" << c.g.describe(r.tracked[i]) << ",gap=" << fmt(r.witnesses[i].gap())
        << ",verdict=" << (r.witnesses[i].witness() ? "WITNESS" : "NO_WITNESS") << '\n';
  csv << "# same_type=" << (r.same_type ? "true" : "false") << '\n';
  json bumps = json::array();
  for (std::size_t i = 0; i < r.bumps.size(); ++i) {
    json b = bump_json(r.bumps[i]);
    b["element"] = element_json(c.g, r.tracked[i]);
    b["slice"] = sequence_json(r.slices[i]);
    bumps.push_back(b);
  }
  c.plan["strongly_outer"] = {{"separating", r.separating.name()}, {"bumps", bumps}};
  return finish(c, r.pass, csv.str(), "");
}

RunResult run_crossed(Context& c) {
  if (!c.g.is_table()) throw Error("crossed needs a table group");
  const std::size_t stage = c.p.size("stage", 2);
  const std::size_t words = c.p.size("words", 50, 1);
  const auto seed = static_cast<std::uint64_t>(c.p.integer("seed", 1, 0));
  std::mt19937_64 rng(seed);
  std::ostringstream csv;
  csv << "stage,dim,ambient,covariance,representation,multiplicativity,adjoint,unital,norm,pass\n";
  bool pass = true;
  CrossedStage s = crossed_stage(c.a, 0);
  for (std::size_t m = 0; m <= stage; ++m) {
    const auto cov = verify_covariance(s);
    ConnectingReport conn;
    std::optional<CrossedStage> next;
    const bool has_next = m < stage && c.a.factors().has(m);
    if (has_next) {
      auto link = connecting_map(s, c.a.factor(m).images);
      conn = verify_connecting_map(link.map, words, rng);
      next = link.next;
    }
    const bool ok = cov.pass && (!has_next || conn.pass);
    pass = pass && ok;
    csv << m << ',' << s.dim() << ',' << s.ambient() << ',' << fmt(cov.covariance) << ',' << fmt(cov.representation) << ',';
    if (has_next)
      csv << fmt(conn.multiplicativity) << ',' << fmt(conn.adjoint) << ',' << fmt(conn.unital) << ',' << fmt(conn.norm);
    else
      csv << ",,,";
    csv << ',' << (ok ? "PASS" : "FAIL") << '\n';
    if (!next) break;
    s = *next;
  }
  c.plan["crossed"] = {{"stage", stage}, {"words", words}, {"seed", seed}};
  return finish(c, pass, csv.str(), "");
}

RunResult run_simplex(Context& c) {
  if (!c.g.is_table()) throw Error("simplex needs a table group");
  const std::size_t depth = c.p.size("depth", 4, 1);
  const auto states = trace_simplex_diameter(c.a, depth);
  c.plan["simplex"] = {{"depth", depth}, {"verdict", simplex_verdict(states)}};
  return finish(c, true, simplex_csv(states), "diameter verdict: " + simplex_verdict(states) + "\n");
}

RunResult input_error(const std::string& msg) {
  RunResult r;
  r.exit_code = kExitInput;
  r.report = "error: " + msg + "\n";
  return r;
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> c{"info",   "evaluate", "tower",     "certify", "witness", "bump-up",
                                          "cut-down", "induce", "extend", "construct", "crossed", "simplex"};
  return c;
}

RunResult run_command(const ActionSpecDocument& doc, const RunOptions& options) {
  using Runner = RunResult (*)(Context&);
  static const std::map<std::string, Runner> runners{
      {"info", run_info},         {"evaluate", run_evaluate}, {"tower", run_tower},       {"certify", run_certify},
      {"witness", run_witness},   {"bump-up", run_bump_up},   {"cut-down", run_cut_down}, {"induce", run_induce},
      {"extend", run_extend},     {"construct", run_construct}, {"crossed", run_crossed}, {"simplex", run_simplex}};
  const auto it = runners.find(options.command);
  if (it == runners.end()) return input_error("unknown command '" + options.command + "'");
  try {
    const GroupSpec g = build_group(doc.group);
    const ProductAction a = build_action(doc, g);
    Params p(doc, options);
    Context c{doc, g, a, p, json::object()};
    c.plan["command"] = options.command;
    c.plan["document"] = doc.text;
    c.plan["action"] = a.name();
    c.plan["factors"] = sequence_json(a.factors());
    RunResult r = it->second(c);
    p.check_unused();
    json full = json::parse(*r.plan);
    full["parameters"] = p.resolved();
    r.plan = full.dump(2) + "\n";
    return r;
  } catch (const Error& e) {
    return input_error(e.what());
  }
}

RunResult run_document(const std::string& text, const RunOptions& options) {
  try {
    return run_command(ActionSpecDocument::parse(text), options);
  } catch (const Error& e) {
    return input_error(e.what());
  }
}

}  // namespace uhf
