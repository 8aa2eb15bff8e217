#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "uhf/actions.hpp"
#include "uhf/crossed.hpp"
#include "uhf/linalg.hpp"
#include "uhf/rokhlin.hpp"
#include "uhf/transforms.hpp"
#include "uhf/witness.hpp"

using namespace uhf;

namespace {

constexpr double kFlowTol = 1e-12;
constexpr double kTwoNormTol = 1e-12;
constexpr double kRegularTol = 1e-12;
constexpr double kOrthoTol = 1e-12;
constexpr double kRoundoff = 1e-12;  // absolute slack for the 2 delta and 10 N^3 eps bounds
constexpr double kInductionTol = 1e-12;
constexpr double kDiameterTol = 1e-12;
constexpr double kCollapse = 1e-6;
constexpr double kControlFloor = 0.1;
constexpr double kCrossedTol = 1e-10;
constexpr double kGapFloor = 1e-3;
constexpr double kComposeTol = 1e-10;

// Criteria expected to fail; see README.
const std::set<int> kExpectedFailures{1};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double max_defect(const TowerDefects& d) { return std::max({d.orthogonality, d.shift, d.trace}); }

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

Outcome flow_formula() {
  double worst = 0.0, corrected = 0.0;
  const std::vector<Theta> thetas{Theta::rational(Rational(1)), Theta::sqrt(2)};
  const std::vector<double> rs{1.0 / 7.0, 1.0 / 3.0, 0.5, std::sqrt(2.0) / 5.0};
  for (const auto& th : thetas)
    for (double r : rs)
      for (std::int64_t n = 1; n <= 64; ++n) {
        const Complex bf = commutator_trace(cycle_unitary(n), diagonal_flow(n, th, r));
        worst = std::max(worst, std::abs(closed_form_flow_trace(n, th.value, r) - bf));
        corrected = std::max(corrected, std::abs(flow_trace(n, th.value, r) - bf));
      }
  return {worst <= kFlowTol, "max |closed_form - brute_force| = " + fmt(worst) + " (tol " + fmt(kFlowTol) +
                                 "); corrected formula error = " + fmt(corrected)};
}

Outcome two_norm_identity() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(2, 32);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = dim(rng);
    const Unitary w = Unitary::from_matrix(random_unitary(rng, n));
    const Unitary v = Unitary::from_matrix(random_unitary(rng, n));
    const double lhs = std::pow(two_norm((w * v * w.adjoint()).dense() - v.dense()), 2);
    const double rhs = 2.0 * (1.0 - commutator_trace(w, v).real());
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= kTwoNormTol, "max |lhs - rhs| = " + fmt(worst) + " over 1000 pairs (tol " + fmt(kTwoNormTol) + ")"};
}

Outcome regular_exactness() {
  double worst = 0.0;
  std::size_t towers = 0;
  for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(6), FiniteGroup::symmetric(3)}) {
    const GroupSpec gs(g);
    const auto a = regular_action(gs);
    for (const auto& e : gs.tracked())
      for (std::size_t m = 1; m <= 4; ++m) {
        const Unitary u = a.evaluate(e, m);
        const auto k = *gs.order_of(e);
        const auto t = orbit_tower(u, k);
        worst = std::max(worst, max_defect(tower_defects(t, u)));
        if (t.length() != static_cast<std::size_t>(k)) worst = std::max(worst, 1.0);
        ++towers;
      }
  }
  return {worst <= kRegularTol, "max defect = " + fmt(worst) + " over " + std::to_string(towers) + " stage towers"};
}

Outcome projection_repair() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> size(0.0, 0.2), unit(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 8);
  double ratio = 0.0;
  int used = 0;
  while (used < 500) {
    const auto n = dim(rng);
    const auto rank = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const Matrix v = random_unitary(rng, n).leftCols(rank);
    const Matrix r = random_matrix(rng, n);
    Matrix e = (r + r.adjoint()) / 2.0;
    e *= size(rng) / operator_norm(e);
    const Matrix x = v * v.adjoint() + e;
    const double defect = operator_norm(x * x - x);
    if (defect >= 0.24) continue;
    const double delta = defect + unit(rng) * (0.25 - defect) * 0.999;
    const Projection p = nearest_projection(x, delta);
    ratio = std::max(ratio, (operator_norm(p.matrix() - x) - kRoundoff) / (2.0 * delta));
    ++used;
  }
  double ortho = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Matrix u = random_unitary(rng, 8);
    std::vector<Projection> q;
    for (int i = 0; i < 4; ++i) {
      const Vector w = u.col(i) + 1e-4 * random_matrix(rng, 8).col(0);
      q.emplace_back(w * w.adjoint() / w.squaredNorm());
    }
    double overlap = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) overlap = std::max(overlap, operator_norm(q[i].matrix() * q[j].matrix()));
    const auto p = orthogonalize_projections(q, 32.0 * overlap);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) ortho = std::max(ortho, operator_norm(p[i].matrix() * p[j].matrix()));
  }
  return {ratio <= 1.0 && ortho <= kOrthoTol,
          "max ||p - a|| / (2 delta) = " + fmt(ratio) + " over 500 inputs; max ||p_i p_j|| = " + fmt(ortho)};
}

Outcome lie_bound() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(2, 4), mode(0, 2);
  std::uniform_real_distribution<double> scale(-8.0, 0.0);
  double ratio = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(pick(rng));
    const auto np = static_cast<std::size_t>(pick(rng));
    const auto big = static_cast<Eigen::Index>(n * np);
    Matrix x = random_matrix(rng, big);
    if (mode(rng) > 0) x = kron(identity(n), random_matrix(rng, static_cast<Eigen::Index>(np))) + std::pow(10.0, scale(rng)) * x;
    const double eps = matrix_unit_commutator_bound(x, n, np);
    const auto fc = factor_commutant(x, n, np, eps);
    const double err = operator_norm(x - kron(identity(n), fc.b));
    const double bound = 10.0 * std::pow(static_cast<double>(n), 3) * eps;
    ratio = std::max(ratio, (err - kRoundoff) / bound);
  }
  return {ratio <= 1.0, "max ||x - 1 (x) b|| / (10 N^3 eps) = " + fmt(ratio) + " over 1000 inputs"};
}

Outcome bump_schedule() {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const FactorSequence target = FactorSequence::constant(3);
  const auto b = bump_up(regular_action(z2), z2.element(1), 2, target, 8);
  bool ok = b.plan.pass && b.plan.levels.size() == 8;
  double worst = 0.0;
  for (const auto& l : b.plan.levels) {
    const double eps = std::ldexp(1.0, -static_cast<int>(l.level - 1));
    worst = std::max(worst, max_defect(l.transported) / eps);
    const std::int64_t n = target.product(l.target_begin, l.target_end);
    ok = ok && l.source_size == 2 && l.target_size == n && n == l.quotient * 2 + l.remainder && l.remainder >= 0 &&
         l.remainder < 2 && std::ldexp(static_cast<double>(l.remainder), static_cast<int>(l.level)) < static_cast<double>(n);
  }
  ok = ok && worst <= 1.0;
  return {ok, "8 levels, max transported defect / 2^-(l-1) = " + fmt(worst) + ", plan identities " +
                  (ok ? "hold" : "violated")};
}

// Exact 2-tower for a +-1 diagonal: pairs of a +1 and a -1 coordinate, entries +-1/2.
RokhlinTower sign_tower(const Unitary& u) {
  const auto& m = u.monomial();
  std::vector<std::size_t> plus, minus;
  for (std::size_t j = 0; j < m.perm.size(); ++j) (m.phase[j] == Rational(0) ? plus : minus).push_back(j);
  const auto n = static_cast<Eigen::Index>(m.perm.size());
  Matrix p0 = Matrix::Zero(n, n), p1 = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < std::min(plus.size(), minus.size()); ++i) {
    const auto a = static_cast<Eigen::Index>(plus[i]), b = static_cast<Eigen::Index>(minus[i]);
    p0(a, a) = p0(b, b) = p1(a, a) = p1(b, b) = 0.5;
    p0(a, b) = p0(b, a) = 0.5;
    p1(a, b) = p1(b, a) = -0.5;
  }
  return RokhlinTower::dense({Projection(p0), Projection(p1)}, true);
}

Outcome cut_down_exact() {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const Unitary s = Unitary::diagonal_phases({Rational(0), Rational(1, 2), Rational(1, 2)});
  const auto a = explicit_action(z2, {}, {Factor{3, {Unitary::identity(3), s}}}, "sign-minus");
  const auto schedule = certify_schedule(a, z2.element(1), 2, 6, ScheduleRule::geometric());
  const auto r = cut_down(a, z2.element(1), schedule);
  bool ok = r.k == 2;
  double worst = 0.0;
  std::int64_t uncovered = 0;
  for (std::size_t m = 1; m <= 8; ++m) {
    ok = ok && r.action.factors().at(m - 1) == 2;
    const Unitary u = r.action.evaluate(z2.element(1), m);
    ok = ok && u.is_exact() && u.is_diagonal();
    worst = std::max(worst, max_defect(tower_defects(sign_tower(u), u)));
    std::vector<Unitary> fs;
    for (std::size_t l = 0; l < m; ++l) fs.push_back(r.action.factor_image(z2.element(1), l));
    const auto census = diagonal_census(fs, 2);
    uncovered += census.dim - census.covered;
  }
  ok = ok && worst == 0.0 && uncovered == 0;
  return {ok, "stages 1..8 on 2^inf: max defect = " + fmt(worst) + ", uncovered coordinates = " + std::to_string(uncovered)};
}

Outcome induction_law() {
  double worst = 0.0;
  bool invariant = true;
  const std::vector<std::pair<FiniteGroup, ElementSet>> cases{{FiniteGroup::cyclic(4), {0, 2}},
                                                              {FiniteGroup::symmetric(3), {}}};
  for (auto [g, h] : cases) {
    if (h.empty()) {
      for (std::size_t x = 0; x < g.order(); ++x)
        if (g.element_order(x) == 3) h = g.generated_by(std::vector<std::size_t>{x});
    }
    const Subgroup sub = subgroup(g, h);
    const auto aH = regular_action(GroupSpec(sub.group));
    const auto x = extend_finite_index(aH, GroupSpec(g), h, 0);
    invariant = invariant && x.characters_invariant;
    const double index = static_cast<double>(g.order() / h.size());
    for (std::size_t l = 0; l < 4; ++l)
      for (std::size_t i = 0; i < sub.embedding.size(); ++i) {
        const std::size_t n = sub.embedding[i];
        if (std::find(x.core.begin(), x.core.end(), n) == x.core.end()) continue;
        const Complex lhs = x.induced.factor(l).images[n].dense().trace();
        const Complex rhs = index * aH.factor(l).images[i].dense().trace();
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  return {worst <= kInductionTol && invariant, "max |tr rho^G(n) - [G:H] tr rho(n)| = " + fmt(worst) + " over 4 factors"};
}

Outcome simplex_collapse() {
  double worst = 0.0;
  std::size_t crossing = 0;
  for (std::size_t L = 1; L <= 15; ++L) {
    const double d = trace_simplex_diameter(sign_three_action(), L).back().diameter;
    worst = std::max(worst, std::abs(d - 2.0 * std::pow(3.0, -static_cast<double>(L))));
    if (!crossing && d <= kCollapse) crossing = L;
  }
  const double control = trace_simplex_diameter(control_family_action(), 15).back().diameter;
  return {worst <= kDiameterTol && crossing == 14 && control > kControlFloor,
          "max |diam - 2 3^-L| = " + fmt(worst) + ", first L below 1e-6 = " + std::to_string(crossing) +
              ", control diameter at L=15 = " + fmt(control)};
}

Outcome crossed_soundness() {
  std::mt19937_64 rng(10);
  double cov = 0.0, mult = 0.0;
  bool ok = true;
  for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}) {
    const auto a = regular_action(GroupSpec(g));
    CrossedStage s = crossed_stage(a, 0);
    for (std::size_t m = 0; m <= 3; ++m) {
      cov = std::max(cov, verify_covariance(s).covariance);
      if (m == 3) break;
      auto link = connecting_map(s, a.factor(m).images);
      const auto rep = verify_connecting_map(link.map, 200, rng);
      mult = std::max(mult, rep.multiplicativity);
      ok = ok && rep.adjoint <= kCrossedTol && rep.unital <= kCrossedTol;
      s = link.next;
    }
  }
  ok = ok && cov <= kCrossedTol && mult <= kCrossedTol;
  return {ok, "max covariance = " + fmt(cov) + ", max multiplicativity = " + fmt(mult) + " (200 words per map)"};
}

Outcome strongly_outer_pipeline() {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  StronglyOuterOptions opt;
  opt.copies = 2;
  opt.l_max = 6;
  const auto r = construct_strongly_outer(z2, FactorSequence::constant(3), opt);
  const bool cert = r.schedules.size() == 1 && r.schedules[0].pass && r.schedules[0].rule == ScheduleRule::geometric().name &&
                    r.schedules[0].stages.size() >= 6;
  const double gap = r.witnesses.empty() ? 0.0 : r.witnesses[0].gap();
  return {r.same_type && cert && gap >= kGapFloor, std::string("same_type = ") + (r.same_type ? "true" : "false") +
                                                       ", certificate " + (cert ? "PASS" : "FAIL") + ", witness gap = " + fmt(gap)};
}

Outcome universal_rokhlin() {
  const GroupSpec g(AbelianGroup::from_orders({2, 3}));
  const Element g0 = g.generator(0), g1 = g.generator(1), g01 = g.multiply(g0, g1);
  const auto r = rokhlin_action_universal(g, 4, Theta::sqrt(2), {g0, g1, g01});
  double gens = 0.0, mixed = 1.0;
  std::string route;
  bool ok = r.towers.size() == 3;
  for (const auto& t : r.towers) {
    double d = 0.0;
    for (const auto& s : t.stages) d = std::max(d, max_defect(s.defects));
    ok = ok && !t.stages.empty();
    if (t.element == g01) {
      mixed = d;
      route = t.route;
      ok = ok && t.order == 6;
    } else {
      gens = std::max(gens, d);
    }
  }
  ok = ok && gens == 0.0 && route == "compose-k" && mixed <= kComposeTol;
  return {ok, "generator defect = " + fmt(gens) + ", order-6 route " + route + " defect = " + fmt(mixed)};
}

struct Criterion {
  int id;
  std::string name;
  double budget;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form flow trace", 5, flow_formula},
      {2, "2-norm identity", 10, two_norm_identity},
      {3, "regular representation exactness", 5, regular_exactness},
      {4, "projection repair", 10, projection_repair},
      {5, "Lie bound", 10, lie_bound},
      {6, "bump-up defect schedule", 10, bump_schedule},
      {7, "cut-down exactness", 5, cut_down_exact},
      {8, "induction restriction law", 5, induction_law},
      {9, "trace-simplex collapse", 5, simplex_collapse},
      {10, "crossed-product stage soundness", 10, crossed_soundness},
      {11, "end-to-end pipeline", 30, strongly_outer_pipeline},
      {12, "universal Rokhlin assembly", 30, universal_rokhlin},
  };
  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.budget;
    if (!pass) failed.insert(c.id);
    char time[64];
    std::snprintf(time, sizeof time, "%.3fs/%gs", secs, c.budget);
    std::printf("criterion %2d %s %s: %s [%s]\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), time);
    std::fflush(stdout);
  }
  std::string expected, unexpected;
  for (int id : failed) (kExpectedFailures.count(id) ? expected : unexpected) += " " + std::to_string(id);
  for (int id : kExpectedFailures)
    if (!failed.count(id)) unexpected += " " + std::to_string(id) + "(passed)";
  std::printf("summary: %zu/%zu PASS; expected failures:%s; unexpected:%s\n", criteria.size() - failed.size(),
              criteria.size(), expected.empty() ? " none" : expected.c_str(), unexpected.empty() ? " none" : unexpected.c_str());
  return unexpected.empty() ? 0 : 1;
}
