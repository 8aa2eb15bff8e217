#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "uhf/exact.hpp"
#include "uhf/rokhlin.hpp"

using namespace uhf;
using testing::random_hermitian;
using testing::random_unitary;

namespace {

Matrix expi(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector d(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) d(i) = std::exp(Complex(0, es.eigenvalues()(i)));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Unitary order_k_unitary(std::mt19937_64& rng, const std::vector<std::size_t>& mult) {
  const auto k = static_cast<std::int64_t>(mult.size());
  std::vector<Complex> d;
  for (std::int64_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < mult[static_cast<std::size_t>(j)]; ++t) d.push_back(phase_value(Rational(j, k)));
  const auto n = static_cast<std::size_t>(d.size());
  const Matrix w = random_unitary(rng, n);
  return Unitary::from_matrix(w * Vector::Map(d.data(), static_cast<Eigen::Index>(n)).asDiagonal() * w.adjoint());
}

Unitary swap2() { return Unitary::permutation({1, 0}); }

}  // namespace

TEST_CASE("best cyclic tower examples") {
  const Unitary u = Unitary::diagonal_phases({Rational(0), Rational(1, 2)});
  const auto t = best_cyclic_tower(u, 2);
  REQUIRE(t.length() == 2);
  Matrix p1(2, 2), p2(2, 2);
  p1 << 0.5, 0.5, 0.5, 0.5;
  p2 << 0.5, -0.5, -0.5, 0.5;
  CHECK(approx_equal(t.projection(0), p1, 1e-15));
  CHECK(approx_equal(t.projection(1), p2, 1e-15));
  // diag(1,-1) [[a,b],[b,a]] diag(1,-1) = [[a,-b],[-b,a]]
  CHECK(approx_equal(u.conjugate(p1), p2, 0.0));
  const auto d = tower_defects(t, u);
  CHECK(d.orthogonality == 0.0);
  CHECK(d.shift == 0.0);
  CHECK(d.trace == doctest::Approx(0.0).epsilon(1e-15));

  const auto empty = best_cyclic_tower(Unitary::identity(3), 2);
  CHECK(empty.length() == 0);
  CHECK(tower_defects(empty, Unitary::identity(3)).trace == 1.0);

  const auto third = best_cyclic_tower(Unitary::diagonal_phases({Rational(0), Rational(1, 2), Rational(0)}), 2);
  CHECK(third.length() == 2);
  CHECK(third.trace(0) + third.trace(1) == doctest::Approx(2.0 / 3.0));
  CHECK(tower_defects(third, Unitary::diagonal_phases({Rational(0), Rational(1, 2), Rational(0)})).trace ==
        doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(best_cyclic_tower(u, 0), Error);
  CHECK_THROWS_AS(best_cyclic_tower(Unitary::diagonal_phases({Rational(0), Rational(1, 3)}), 2), Error);
  std::vector<Complex> off{1.0, std::polar(1.0, 1.0)};
  CHECK_THROWS_AS(best_cyclic_tower(Unitary::from_diagonal(Vector::Map(off.data(), 2)), 2), Error);
}

TEST_CASE("best cyclic tower properties") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> m(0, 3);
  for (int t = 0; t < 40; ++t) {
    const std::int64_t k = 2 + t % 3;
    std::vector<std::size_t> mult;
    for (std::int64_t j = 0; j < k; ++j) mult.push_back(m(rng) + (j == 0 ? 1 : 0));
    const Unitary u = order_k_unitary(rng, mult);
    const auto tower = best_cyclic_tower(u, k);
    const std::size_t d = *std::min_element(mult.begin(), mult.end());
    const double n = static_cast<double>(u.dim());
    CHECK(tower.length() == (d == 0 ? 0 : static_cast<std::size_t>(k)));
    const auto def = tower_defects(tower, u);
    CHECK(def.orthogonality <= 1e-10);
    CHECK(def.shift <= 1e-9);
    CHECK(def.trace == doctest::Approx(1.0 - static_cast<double>(k * static_cast<std::int64_t>(d)) / n).epsilon(1e-10));
  }

  // exact-phase inputs rebuilt in the cyclotomic field
  for (std::int64_t k : {2, 3, 4}) {
    std::vector<Rational> ph;
    for (int x = 0; x < 9; ++x) ph.push_back(Rational((x * x + 1) % k, k));
    const Unitary u = Unitary::diagonal_phases(ph);
    const auto chk = exact::exact_cyclic_tower(u, k);
    const auto tower = best_cyclic_tower(u, k);
    CHECK(chk.exact() == (chk.trace_defect == Rational(0)));
    CHECK(chk.self_adjoint);
    CHECK(chk.idempotent);
    CHECK(chk.orthogonal);
    CHECK(chk.shift_exact);
    CHECK(tower_defects(tower, u).trace == doctest::Approx(boost::rational_cast<double>(chk.trace_defect)));
    CHECK(tower.length() == (chk.rank == 0 ? 0 : static_cast<std::size_t>(k)));
  }
}

TEST_CASE("tower defects") {
  const Unitary lambda = Unitary::permutation({1, 2, 0});
  const auto orbit = orbit_tower(lambda, 3);
  const auto d = tower_defects(orbit, lambda);
  CHECK(d.max() == 0.0);
  const auto dense = tower_defects(best_cyclic_tower(lambda, 3), lambda);
  CHECK(dense.orthogonality <= 1e-15);
  CHECK(dense.shift <= 1e-14);
  CHECK(dense.trace <= 1e-15);

  std::mt19937_64 rng(43);
  const Unitary any = Unitary::from_matrix(random_unitary(rng, 4));
  const auto whole = RokhlinTower::dense({Projection(identity(4))}, true);
  const auto dw = tower_defects(whole, any);
  CHECK(dw.shift <= 1e-14);
  CHECK(dw.trace == 0.0);
  CHECK(tower_defects(RokhlinTower::dense({Projection(identity(4))}, false), any).shift == 0.0);

  // perturbed towers: per-sample norm oracle on the perturbation
  const Unitary c6 = cycle_unitary(6);
  const auto base = orbit_tower(c6, 6).densified();
  for (int t = 0; t < 20; ++t) {
    const double eta = 1e-8;
    std::vector<Projection> moved;
    double worst = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      const Matrix h = random_hermitian(rng, 6);
      const Matrix x = base.projection(i) + eta * h / operator_norm(h);
      const Projection p = nearest_projection(x, 0.1);
      worst = std::max(worst, operator_norm(p.matrix() - base.projection(i)));
      moved.push_back(p);
    }
    const auto pd = tower_defects(RokhlinTower::dense(moved, true), c6);
    CHECK(pd.max() > 0.0);
    CHECK(pd.orthogonality <= 2.0 * worst + 1e-15);
    CHECK(pd.shift <= 2.0 * worst + 1e-15);
    CHECK(pd.max() <= 1e-7);
  }

  // fast diagonal path against the dense path
  for (int t = 0; t < 20; ++t) {
    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Rational> ph(8);
    for (std::size_t x = 0; x < 8; ++x) ph[x] = Rational(static_cast<std::int64_t>(rng() % 5), 5);
    const Unitary u = Unitary::from_monomial({perm, ph});
    const auto tw = orbit_tower(u, 2);
    if (tw.length() == 0) continue;
    const Matrix f = testing::random_matrix(rng, 8);
    const std::vector<Matrix> fs{f};
    const auto fast = tower_defects(tw, u, fs);
    const auto slow = tower_defects(tw.densified(), u, fs);
    CHECK(fast.orthogonality == doctest::Approx(slow.orthogonality));
    CHECK(std::abs(fast.shift - slow.shift) <= 1e-12);
    CHECK(fast.trace == doctest::Approx(slow.trace));
    CHECK(fast.commutation == doctest::Approx(slow.commutation));
  }
  CHECK_THROWS_AS(tower_defects(orbit, Unitary::identity(2)), Error);
}

TEST_CASE("group tower") {
  const Unitary c7 = cycle_unitary(7);
  std::vector<Eigen::VectorXd> q;
  for (int i = 0; i < 6; ++i) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(7);
    d(i) = 1.0;
    q.push_back(d);
  }
  const auto t = RokhlinTower::diagonal(q, false);
  CHECK(tower_defects(t, c7).max() == doctest::Approx(1.0 / 7.0));
  CHECK(tower_defects(t, c7).shift == 0.0);
  const auto g = group_tower(t, 3);
  REQUIRE(g.length() == 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(g.diagonal(j) == q[j] + q[j + 3]);
  CHECK(tower_defects(g, c7).shift == 0.0);
  CHECK(tower_defects(g, c7).trace == doctest::Approx(1.0 / 7.0));
  const auto same = group_tower(t, 6);
  for (std::size_t j = 0; j < 6; ++j) CHECK(same.diagonal(j) == q[j]);
  CHECK_THROWS_AS(group_tower(t, 0), Error);
  CHECK_THROWS_AS(group_tower(t, 7), Error);

  std::mt19937_64 rng(47);
  for (int s = 0; s < 30; ++s) {
    const Matrix w = random_unitary(rng, 16);
    const Matrix h = random_hermitian(rng, 16);
    const Unitary u = Unitary::from_matrix(w * cycle_unitary(16).dense() * w.adjoint() * expi(1e-3 * h / operator_norm(h)));
    const std::size_t len = 9 + static_cast<std::size_t>(s % 6);
    std::vector<Projection> ps;
    for (std::size_t i = 0; i < len; ++i) ps.emplace_back(w.col(static_cast<Eigen::Index>(i)) * w.col(static_cast<Eigen::Index>(i)).adjoint());
    const auto tower = RokhlinTower::dense(ps, false);
    const auto before = tower_defects(tower, u);
    for (std::size_t target : {2, 3, 4}) {
      const auto grouped = group_tower(tower, target);
      const auto after = tower_defects(grouped, u);
      const std::size_t qq = len / target, r = len % target;
      double max_tau = 0.0;
      for (std::size_t i = 0; i < len; ++i) max_tau = std::max(max_tau, tower.trace(i));
      CHECK(after.shift <= static_cast<double>(qq) * before.shift + 1e-12);
      CHECK(after.trace <= before.trace + static_cast<double>(r) * max_tau + 1e-12);
      CHECK(grouped.cyclic() == false);
    }
  }
}

TEST_CASE("tensor towers") {
  std::mt19937_64 rng(53);
  const Unitary ua = order_k_unitary(rng, {2, 2, 1});
  const auto ta = best_cyclic_tower(ua, 3);
  const Unitary v = Unitary::from_matrix(random_unitary(rng, 3));
  const auto ident = RokhlinTower::dense({Projection(identity(3))}, true);
  const auto left = tensor_tower(ta, ident, TensorMode::ExtendLeft);
  const auto da = tower_defects(ta, ua);
  const auto dl = tower_defects(left, kron(ua, v));
  CHECK(std::abs(da.orthogonality - dl.orthogonality) <= 1e-14);
  CHECK(std::abs(da.shift - dl.shift) <= 1e-14);
  CHECK(std::abs(da.trace - dl.trace) <= 1e-14);
  const auto right = tensor_tower(ident, ta, TensorMode::ExtendRight);
  CHECK(std::abs(tower_defects(right, kron(v, ua)).trace - da.trace) <= 1e-14);
  CHECK_THROWS_AS(tensor_tower(RokhlinTower::dense({Projection(identity(2))}, false), ident, TensorMode::OrderKExtend),
                  Error);

  // compose-k on regular Z/2 towers: the square acts trivially, so the first tower is {1}
  const auto one = RokhlinTower::diagonal({Eigen::VectorXd::Ones(2)}, true);
  const auto q = orbit_tower(swap2(), 2);
  const Unitary sw = swap2();
  const auto c = tensor_tower(one, q, TensorMode::ComposeK, &sw);
  REQUIRE(c.length() == 2);
  CHECK(tower_defects(c, kron(sw, sw)).max() == 0.0);
  // Z/4 regular on C^4 composed with Z/2: the square of the 4-cycle has the tower {e0+e1, e2+e3}
  const Unitary c4 = cycle_unitary(4);
  Eigen::VectorXd h0(4), h1(4);
  h0 << 1, 1, 0, 0;
  h1 << 0, 0, 1, 1;
  const auto sq = RokhlinTower::diagonal({h0, h1}, true);
  CHECK(tower_defects(sq, c4.pow(2)).max() == 0.0);
  const auto c8 = tensor_tower(sq, q, TensorMode::ComposeK, &c4);
  REQUIRE(c8.length() == 4);
  CHECK(c8.cyclic());
  CHECK(tower_defects(c8, kron(c4, sw)).max() == 0.0);
  const auto c8d = tensor_tower(sq.densified(), q.densified(), TensorMode::ComposeK, &c4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(approx_equal(c8d.projection(i), c8.projection(i), 1e-15));
  CHECK_THROWS_AS(tensor_tower(sq, q, TensorMode::ComposeK, nullptr), Error);
  CHECK_THROWS_AS(tensor_tower(sq, RokhlinTower::dense({Projection(identity(2))}, false), TensorMode::ComposeK, &c4), Error);

  // subadditivity on perturbed pairs
  for (int s = 0; s < 100; ++s) {
    const Matrix ha = random_hermitian(rng, 4), hb = random_hermitian(rng, 2);
    const double eta = 1e-3 * static_cast<double>(1 + s % 5);
    const Unitary pa = Unitary::from_matrix(c4.dense() * expi(eta * ha / operator_norm(ha)));
    const Unitary pb = Unitary::from_matrix(sw.dense() * expi(eta * hb / operator_norm(hb)));
    const double bound = tower_defects(sq, pa.pow(2)).max() + tower_defects(q, pb).max();
    const auto out = tower_defects(tensor_tower(sq, q, TensorMode::ComposeK, &pa), kron(pa, pb));
    CHECK(out.max() <= bound + 1e-12);
    const auto ext = tower_defects(tensor_tower(q, sq, TensorMode::ExtendLeft), kron(pb, pa));
    CHECK(std::abs(ext.max() - tower_defects(q, pb).max()) <= 1e-14);
  }
}

TEST_CASE("census counts") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 30; ++t) {
    const std::int64_t k = 2 + t % 4;
    std::vector<Unitary> fs;
    for (int f = 0; f < 3; ++f) {
      std::vector<Rational> ph(2 + rng() % 3);
      for (auto& p : ph) p = Rational(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(k)), k);
      fs.push_back(Unitary::diagonal_phases(ph));
    }
    const Unitary u = kron_all(fs);
    std::vector<std::int64_t> count(static_cast<std::size_t>(k), 0);
    for (const auto& p : u.diagonal_phases_exact()) ++count[static_cast<std::size_t>((p * k).numerator())];
    const auto c = diagonal_census(fs, k);
    CHECK(c.dim == static_cast<std::int64_t>(u.dim()));
    CHECK(c.covered == k * *std::min_element(count.begin(), count.end()));

    std::vector<Unitary> ms;
    for (int f = 0; f < 3; ++f) {
      std::vector<std::size_t> perm(2 + rng() % 4);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      ms.push_back(Unitary::permutation(perm));
    }
    const Unitary m = kron_all(ms);
    const auto oc = orbit_census(ms, k);
    const auto ot = orbit_tower(m, k);
    CHECK(oc.dim == static_cast<std::int64_t>(m.dim()));
    CHECK(static_cast<double>(oc.covered) == doctest::Approx(ot.trace_covered() * static_cast<double>(m.dim())));
  }
  CHECK_THROWS_AS(diagonal_census(std::vector<Unitary>{cycle_unitary(2)}, 2), Error);
}

TEST_CASE("certified schedules") {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto rule = ScheduleRule::geometric();
  const auto reg = certify_schedule(regular_action(z2), z2.element(1), 2, 6, rule);
  CHECK(reg.pass);
  REQUIRE(reg.stages.size() == 6);
  for (const auto& st : reg.stages) {
    CHECK(st.defects.max() == 0.0);
    CHECK(st.route == "orbit");
    CHECK(st.end - st.begin == 1);
  }

  const auto triv = certify_schedule(trivial_action(z2, FactorSequence::constant(2)), z2.element(1), 2, 3, rule);
  CHECK(!triv.pass);
  REQUIRE(triv.stages.size() == 1);
  CHECK(triv.stages[0].defects.trace == 1.0);

  const Factor f3{3, {Unitary::identity(3), Unitary::diagonal_phases({Rational(0), Rational(0), Rational(1, 2)})}};
  const auto a3 = explicit_action(z2, {}, {f3}, "diag(1,1,-1)");
  const auto s3 = certify_schedule(a3, z2.element(1), 2, 8, rule);
  CHECK(s3.pass);
  for (const auto& st : s3.stages) {
    // sign patterns with an odd number of -1 entries: sum over odd m of C(b,m) 2^(b-m)
    const std::size_t b = st.end - st.begin;
    std::int64_t odd = 0, total = 1;
    for (std::size_t m = 1; m <= b; m += 2) {
      std::int64_t binom = 1;
      for (std::size_t i = 0; i < m; ++i) binom = binom * static_cast<std::int64_t>(b - i) / static_cast<std::int64_t>(i + 1);
      odd += binom * (std::int64_t{1} << (b - m));
    }
    for (std::size_t i = 0; i < b; ++i) total *= 3;
    const std::int64_t mn = std::min(odd, total - odd);
    CHECK(st.defects.trace == doctest::Approx(1.0 - 2.0 * static_cast<double>(mn) / static_cast<double>(total)));
    CHECK(st.block_size == total);
  }
  // coarser blocks never increase the census defect
  std::vector<Unitary> fs;
  double prev = 1.0;
  for (int b = 1; b <= 10; ++b) {
    fs.push_back(f3.images[1]);
    const double d = diagonal_census(fs, 2).trace_defect();
    CHECK(d <= prev);
    prev = d;
  }

  CHECK_THROWS_AS(certify_schedule(a3, z2.element(1), 2, 3, ScheduleRule::listed({0.5, 0.5, 0.1})), Error);
  CHECK_THROWS_AS(certify_schedule(a3, z2.element(1), 3, 3, rule), Error);
  CHECK_THROWS_AS(certify_schedule(explicit_action(z2, {f3, f3}, {}, "short"), z2.element(1), 2, 8, rule), Error);

  const GroupSpec z(AbelianGroup::from_orders({std::nullopt}));
  const auto flow = abelian_action(z, Theta::sqrt(2));
  const auto inf = certify_schedule(flow, z.generator(0), std::nullopt, 3, rule);
  REQUIRE(!inf.stages.empty());
  CHECK(inf.stages[0].route == "arc");
  CHECK(inf.stages[0].pass);
  CHECK_THROWS_AS(certify_schedule(flow, z.generator(0), 2, 3, rule), Error);

  const std::string csv = schedule_csv(reg);
  CHECK(csv.rfind("stage,block_size,tower_length,ortho_defect,shift_defect,trace_defect,epsilon,pass\n", 0) == 0);
  CHECK(csv.find("1,2,2,0,0,0,0.5,PASS") != std::string::npos);
}
