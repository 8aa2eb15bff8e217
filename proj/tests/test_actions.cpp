#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "uhf/actions.hpp"

using namespace uhf;
using testing::reorder_permutation;

namespace {

bool same_unitary(const Unitary& a, const Unitary& b, double tol) {
  if (a.is_exact() && b.is_exact()) {
    const auto& x = a.monomial();
    const auto& y = b.monomial();
    if (tol == 0.0) return x.perm == y.perm && x.phase == y.phase;
  }
  return approx_equal(a.dense(), b.dense(), tol);
}

Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto z : d) {
    m(i, i) = z;
    ++i;
  }
  return m;
}

void check_homomorphism(const ProductAction& a, std::size_t stage, double tol) {
  const auto& g = a.group();
  std::vector<Element> els;
  if (g.is_finite())
    els = g.elements();
  else
    els = g.tracked(12);
  els.push_back(g.identity());
  CHECK(a.evaluate(g.identity(), stage).is_identity(tol + kIdentityTol));
  for (const auto& x : els)
    for (const auto& y : els)
      CHECK(same_unitary(a.evaluate(x, stage) * a.evaluate(y, stage), a.evaluate(g.multiply(x, y), stage), tol));
}

}  // namespace

TEST_CASE("stage evaluation") {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const Factor f{2, {Unitary::identity(2), Unitary::diagonal_phases({Rational(0), Rational(1, 2)})}};
  const auto a = explicit_action(z2, {}, {f}, "sign");
  CHECK(a.evaluate(z2.identity(), 3).is_identity());
  CHECK(approx_equal(a.evaluate(z2.element(1), 2).dense(), diag({1, -1, -1, 1}), 0.0));
  const auto st = a.stage(z2.element(1), 3);
  CHECK(st.dims == std::vector<std::int64_t>{2, 2, 2});
  CHECK(st.u.dim() == 8);

  const Factor bad{2, {Unitary::identity(2), Unitary::diagonal_phases({Rational(0), Rational(1, 3)})}};
  CHECK_THROWS_AS(explicit_action(z2, {}, {bad}, "bad"), Error);

  const GroupSpec s3(FiniteGroup::symmetric(3));
  for (std::size_t stage = 1; stage <= 3; ++stage) {
    check_homomorphism(regular_action(s3), stage, 0.0);
    check_homomorphism(map_embed_action(s3), stage, 1e-10);
  }
  const auto fin = trivial_action(z2, FactorSequence::prefix({2, 3}));
  CHECK_THROWS_AS(fin.evaluate(z2.element(1), 3), Error);
}

TEST_CASE("regular action") {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto r2 = regular_action(z2);
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(approx_equal(r2.factor_image(z2.element(1), 0).dense(), swap, 0.0));

  const GroupSpec z3(FiniteGroup::cyclic(3));
  const Unitary u = regular_action(z3).factor_image(z3.element(1), 5);
  CHECK(u.monomial().perm == std::vector<std::size_t>{1, 2, 0});
  CHECK(u.pow(3).is_identity(0.0));
  CHECK_THROWS_AS(regular_action(GroupSpec(FiniteGroup::trivial())), Error);
}

TEST_CASE("diagonal flows and cycles") {
  const Theta one = Theta::rational(Rational(1));
  const Theta root2 = Theta::sqrt(2);
  CHECK(diagonal_flow(5, root2, Rational(0)).is_identity(0.0));
  CHECK(diagonal_flow(4, root2, 0.0).is_identity(0.0));
  CHECK(approx_equal(diagonal_flow(2, one, Rational(1, 2)).dense(), diag({-1, 1}), 1e-15));

  // v_n(r) = diag(exp(2 pi i theta_n l r)), l = 1..n, by direct substitution
  for (std::int64_t n : {3, 4}) {
    const double r = 0.3;
    const double t = n % 2 ? 1.0 : std::sqrt(2.0);
    const Vector d = diagonal_flow(n, root2, r).diagonal();
    for (std::int64_t l = 1; l <= n; ++l)
      CHECK(std::abs(d(l - 1) - std::exp(Complex(0, kTwoPi * t * static_cast<double>(l) * r))) < 1e-12);
  }

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    const double r = u(rng), s = u(rng);
    for (std::int64_t n : {1, 2, 7, 8}) {
      const Matrix lhs = (diagonal_flow(n, root2, r) * diagonal_flow(n, root2, s)).dense();
      CHECK(approx_equal(lhs, diagonal_flow(n, root2, r + s).dense(), 1e-12));
    }
  }
  CHECK(diagonal_flow(6, Theta::rational(Rational(1, 3)), Rational(1, 2)).is_exact());
  CHECK(!diagonal_flow(6, root2, Rational(1, 2)).is_exact());
  CHECK(diagonal_flow(5, root2, Rational(1, 2)).is_exact());

  CHECK(cycle_unitary(1).is_identity(0.0));
  Matrix c3 = Matrix::Zero(3, 3);
  c3(1, 0) = c3(2, 1) = c3(0, 2) = 1.0;
  CHECK(approx_equal(cycle_unitary(3).dense(), c3, 0.0));
  CHECK(cycle_unitary(3).pow(3).is_identity(0.0));
  for (std::int64_t n : {2, 5, 8}) {
    const auto parts = eig_unitary(cycle_unitary(n));
    REQUIRE(parts.size() == static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < parts.size(); ++j) {
      CHECK(parts[j].rank() == 1);
      CHECK(parts[j].phase == doctest::Approx(kTwoPi * static_cast<double>(j) / static_cast<double>(n)));
    }
  }
}

TEST_CASE("tensor combinators") {
  const GroupSpec s3(FiniteGroup::symmetric(3));
  const auto a = map_embed_action(s3);
  const auto id = trivial_action(s3, FactorSequence::constant(2));
  const auto t = tensor_actions(a, id);
  for (std::size_t x = 0; x < 6; ++x) {
    const Element g = s3.element(x);
    const std::size_t half = 2;
    std::vector<std::size_t> dims, sigma;
    for (std::size_t l = 0; l < half; ++l) dims.push_back(static_cast<std::size_t>(a.factors().at(l)));
    for (std::size_t l = 0; l < half; ++l) dims.push_back(2);
    for (std::size_t l = 0; l < half; ++l) {
      sigma.push_back(l);
      sigma.push_back(half + l);
    }
    const Unitary p = reorder_permutation(dims, sigma);
    const Unitary expected = p * kron(a.evaluate(g, half), Unitary::identity(4)) * p.adjoint();
    CHECK(approx_equal(t.evaluate(g, 2 * half).dense(), expected.dense(), 1e-12));
  }
  for (std::size_t stage = 1; stage <= 4; ++stage) check_homomorphism(t, stage, 1e-10);

  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto sum = sum_actions(regular_action(z2), regular_action(z2));
  const auto& v = sum.group();
  REQUIRE(v.table().order() == 4);
  const Matrix lambda = regular_action(z2).factor_image(z2.element(1), 0).dense();
  CHECK(approx_equal(sum.evaluate(v.element(2), 2).dense(), kron(lambda, identity(2)), 0.0));
  CHECK(approx_equal(sum.evaluate(v.element(1), 2).dense(), kron(identity(2), lambda), 0.0));
  CHECK(approx_equal(sum.evaluate(v.element(3), 2).dense(), kron(lambda, lambda), 0.0));
  check_homomorphism(sum, 3, 0.0);

  CHECK_THROWS_AS(tensor_actions(a, regular_action(z2)), Error);
}

TEST_CASE("tensor powers") {
  const GroupSpec s3(FiniteGroup::symmetric(3));
  const auto a = map_embed_action(s3);
  const auto one = tensor_power(a, 1);
  CHECK(same_unitary(one.evaluate(s3.element(3), 3), a.evaluate(s3.element(3), 3), 0.0));

  const auto p3 = tensor_power(a, 3);
  // factors copy0[0], copy1[0], copy2[0], copy0[1], ...; compare with copies-fold tensor of a's stage 2
  std::vector<std::size_t> dims, sigma;
  for (int c = 0; c < 3; ++c)
    for (std::size_t l = 0; l < 2; ++l) dims.push_back(static_cast<std::size_t>(a.factors().at(l)));
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t c = 0; c < 3; ++c) sigma.push_back(c * 2 + l);
  const Unitary p = reorder_permutation(dims, sigma);
  for (std::size_t x : {1, 3, 5}) {
    const Unitary single = a.evaluate(s3.element(x), 2);
    const Unitary expected = p * kron(kron(single, single), single) * p.adjoint();
    CHECK(same_unitary(p3.evaluate(s3.element(x), 6), expected, 1e-12));
  }
  CHECK_THROWS_AS(tensor_power(a, 0), Error);
}

TEST_CASE("interleaving with the identity") {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto a = regular_action(z2);
  const auto q = interleave_identity(a);
  CHECK(q.factors().head(5) == std::vector<std::int64_t>{2, 3, 4, 5, 6});
  CHECK(q.factors().type().is_universal());
  CHECK(supernatural_of(q.factors()) == supernatural_of(FactorSequence::universal()));

  // blocks of 2^infinity with strictly increasing sizes: 2, 4, 8, 16
  const auto blocks = increasing_blocks(a.factors(), 16);
  CHECK(blocks.sizes == std::vector<std::int64_t>{2, 4, 8, 16});
  CHECK(interleave_positions(a, 4) == std::vector<std::size_t>{0, 2, 6, 14});
  const Element g = z2.element(1);
  for (std::size_t l = 0; l < 15; ++l) {
    const bool active = l == 0 || l == 2 || l == 6 || l == 14;
    CHECK(q.factor_image(g, l).is_identity(0.0) == !active);
  }
  CHECK(same_unitary(q.factor_image(g, 2), a.block_image(g, 1, 3), 0.0));
  CHECK(same_unitary(q.factor_image(g, 6), a.block_image(g, 3, 6), 0.0));
  CHECK(q.block_image(g, 3, 6).is_identity(0.0));
  check_homomorphism(q, 4, 0.0);

  // sizes (l+1)! are already increasing, so they sit at n - 2
  std::vector<Factor> head;
  std::int64_t n = 1;
  const GroupSpec z2t(FiniteGroup::cyclic(2));
  for (std::int64_t l = 2; l <= 4; ++l) {
    n *= l;
    std::vector<Rational> ph(static_cast<std::size_t>(n), Rational(0));
    ph[0] = Rational(1, 2);
    head.push_back({n, {Unitary::identity(static_cast<std::size_t>(n)), Unitary::diagonal_phases(ph)}});
  }
  std::vector<Rational> ph(120, Rational(0));
  ph[0] = Rational(1, 2);
  const auto f = explicit_action(z2t, head, {{120, {Unitary::identity(120), Unitary::diagonal_phases(ph)}}}, "fact");
  CHECK(interleave_positions(f, 3) == std::vector<std::size_t>{0, 4, 22});
  const auto fq = interleave_identity(f);
  for (std::size_t l : {1, 2, 3, 5}) CHECK(fq.factor_image(z2t.element(1), l).is_identity(0.0));
  CHECK(!fq.factor_image(z2t.element(1), 4).is_identity(0.0));
}

TEST_CASE("abelian actions") {
  const Theta root2 = Theta::sqrt(2);
  const GroupSpec z(AbelianGroup::from_orders({std::nullopt}));
  const auto a = abelian_action(z, root2);
  for (std::size_t l = 0; l < 6; ++l) {
    const auto n = static_cast<std::int64_t>(l) + 2;
    CHECK(approx_equal(a.factor_image(z.generator(0), l).dense(), diagonal_flow(n, root2, 1.0).dense(), 1e-12));
    CHECK(approx_equal(a.factor_image(Element{{-3}}, l).dense(), diagonal_flow(n, root2, -3.0).dense(), 1e-10));
  }
  CHECK(a.evaluate(z.identity(), 4).is_identity());
  CHECK_THROWS_AS(abelian_action(z, Theta::rational(Rational(1))), Error);

  const GroupSpec z2(AbelianGroup::from_orders({2}));
  const auto b = abelian_action(z2, Theta::rational(Rational(1)));
  for (std::size_t l = 0; l < 5; ++l) {
    const auto n = static_cast<std::int64_t>(l) + 2;
    const Unitary u = b.factor_image(z2.generator(0), l);
    CHECK(u.is_exact());
    CHECK(same_unitary(u, diagonal_flow(n, Theta::rational(Rational(1)), Rational(1, 2)), 0.0));
  }

  const GroupSpec mixed(AbelianGroup::from_orders({std::nullopt, 3}));
  const auto m = abelian_action(mixed, root2);
  const auto summands = abelian_summands(mixed.presented(), root2);
  REQUIRE(summands.size() == 2);
  CHECK(summands[0].rational_part);
  CHECK(!summands[1].rational_part);
  CHECK(m.factors().head(4) == std::vector<std::int64_t>{2, 2, 3, 3});
  CHECK(m.factor_image(mixed.generator(0), 1).is_identity(0.0));
  CHECK(m.factor_image(mixed.generator(1), 0).is_identity(0.0));
  for (std::size_t stage = 1; stage <= 4; ++stage) check_homomorphism(m, stage, 1e-10);
  for (std::size_t l = 0; l < 6; ++l) CHECK(m.factor_defect(l) < 1e-10);
}
