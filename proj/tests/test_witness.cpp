#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "uhf/witness.hpp"

using namespace uhf;
using testing::random_unitary;

namespace {

// tau(u v u* v*) from dense matrices
Complex brute_commutator(const Matrix& u, const Matrix& v) {
  return normalized_trace(testing::naive_product(testing::naive_product(u, v), testing::naive_product(u.adjoint(), v.adjoint())));
}

}  // namespace

TEST_CASE("commutator trace sequences") {
  std::vector<Unitary> us, vs;
  for (std::int64_t n = 2; n < 12; ++n) {
    std::vector<Rational> a, b;
    for (std::int64_t j = 0; j < n; ++j) {
      a.emplace_back(j, n);
      b.emplace_back(j * j, 7);
    }
    us.push_back(Unitary::diagonal_phases(a));
    vs.push_back(Unitary::diagonal_phases(b));
  }
  const auto flat = commutator_trace_sequence(us, vs);
  for (const auto& z : flat.values) CHECK(std::abs(z - 1.0) <= 1e-15);
  CHECK(flat.gap() <= 1e-15);
  CHECK(!flat.witness());

  const auto self = commutator_trace_sequence(us, us);
  for (const auto& z : self.values) CHECK(z == Complex(1.0, 0.0));

  std::vector<Unitary> cu, fv;
  std::vector<std::int64_t> idx;
  for (std::int64_t n = 1; n <= 40; ++n) {
    cu.push_back(cycle_unitary(n));
    fv.push_back(diagonal_flow(n, Theta::rational(Rational(1)), Rational(1, 2)));
    idx.push_back(n);
  }
  const auto flow = commutator_trace_sequence(cu, fv, idx);
  for (std::size_t i = 0; i < flow.values.size(); ++i) {
    const std::int64_t n = flow.index[i];
    CHECK(std::abs(flow.values[i] - brute_commutator(cu[i].dense(), fv[i].dense())) <= 1e-12);
    CHECK(std::abs(flow.values[i] - closed_form_flow_trace(n, 1.0, 0.5)) <= 1e-12);
    CHECK(std::abs(flow.values[i]) <= 1.0 + 1e-10);
  }
  CHECK(flow.gap() > 0.0);
  CHECK(flow.witness());

  CHECK_THROWS_AS(commutator_trace_sequence(std::vector<Unitary>{cycle_unitary(2)}, std::vector<Unitary>{cycle_unitary(3)}),
                  Error);
  CHECK_THROWS_AS(commutator_trace_sequence(cu, fv, {1, 2}), Error);
}

TEST_CASE("flow trace formulas") {
  CHECK(std::abs(closed_form_flow_trace(5, std::sqrt(2.0), 0.0) - 1.0) <= 1e-15);
  CHECK(std::abs(closed_form_flow_trace(3, std::sqrt(2.0), 0.5) - (-1.0 / 3.0)) <= 1e-15);
  const Matrix c3 = cycle_unitary(3).dense();
  const Matrix v3 = diagonal_flow(3, Theta::sqrt(2), 0.5).dense();
  CHECK(std::abs(brute_commutator(c3, v3) - (-1.0 / 3.0)) <= 1e-15);

  const Theta thetas[] = {Theta::rational(Rational(1)), Theta::sqrt(2)};
  const double rs[] = {1.0 / 7.0, 1.0 / 3.0, 0.5, std::sqrt(2.0) / 5.0};
  for (const auto& th : thetas)
    for (double r : rs)
      for (std::int64_t n = 1; n <= 64; ++n) {
        const Complex bf = brute_commutator(cycle_unitary(n).dense(), diagonal_flow(n, th, r).dense());
        CHECK(std::abs(flow_trace(n, th.value, r) - bf) <= 1e-12);
        CHECK(std::abs(commutator_trace(cycle_unitary(n), diagonal_flow(n, th, r)) - bf) <= 1e-12);
        // parity-class limit points
        const Complex limit = std::exp(Complex(0, -kTwoPi * (n % 2 ? 1.0 : th.value) * r));
        CHECK(std::abs(bf - limit) <= 2.0 / static_cast<double>(n) + 1e-12);
      }
  // the two forms agree whenever e^{2 pi i theta_n n r} is real
  for (std::int64_t n = 1; n <= 64; ++n)
    CHECK(std::abs(flow_trace(n, 1.0, 0.5) - closed_form_flow_trace(n, 1.0, 0.5)) <= 1e-12);
}

TEST_CASE("gap classes") {
  const Theta root2 = Theta::sqrt(2);
  std::vector<Unitary> cu, fv;
  for (std::int64_t n = 2; n <= 41; ++n) {
    cu.push_back(cycle_unitary(n));
    fv.push_back(diagonal_flow(n, root2, Rational(1)));
  }
  auto s = commutator_trace_sequence(cu, fv);
  CHECK(s.gap() <= 1e-12);
  s.classes = 2;
  // even n approach e^{-2 pi i sqrt2}
  CHECK(s.gap() >= std::abs(1.0 - std::exp(Complex(0, -kTwoPi * std::sqrt(2.0)))) - 2.0 / 26.0);
  CHECK(s.witness());
}

TEST_CASE("two-norm identity and symmetry") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 63);
    const Matrix w = random_unitary(rng, n), v = random_unitary(rng, n);
    const Complex tr = brute_commutator(w, v);
    const double lhs = std::pow(two_norm(w * v * w.adjoint() - v), 2);
    CHECK(std::abs(lhs - 2.0 * (1.0 - tr.real())) <= 1e-12);
    CHECK(std::abs(brute_commutator(v, w) - std::conj(tr)) <= 1e-12);
  }
  for (int t = 0; t < 50; ++t) {
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Rational> ph(6);
    for (auto& p : ph) p = Rational(static_cast<std::int64_t>(rng() % 4), 4);
    const Unitary a = Unitary::from_monomial({perm, ph});
    const Unitary b = Unitary::diagonal_phases(ph);
    CHECK(two_norm_distance(a, b) == doctest::Approx(two_norm(a.dense() - b.dense())).epsilon(1e-12));
  }
}

TEST_CASE("weak inner defect") {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto reg = regular_action(z2);
  const StageUnitary st = reg.stage(z2.element(1), 3);
  const Unitary sign = Unitary::diagonal_phases({Rational(0), Rational(1, 2)});
  CHECK(weak_inner_defect(st, cycle_unitary(2), 1) == 0.0);
  CHECK(weak_inner_defect(st, sign, 0) == doctest::Approx(2.0));
  CHECK(commutator_trace(cycle_unitary(2), sign) == Complex(-1.0, 0.0));
  CHECK(two_norm(cycle_unitary(2).dense() * sign.dense() * cycle_unitary(2).dense() - sign.dense()) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(weak_inner_defect(st, sign, 3), Error);
  CHECK_THROWS_AS(weak_inner_defect(st, cycle_unitary(3), 0), Error);

  // pure tensors: defect^2 = 2(1 - Re tau([u_factor, v]))
  const GroupSpec s3(FiniteGroup::symmetric(3));
  const auto m = map_embed_action(s3);
  std::mt19937_64 rng(67);
  for (std::size_t x = 1; x < 6; ++x) {
    const StageUnitary su = m.stage(s3.element(x), 3);
    for (std::size_t l = 0; l < 3; ++l) {
      const Unitary v = Unitary::from_matrix(random_unitary(rng, static_cast<std::size_t>(su.dims[l])));
      const double d = weak_inner_defect(su, v, l);
      const Complex tr = commutator_trace(m.factor_image(s3.element(x), l), v);
      CHECK(std::abs(d * d - 2.0 * (1.0 - tr.real())) <= 1e-12);
    }
  }

  // copy c of factor l sits at position 3 l + c
  const auto p = tensor_power(m, 3);
  std::size_t l = 0;
  while (m.factor_image(s3.element(3), l).dim() < 2 || m.factor_image(s3.element(3), l).is_identity()) ++l;
  const StageUnitary sp = p.stage(s3.element(3), 3 * l + 3);
  const Unitary v = default_test_unitary(m.factor_image(s3.element(3), l));
  const double d0 = weak_inner_defect(sp, v, 3 * l);
  CHECK(d0 > 0.1);
  for (std::size_t c = 1; c < 3; ++c) CHECK(weak_inner_defect(sp, v, 3 * l + c) == doctest::Approx(d0).epsilon(1e-12));
}

TEST_CASE("action witness") {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto s = action_witness(regular_action(z2), z2.element(1), 10);
  REQUIRE(s.values.size() == 10);
  for (const auto& z : s.values) CHECK(std::abs(z + 1.0) <= 1e-15);
  CHECK(s.gap() == doctest::Approx(2.0));

  const auto quiet = action_witness(interleave_identity(regular_action(z2)), z2.element(1), 15);
  CHECK(quiet.index == std::vector<std::int64_t>{0, 2, 6, 14});

  const GroupSpec s3(FiniteGroup::symmetric(3));
  const auto w = action_witness(map_embed_action(s3), s3.element(1), 12);
  CHECK(w.witness());
  CHECK(!action_witness(trivial_action(z2, FactorSequence::constant(3)), z2.element(1), 5).witness());

  const std::string csv = witness_csv(s);
  CHECK(csv.rfind("n,re_tau,im_tau,abs_one_minus_tau\n0,-1,", 0) == 0);
  CHECK(csv.find("# verdict=WITNESS,gap=2,threshold=0.001") != std::string::npos);
}
