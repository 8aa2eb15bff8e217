#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "uhf/linalg.hpp"

using namespace uhf;
using testing::naive_product;
using testing::random_hermitian;
using testing::random_matrix;
using testing::random_unitary;

namespace {

Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto z : d) {
    m(i, i) = z;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("kron") {
  CHECK(approx_equal(kron(identity(2), identity(3)), identity(6), 0.0));
  CHECK(approx_equal(kron(diag({1, -1}), identity(2)), diag({1, 1, -1, -1}), 0.0));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_matrix(rng, 2), b = random_matrix(rng, 2), c = random_matrix(rng, 2),
                 d = random_matrix(rng, 2);
    CHECK(approx_equal(naive_product(kron(a, b), kron(c, d)), kron(naive_product(a, c), naive_product(b, d)), 1e-12));
    CHECK(approx_equal(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-13));
  }
}

TEST_CASE("normalized trace and 2-norm") {
  CHECK(std::abs(normalized_trace(identity(5)) - 1.0) == 0.0);
  CHECK(std::abs(normalized_trace(diag({1, -1}))) == 0.0);
  CHECK(two_norm(identity(7)) == doctest::Approx(1.0));
  CHECK(two_norm(diag({-2, 2})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(normalized_trace(Matrix::Zero(2, 3)), Error);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_matrix(rng, 2), b = random_matrix(rng, 3);
    const Matrix ab = kron(a, b);
    Complex tr = 0.0;
    for (Eigen::Index i = 0; i < 6; ++i) tr += ab(i, i);
    CHECK(std::abs(tr / 6.0 - normalized_trace(a) * normalized_trace(b)) < 1e-14 * (1.0 + std::abs(tr)));
  }
  for (int t = 0; t < 100; ++t) {
    const Matrix a = random_matrix(rng, 4), b = random_matrix(rng, 4);
    CHECK(two_norm(a * b) <= two_norm(a) * testing::largest_singular_value(b) * (1.0 + 1e-12));
  }
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_matrix(rng, 4), u = random_unitary(rng, 4);
    const Matrix c = u * a * u.adjoint();
    CHECK(std::abs(normalized_trace(c) - normalized_trace(a)) < 1e-12);
    CHECK(std::abs(two_norm(c) - two_norm(a)) < 1e-12);
  }
}

TEST_CASE("nearest projection") {
  const Matrix p = diag({1, 0});
  CHECK(approx_equal(nearest_projection(p, 0.2).matrix(), p, 1e-14));

  const Matrix a = diag({0.9, 0.1});
  const Projection q = nearest_projection(a, 0.1);
  CHECK(approx_equal(q.matrix(), p, 1e-14));
  CHECK(operator_norm(q.matrix() - a) == doctest::Approx(0.1));

  CHECK_THROWS_AS(nearest_projection(a, 0.25), Error);
  CHECK_THROWS_AS(nearest_projection(diag({0.5, 0.0}), 0.2), Error);
  Matrix skew = a;
  skew(0, 1) = 0.3;
  CHECK_THROWS_AS(nearest_projection(skew, 0.2), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> size(0.0, 0.15);
  int used = 0;
  for (int t = 0; t < 500; ++t) {
    const Matrix v = random_unitary(rng, 5).leftCols(2);
    const Matrix base = v * v.adjoint();
    Matrix e = random_hermitian(rng, 5);
    e *= size(rng) / operator_norm(e);
    const Matrix x = base + e;
    if (operator_norm(x * x - x) >= 0.2) continue;
    ++used;
    const Projection out = nearest_projection(x, 0.2);
    const Matrix& m = out.matrix();
    CHECK(approx_equal(m, m.adjoint(), 1e-10));
    CHECK(approx_equal(m * m, m, 1e-10));
    CHECK(operator_norm(m - x) <= 0.4);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    int above = 0;
    for (Eigen::Index i = 0; i < 5; ++i) above += es.eigenvalues()(i) > 0.5;
    CHECK(std::abs(m.trace().real() - above) < 1e-9);
  }
  CHECK(used > 400);
}

TEST_CASE("orthogonalize projections") {
  {
    const std::vector<Projection> q{Projection(diag({1, 0, 0})), Projection(diag({0, 1, 0}))};
    const auto p = orthogonalize_projections(q, 0.1);
    CHECK(approx_equal(p[0].matrix(), q[0].matrix(), 1e-14));
    CHECK(approx_equal(p[1].matrix(), q[1].matrix(), 1e-14));
  }
  {
    const double s = 0.01;
    Vector v1 = Vector::Zero(3), v2 = Vector::Zero(3);
    v1(0) = 1.0;
    v2(0) = s;
    v2(1) = std::sqrt(1.0 - s * s);
    const std::vector<Projection> q{Projection(testing::rank_one(v1)), Projection(testing::rank_one(v2))};
    CHECK(operator_norm(q[0].matrix() * q[1].matrix()) == doctest::Approx(s));
    const auto p = orthogonalize_projections(q, 0.2);
    // symmetric orthogonalization in the 2-dimensional span, by hand
    const double c1 = (1.0 / std::sqrt(1.0 + s) + 1.0 / std::sqrt(1.0 - s)) / 2.0;
    const double c2 = (1.0 / std::sqrt(1.0 + s) - 1.0 / std::sqrt(1.0 - s)) / 2.0;
    const Vector w1 = c1 * v1 + c2 * v2, w2 = c2 * v1 + c1 * v2;
    CHECK(std::abs(w1.dot(w2)) < 1e-14);
    CHECK(approx_equal(p[0].matrix(), w1 * w1.adjoint(), 1e-12));
    CHECK(approx_equal(p[1].matrix(), w2 * w2.adjoint(), 1e-12));
    CHECK(operator_norm(p[0].matrix() - q[0].matrix()) <= 0.05);
    CHECK(operator_norm(p[1].matrix() - q[1].matrix()) <= 0.05);
    CHECK_THROWS_AS(orthogonalize_projections(q, 0.05), Error);
  }
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Matrix u = random_unitary(rng, 8);
    std::vector<Projection> q;
    for (int i = 0; i < 4; ++i) {
      Vector v = u.col(i) + 2e-4 * random_matrix(rng, 8).col(0);
      q.emplace_back(testing::rank_one(v));
    }
    double overlap = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) overlap = std::max(overlap, operator_norm(q[i].matrix() * q[j].matrix()));
    REQUIRE(overlap <= 1e-3);
    const auto p = orthogonalize_projections(q, 32.0 * overlap);
    for (int i = 0; i < 4; ++i) {
      CHECK(operator_norm(p[i].matrix() - q[i].matrix()) <= 1e-2);
      for (int j = i + 1; j < 4; ++j) CHECK(operator_norm(p[i].matrix() * p[j].matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("factor commutant") {
  std::mt19937_64 rng(13);
  const Matrix b = random_matrix(rng, 3);
  const auto exact = factor_commutant(kron(identity(2), b), 2, 3, 0.0);
  CHECK(approx_equal(exact.b, b, 1e-14));
  CHECK(exact.error < 1e-14);

  const double eta = 1e-6;
  Matrix e12 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  const Matrix x = kron(identity(2), b) + eta * kron(e12, identity(3));
  const double eps = matrix_unit_commutator_bound(x, 2, 3);
  CHECK(eps == doctest::Approx(eta).epsilon(1e-6));
  const auto near = factor_commutant(x, 2, 3, eps);
  CHECK(operator_norm(x - kron(identity(2), near.b)) <= 10.0 * 8.0 * eta);
  CHECK(near.bound == doctest::Approx(80.0 * eps));
  CHECK_THROWS_AS(factor_commutant(x, 2, 2, eps), Error);

  for (int t = 0; t < 1000; ++t) {
    const Matrix y = random_matrix(rng, 4);
    const double e = matrix_unit_commutator_bound(y, 2, 2);
    const auto fc = factor_commutant(y, 2, 2, e);
    CHECK(operator_norm(y - kron(identity(2), fc.b)) <= 80.0 * e + 1e-12);
  }
}

TEST_CASE("eigen decomposition of unitaries") {
  const auto d = eig_unitary(Unitary::from_diagonal(Vector::Map(std::vector<Complex>{1, -1, 1}.data(), 3)));
  REQUIRE(d.size() == 2);
  CHECK(d[0].phase == doctest::Approx(0.0));
  CHECK(d[0].rank() == 2);
  CHECK(d[1].phase == doctest::Approx(kTwoPi / 2));
  CHECK(d[1].rank() == 1);

  // roots of lambda^3 - 1
  const auto c = eig_unitary(Unitary::permutation({1, 2, 0}));
  REQUIRE(c.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c[i].rank() == 1);
    CHECK(c[i].phase == doctest::Approx(kTwoPi * static_cast<double>(i) / 3.0));
  }

  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const auto parts = eig_unitary(Unitary::from_matrix(random_unitary(rng, 6)));
    Matrix sum = Matrix::Zero(6, 6);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      sum += parts[i].projection;
      for (std::size_t j = i + 1; j < parts.size(); ++j)
        CHECK(operator_norm(parts[i].projection * parts[j].projection) < 1e-10);
    }
    CHECK(approx_equal(sum, identity(6), 1e-10));
  }

  std::vector<Complex> close{1.0, std::polar(1.0, 2e-8)};
  CHECK_THROWS_AS(eig_unitary(Unitary::from_diagonal(Vector::Map(close.data(), 2)), 1e-8), Error);
}

TEST_CASE("unitary storage") {
  const Unitary x = Unitary::permutation({1, 2, 0});
  const Unitary d = Unitary::diagonal_phases({Rational(0), Rational(1, 3), Rational(2, 3)});
  const Unitary xd = x * d;
  CHECK(xd.is_exact());
  CHECK(approx_equal(xd.dense(), naive_product(x.dense(), d.dense()), 1e-14));
  CHECK(approx_equal(kron(x, d).dense(), kron(x.dense(), d.dense()), 1e-14));
  CHECK((x * x.adjoint()).is_identity());
  CHECK(x.pow(3).is_identity());
  CHECK(d.pow(-1).diagonal_phases_exact()[1] == Rational(2, 3));
  CHECK(approx_equal(direct_sum(x, d).dense().block(3, 3, 3, 3), d.dense(), 0.0));
  CHECK_THROWS_AS(Unitary::from_matrix(2.0 * identity(2)), Error);
}
