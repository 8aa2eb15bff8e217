#include "uhf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace uhf {

Rational reduce_phase(Rational r) {
  const std::int64_t n = r.numerator();
  const std::int64_t d = r.denominator();
  return Rational(((n % d) + d) % d, d);
}

Complex phase_value(const Rational& r) {
  const Rational red = reduce_phase(r);
  const std::int64_t n = red.numerator();
  const std::int64_t d = red.denominator();
  // quarter turns are returned exactly
  if ((4 * n) % d == 0) {
    switch ((4 * n) / d) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, kTwoPi * static_cast<double>(n) / static_cast<double>(d));
}

Complex phase_value(double r) { return std::polar(1.0, kTwoPi * r); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

static void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(std::string(what) + ": matrix must be square and non-empty");
}

Complex normalized_trace(const Matrix& a) {
  require_square(a, "normalized_trace");
  return a.trace() / static_cast<double>(a.rows());
}

double two_norm(const Matrix& a) {
  require_square(a, "two_norm");
  // tau(a* a) = |a|_F^2 / N
  return std::sqrt(a.squaredNorm() / static_cast<double>(a.rows()));
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Matrix g = a.cols() <= a.rows() ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const Matrix d = a - b;
  // Frobenius dominates the operator norm; only refine when it is inconclusive.
  if (d.norm() <= tol) return true;
  return operator_norm(d) <= tol;
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

// ---------------------------------------------------------------------------
// Unitary

Unitary Unitary::from_matrix(Matrix m, double tol) {
  require_square(m, "Unitary");
  const Matrix err = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  if (err.norm() > tol && operator_norm(err) > tol)
    throw Error("matrix is not unitary within tolerance");
  return Unitary(Store(std::move(m)));
}

Unitary Unitary::from_diagonal(Vector d, double tol) {
  if (d.size() == 0) throw Error("Unitary: empty diagonal");
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (std::abs(std::abs(d(i)) - 1.0) > tol) throw Error("diagonal entry off the unit circle");
  return Unitary(Store(std::move(d)));
}

Unitary Unitary::from_monomial(Monomial m) {
  const std::size_t n = m.perm.size();
  if (n == 0 || m.phase.size() != n) throw Error("Unitary: malformed monomial data");
  std::vector<bool> seen(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (m.perm[j] >= n || seen[m.perm[j]]) throw Error("Unitary: monomial pattern is not a permutation");
    seen[m.perm[j]] = true;
    m.phase[j] = reduce_phase(m.phase[j]);
  }
  return Unitary(Store(std::move(m)));
}

Unitary Unitary::diagonal_phases(std::vector<Rational> phases) {
  std::vector<std::size_t> perm(phases.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return from_monomial({std::move(perm), std::move(phases)});
}

Unitary Unitary::permutation(std::vector<std::size_t> perm) {
  std::vector<Rational> phases(perm.size(), Rational(0));
  return from_monomial({std::move(perm), std::move(phases)});
}

Unitary Unitary::identity(std::size_t n) {
  return diagonal_phases(std::vector<Rational>(n, Rational(0)));
}

std::size_t Unitary::dim() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Monomial>) return s.perm.size();
        else if constexpr (std::is_same_v<T, Vector>) return static_cast<std::size_t>(s.size());
        else return static_cast<std::size_t>(s.rows());
      },
      store_);
}

bool Unitary::is_diagonal() const {
  if (const auto* m = std::get_if<Monomial>(&store_)) {
    for (std::size_t j = 0; j < m->perm.size(); ++j)
      if (m->perm[j] != j) return false;
    return true;
  }
  return std::holds_alternative<Vector>(store_);
}

bool Unitary::is_identity(double tol) const {
  if (const auto* m = std::get_if<Monomial>(&store_)) {
    for (std::size_t j = 0; j < m->perm.size(); ++j)
      if (m->perm[j] != j || m->phase[j] != Rational(0)) return false;
    return true;
  }
  if (const auto* d = std::get_if<Vector>(&store_))
    return (d->array() - Complex(1.0)).abs().maxCoeff() <= tol;
  const Matrix& u = std::get<Matrix>(store_);
  return approx_equal(u, Matrix::Identity(u.rows(), u.cols()), tol);
}

const Unitary::Monomial& Unitary::monomial() const {
  if (const auto* m = std::get_if<Monomial>(&store_)) return *m;
  throw Error("unitary has no exact-phase data");
}

Vector Unitary::diagonal() const {
  if (!is_diagonal()) throw Error("unitary is not diagonal");
  if (const auto* d = std::get_if<Vector>(&store_)) return *d;
  const auto& m = std::get<Monomial>(store_);
  Vector out(static_cast<Eigen::Index>(m.phase.size()));
  for (std::size_t j = 0; j < m.phase.size(); ++j) out(static_cast<Eigen::Index>(j)) = phase_value(m.phase[j]);
  return out;
}

std::vector<Rational> Unitary::diagonal_phases_exact() const {
  if (!is_exact() || !is_diagonal()) throw Error("unitary is not an exact diagonal");
  return std::get<Monomial>(store_).phase;
}

Matrix Unitary::dense() const {
  const std::size_t n = dim();
  if (n > kDenseLimit) throw Error("unitary of dimension " + std::to_string(n) + " is too large to materialize");
  if (const auto* u = std::get_if<Matrix>(&store_)) return *u;
  if (const auto* d = std::get_if<Vector>(&store_)) return d->asDiagonal();
  const auto& m = std::get<Monomial>(store_);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j)
    out(static_cast<Eigen::Index>(m.perm[j]), static_cast<Eigen::Index>(j)) = phase_value(m.phase[j]);
  return out;
}

Unitary Unitary::adjoint() const {
  if (const auto* m = std::get_if<Monomial>(&store_)) {
    Monomial out{std::vector<std::size_t>(m->perm.size()), std::vector<Rational>(m->perm.size())};
    for (std::size_t j = 0; j < m->perm.size(); ++j) {
      out.perm[m->perm[j]] = j;
      out.phase[m->perm[j]] = reduce_phase(-m->phase[j]);
    }
    return Unitary(Store(std::move(out)));
  }
  if (const auto* d = std::get_if<Vector>(&store_)) return Unitary(Store(Vector(d->conjugate())));
  return Unitary(Store(Matrix(std::get<Matrix>(store_).adjoint())));
}

Unitary Unitary::pow(std::int64_t e) const {
  if (e < 0) return adjoint().pow(-e);
  if (const auto* m = std::get_if<Monomial>(&store_); m && is_diagonal()) {
    std::vector<Rational> ph(m->phase.size());
    for (std::size_t j = 0; j < ph.size(); ++j) ph[j] = m->phase[j] * e;
    return diagonal_phases(std::move(ph));
  }
  if (const auto* d = std::get_if<Vector>(&store_)) {
    Vector out(d->size());
    for (Eigen::Index j = 0; j < d->size(); ++j) out(j) = std::polar(1.0, std::arg((*d)(j)) * static_cast<double>(e));
    return Unitary(Store(std::move(out)));
  }
  Unitary result = Unitary::identity(dim());
  Unitary base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Complex Unitary::normalized_trace() const {
  const double n = static_cast<double>(dim());
  if (const auto* m = std::get_if<Monomial>(&store_)) {
    Complex t = 0.0;
    for (std::size_t j = 0; j < m->perm.size(); ++j)
      if (m->perm[j] == j) t += phase_value(m->phase[j]);
    return t / n;
  }
  if (const auto* d = std::get_if<Vector>(&store_)) return d->sum() / n;
  return std::get<Matrix>(store_).trace() / n;
}

Matrix Unitary::conjugate(const Matrix& x) const {
  const auto n = static_cast<Eigen::Index>(dim());
  if (x.rows() != n || x.cols() != n) throw Error("conjugate: dimension mismatch");
  if (const auto* m = std::get_if<Monomial>(&store_)) {
    Matrix out(n, n);
    std::vector<Complex> ph(m->phase.size());
    for (std::size_t j = 0; j < ph.size(); ++j) ph[j] = phase_value(m->phase[j]);
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index a = 0; a < n; ++a)
        out(static_cast<Eigen::Index>(m->perm[a]), static_cast<Eigen::Index>(m->perm[b])) =
            ph[a] * x(a, b) * std::conj(ph[b]);
    return out;
  }
  if (const auto* d = std::get_if<Vector>(&store_)) return d->asDiagonal() * x * d->conjugate().asDiagonal();
  const Matrix& u = std::get<Matrix>(store_);
  return u * x * u.adjoint();
}

Unitary operator*(const Unitary& a, const Unitary& b) {
  if (a.dim() != b.dim()) throw Error("unitary product: dimension mismatch");
  using M = Unitary::Monomial;
  if (a.is_exact() && b.is_exact()) {
    const M& x = std::get<M>(a.store_);
    const M& y = std::get<M>(b.store_);
    M out{std::vector<std::size_t>(x.perm.size()), std::vector<Rational>(x.perm.size())};
    for (std::size_t j = 0; j < x.perm.size(); ++j) {
      out.perm[j] = x.perm[y.perm[j]];
      out.phase[j] = reduce_phase(y.phase[j] + x.phase[y.perm[j]]);
    }
    return Unitary(Unitary::Store(std::move(out)));
  }
  if (a.is_diagonal() && b.is_diagonal())
    return Unitary(Unitary::Store(Vector(a.diagonal().cwiseProduct(b.diagonal()))));
  return Unitary(Unitary::Store(Matrix(a.dense() * b.dense())));
}

Unitary kron(const Unitary& a, const Unitary& b) {
  using M = Unitary::Monomial;
  if (a.is_exact() && b.is_exact()) {
    const M& x = std::get<M>(a.store_);
    const M& y = std::get<M>(b.store_);
    const std::size_t nb = y.perm.size();
    M out{std::vector<std::size_t>(x.perm.size() * nb), std::vector<Rational>(x.perm.size() * nb)};
    for (std::size_t i = 0; i < x.perm.size(); ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        out.perm[i * nb + j] = x.perm[i] * nb + y.perm[j];
        out.phase[i * nb + j] = reduce_phase(x.phase[i] + y.phase[j]);
      }
    return Unitary(Unitary::Store(std::move(out)));
  }
  if (a.is_diagonal() && b.is_diagonal()) {
    const Vector x = a.diagonal();
    const Vector y = b.diagonal();
    Vector out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
    return Unitary(Unitary::Store(std::move(out)));
  }
  return Unitary(Unitary::Store(kron(a.dense(), b.dense())));
}

Unitary direct_sum(const Unitary& a, const Unitary& b) {
  const std::size_t na = a.dim();
  if (a.is_exact() && b.is_exact()) {
    Unitary::Monomial out = a.monomial();
    for (std::size_t j = 0; j < b.dim(); ++j) {
      out.perm.push_back(na + b.monomial().perm[j]);
      out.phase.push_back(b.monomial().phase[j]);
    }
    return Unitary::from_monomial(std::move(out));
  }
  if (a.is_diagonal() && b.is_diagonal()) {
    Vector d(static_cast<Eigen::Index>(na + b.dim()));
    d << a.diagonal(), b.diagonal();
    return Unitary::from_diagonal(std::move(d));
  }
  const auto n = static_cast<Eigen::Index>(na + b.dim());
  Matrix m = Matrix::Zero(n, n);
  m.topLeftCorner(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na)) = a.dense();
  m.bottomRightCorner(static_cast<Eigen::Index>(b.dim()), static_cast<Eigen::Index>(b.dim())) = b.dense();
  return Unitary::from_matrix(std::move(m));
}

Unitary kron_all(std::span<const Unitary> factors) {
  if (factors.empty()) return Unitary::identity(1);
  Unitary out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Projections

Projection::Projection(Matrix p, double tol) : p_(std::move(p)) {
  require_square(p_, "Projection");
  const Matrix herm = p_ - p_.adjoint();
  if (herm.norm() > tol && operator_norm(herm) > tol) throw Error("Projection: matrix is not self-adjoint");
  const Matrix idem = p_ * p_ - p_;
  if (idem.norm() > tol && operator_norm(idem) > tol) throw Error("Projection: matrix is not idempotent");
}

Projection Projection::zero(std::size_t n) {
  return Projection(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

Projection nearest_projection(const Matrix& a, double delta) {
  if (!(delta > 0.0 && delta < 0.25)) throw Error("nearest_projection: delta must lie in (0, 1/4)");
  require_square(a, "nearest_projection");
  if (operator_norm(a - a.adjoint()) > kStructuralTol) throw Error("nearest_projection: input is not self-adjoint");
  const Matrix h = (a + a.adjoint()) / 2.0;
  if (operator_norm(h * h - h) >= delta)
    throw Error("nearest_projection: ||a^2 - a|| is not below delta");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& ev = es.eigenvalues();
  Matrix p = Matrix::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double lam = ev(i);
    if (lam > 2.0 * delta && lam < 1.0 - 2.0 * delta)
      throw Error("nearest_projection: eigenvalue inside the spectral gap");
    if (lam > 0.5) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  // symmetrize against rounding before validating
  p = (p + p.adjoint()) / 2.0;
  return Projection(std::move(p));
}

static Matrix range_basis(const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((q + q.adjoint()) / 2.0);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
  Matrix b(q.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
  return b;
}

std::vector<Projection> orthogonalize_projections(std::span<const Projection> q, double eps) {
  if (q.empty()) return {};
  if (!(eps > 0.0)) throw Error("orthogonalize_projections: eps must be positive");
  const std::size_t n = q.size();
  const auto dim = q.front().matrix().rows();
  double overlap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].matrix().rows() != dim) throw Error("orthogonalize_projections: ambient dimensions differ");
    for (std::size_t j = i + 1; j < n; ++j)
      overlap = std::max(overlap, operator_norm(q[i].matrix() * q[j].matrix()));
  }
  const double threshold = std::min(eps, 1.0) / (8.0 * static_cast<double>(n));
  if (overlap > threshold)
    throw Error("orthogonalize_projections: pairwise overlap " + std::to_string(overlap) +
                " exceeds the admissible threshold " + std::to_string(threshold));

  std::vector<Matrix> bases;
  Eigen::Index total = 0;
  for (const auto& p : q) {
    bases.push_back(range_basis(p.matrix()));
    total += bases.back().cols();
  }
  if (total > dim) throw Error("orthogonalize_projections: ranges do not fit in the ambient space");
  Matrix stacked(dim, total);
  Eigen::Index at = 0;
  for (const auto& b : bases) {
    stacked.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  std::vector<Projection> out;
  if (total == 0) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(Projection::zero(static_cast<std::size_t>(dim)));
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(stacked.adjoint() * stacked);
  const Matrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                          es.eigenvectors().adjoint();
  const Matrix ortho = stacked * inv_sqrt;
  at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix b = ortho.middleCols(at, bases[i].cols());
    at += bases[i].cols();
    Matrix p = b * b.adjoint();
    p = (p + p.adjoint()) / 2.0;
    if (operator_norm(p - q[i].matrix()) > eps)
      throw Error("orthogonalize_projections: certified distance exceeds eps");
    out.emplace_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Factor commutant

static void require_split(const Matrix& x, std::size_t n, std::size_t n_prime) {
  if (n == 0 || n_prime == 0 || x.rows() != x.cols() ||
      static_cast<std::size_t>(x.rows()) != n * n_prime)
    throw Error("factor_commutant: N * N' does not match the side of x");
}

double matrix_unit_commutator_bound(const Matrix& x, std::size_t n, std::size_t n_prime) {
  require_split(x, n, n_prime);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
      worst = std::max(worst, operator_norm(commutator(x, kron(e, identity(n_prime)))));
    }
  return worst;
}

FactorCommutant factor_commutant(const Matrix& x, std::size_t n, std::size_t n_prime, double eps) {
  require_split(x, n, n_prime);
  const auto np = static_cast<Eigen::Index>(n_prime);
  Matrix b = Matrix::Zero(np, np);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) b += x.block(i * np, i * np, np, np);
  b /= static_cast<double>(n);
  const double err = operator_norm(x - kron(identity(n), b));
  const double nd = static_cast<double>(n);
  return {std::move(b), err, 10.0 * nd * nd * nd * eps};
}

// ---------------------------------------------------------------------------
// Spectral decomposition of unitaries

namespace {

struct Eigenpair {
  double phase;
  Eigen::Index column;
};

// Pivoted Gram-Schmidt on P e_k: deterministic basis, exact for coordinate subspaces.
Matrix canonical_basis(const Matrix& p, Eigen::Index rank) {
  const Eigen::Index n = p.rows();
  Matrix basis(n, rank);
  Matrix residual = p;
  for (Eigen::Index r = 0; r < rank; ++r) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double nk = residual.col(k).norm();
      if (nk > best_norm + 1e-12) {
        best_norm = nk;
        best = k;
      }
    }
    Vector v = residual.col(best) / best_norm;
    basis.col(r) = v;
    residual -= v * (v.adjoint() * residual);
  }
  return basis;
}

double wrap_phase(double a) {
  double p = std::fmod(a, kTwoPi);
  if (p < 0) p += kTwoPi;
  if (p >= kTwoPi) p -= kTwoPi;
  return p;
}

}  // namespace

std::vector<SpectralCluster> eig_unitary(const Unitary& u, double cluster_tol) {
  const auto n = static_cast<Eigen::Index>(u.dim());
  std::vector<Eigenpair> pairs;
  Matrix vectors;
  if (u.is_diagonal()) {
    const Vector d = u.diagonal();
    vectors = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) pairs.push_back({wrap_phase(std::arg(d(i))), i});
  } else {
    const Matrix m = u.dense();
    if (operator_norm(m.adjoint() * m - Matrix::Identity(n, n)) > 1e-8) throw Error("eig_unitary: input is not unitary");
    Eigen::ComplexSchur<Matrix> schur(m);
    vectors = schur.matrixU();
    for (Eigen::Index i = 0; i < n; ++i) pairs.push_back({wrap_phase(std::arg(schur.matrixT()(i, i))), i});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.phase < b.phase; });

  // group consecutive phases, then merge the wrap-around group
  std::vector<std::vector<Eigenpair>> groups;
  for (const auto& p : pairs) {
    if (groups.empty() || p.phase - groups.back().back().phase > cluster_tol) groups.push_back({p});
    else groups.back().push_back(p);
  }
  if (groups.size() > 1 && groups.front().front().phase + kTwoPi - groups.back().back().phase <= cluster_tol) {
    auto tail = std::move(groups.back());
    groups.pop_back();
    tail.insert(tail.end(), groups.front().begin(), groups.front().end());
    groups.front() = std::move(tail);
  }

  std::vector<SpectralCluster> out;
  for (const auto& g : groups) {
    Complex mean = 0.0;
    for (const auto& p : g) mean += std::polar(1.0, p.phase);
    const double phase = wrap_phase(std::arg(mean));
    Matrix raw(n, static_cast<Eigen::Index>(g.size()));
    for (std::size_t c = 0; c < g.size(); ++c) raw.col(static_cast<Eigen::Index>(c)) = vectors.col(g[c].column);
    Matrix proj = raw * raw.adjoint();
    proj = (proj + proj.adjoint()) / 2.0;
    Matrix basis = canonical_basis(proj, raw.cols());
    Matrix clean = basis * basis.adjoint();
    out.push_back({phase, std::move(basis), std::move(clean)});
  }
  std::sort(out.begin(), out.end(), [](const SpectralCluster& a, const SpectralCluster& b) { return a.phase < b.phase; });
  for (std::size_t i = 0; out.size() > 1 && i < out.size(); ++i) {
    const auto& a = out[i];
    const auto& b = out[(i + 1) % out.size()];
    if (angle_distance(a.phase, b.phase) < 3.0 * cluster_tol)
      throw Error("eig_unitary: ambiguous clustering, clusters at phases " + std::to_string(a.phase) + " and " +
                  std::to_string(b.phase) + " are closer than 3 * cluster_tol");
  }
  return out;
}

}  // namespace uhf
