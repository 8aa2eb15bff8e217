#include "uhf/exact.hpp"

#include <numeric>

namespace uhf::exact {

namespace {

using Poly = std::vector<std::int64_t>;

// Exact division of integer polynomials by a monic divisor.
Poly divide_exact(Poly num, const Poly& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() <= dn) throw Error("cyclotomic: bad division");
  Poly q(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const std::int64_t c = num[i];
    q[i - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw Error("cyclotomic: division left a remainder");
  return q;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(std::int64_t m) {
  if (m < 1) throw Error("cyclotomic polynomial needs m >= 1");
  Poly p(static_cast<std::size_t>(m) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(m)] = 1;
  for (std::int64_t d = 1; d < m; ++d)
    if (m % d == 0) p = divide_exact(p, cyclotomic_polynomial(d));
  return p;
}

CyclotomicField::CyclotomicField(std::int64_t m) : m_(m), phi_(cyclotomic_polynomial(m)) {}

Cyclotomic::Cyclotomic(std::shared_ptr<const CyclotomicField> field)
    : field_(std::move(field)), c_(field_->degree(), Rational(0)) {}

void Cyclotomic::reduce(std::vector<Rational>& poly) const {
  const auto& phi = field_->modulus();
  const std::size_t deg = field_->degree();
  for (std::size_t i = poly.size(); i-- > deg;) {
    const Rational c = poly[i];
    if (c == Rational(0)) continue;
    for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= c * phi[j];
  }
  poly.resize(deg, Rational(0));
}

Cyclotomic Cyclotomic::root(std::shared_ptr<const CyclotomicField> field, std::int64_t e) {
  Cyclotomic out(std::move(field));
  const std::int64_t m = out.field_->order();
  const auto r = static_cast<std::size_t>(((e % m) + m) % m);
  std::vector<Rational> poly(std::max(r + 1, out.c_.size()), Rational(0));
  poly[r] = 1;
  out.reduce(poly);
  out.c_ = std::move(poly);
  return out;
}

Cyclotomic Cyclotomic::rational(std::shared_ptr<const CyclotomicField> field, Rational r) {
  Cyclotomic out(std::move(field));
  if (out.c_.empty()) throw Error("cyclotomic: degenerate field");
  out.c_[0] = r;
  return out;
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : c_)
    if (c != Rational(0)) return false;
  return true;
}

Cyclotomic Cyclotomic::conj() const {
  // zeta^i -> zeta^{m - i}
  const auto m = static_cast<std::size_t>(field_->order());
  std::vector<Rational> poly(m + 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) poly[(m - i) % m] += c_[i];
  Cyclotomic out(field_);
  out.reduce(poly);
  out.c_ = std::move(poly);
  return out;
}

Complex Cyclotomic::value() const {
  Complex v = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i)
    v += boost::rational_cast<double>(c_[i]) * phase_value(Rational(static_cast<std::int64_t>(i), field_->order()));
  return v;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  std::vector<Rational> poly(a.c_.size() + b.c_.size(), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == Rational(0)) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != Rational(0)) poly[i + j] += a.c_[i] * b.c_[j];
  }
  Cyclotomic out(a.field_);
  out.reduce(poly);
  out.c_ = std::move(poly);
  return out;
}

Rational Cyclotomic::to_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != Rational(0)) throw Error("cyclotomic element is not rational");
  return c_.empty() ? Rational(0) : c_[0];
}

// ---------------------------------------------------------------------------

CyclotomicMatrix::CyclotomicMatrix(std::shared_ptr<const CyclotomicField> field, std::size_t n)
    : field_(field), n_(n), a_(n * n, Cyclotomic(field)) {}

bool CyclotomicMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

CyclotomicMatrix CyclotomicMatrix::adjoint() const {
  CyclotomicMatrix out(field_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j).conj();
  return out;
}

Cyclotomic CyclotomicMatrix::trace() const {
  Cyclotomic t(field_);
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

Matrix CyclotomicMatrix::to_complex() const {
  Matrix out(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).value();
  return out;
}

CyclotomicMatrix operator*(const CyclotomicMatrix& a, const CyclotomicMatrix& b) {
  if (a.n_ != b.n_) throw Error("cyclotomic matrix product: dimension mismatch");
  CyclotomicMatrix out(a.field_, a.n_);
  for (std::size_t i = 0; i < a.n_; ++i)
    for (std::size_t k = 0; k < a.n_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < a.n_; ++j)
        if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

CyclotomicMatrix operator-(const CyclotomicMatrix& a, const CyclotomicMatrix& b) {
  CyclotomicMatrix out = a;
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= b.a_[i];
  return out;
}

CyclotomicMatrix operator+(const CyclotomicMatrix& a, const CyclotomicMatrix& b) {
  CyclotomicMatrix out = a;
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += b.a_[i];
  return out;
}

std::int64_t phase_conductor(const Unitary& u) {
  std::int64_t m = 1;
  for (const auto& ph : u.monomial().phase) m = std::lcm(m, ph.denominator());
  return m;
}

CyclotomicMatrix lift(const Unitary& u, const std::shared_ptr<const CyclotomicField>& field) {
  const auto& mono = u.monomial();
  CyclotomicMatrix out(field, mono.perm.size());
  for (std::size_t j = 0; j < mono.perm.size(); ++j) {
    const Rational e = mono.phase[j] * field->order();
    if (e.denominator() != 1) throw Error("lift: field order does not absorb the phase denominators");
    out(mono.perm[j], j) = Cyclotomic::root(field, e.numerator());
  }
  return out;
}

ExactTowerCheck exact_cyclic_tower(const Unitary& diagonal, std::int64_t k) {
  if (k <= 0) throw Error("exact_cyclic_tower: k must be positive");
  const auto phases = diagonal.diagonal_phases_exact();
  const std::size_t n = phases.size();
  std::vector<std::vector<std::size_t>> classes(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    const Rational j = phases[i] * k;
    if (j.denominator() != 1) throw Error("exact_cyclic_tower: entry is not a k-th root of unity");
    classes[static_cast<std::size_t>(j.numerator() % k)].push_back(i);
  }
  std::size_t d = n;
  for (const auto& c : classes) d = std::min(d, c.size());

  const std::int64_t m = std::lcm(k, phase_conductor(diagonal));
  auto field = std::make_shared<const CyclotomicField>(m);
  const std::int64_t step = m / k;  // omega = zeta_m^step
  const Rational inv_k(1, k);

  std::vector<CyclotomicMatrix> tower;
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t s = (k - i) % k;
    CyclotomicMatrix p(field, n);
    for (std::size_t t = 0; t < d; ++t)
      for (std::int64_t ja = 0; ja < k; ++ja)
        for (std::int64_t jb = 0; jb < k; ++jb) {
          // (1/k) omega^{-ja s} conj(omega^{-jb s})
          const std::int64_t e = step * s * (jb - ja);
          p(classes[static_cast<std::size_t>(ja)][t], classes[static_cast<std::size_t>(jb)][t]) +=
              Cyclotomic::root(field, e) * Cyclotomic::rational(field, inv_k);
        }
    tower.push_back(std::move(p));
  }

  ExactTowerCheck out;
  out.length = static_cast<std::size_t>(k);
  out.rank = d;
  out.self_adjoint = out.idempotent = out.orthogonal = out.shift_exact = true;
  const CyclotomicMatrix u = lift(diagonal, field);
  const CyclotomicMatrix u_star = u.adjoint();
  Cyclotomic total(field);
  for (std::size_t i = 0; i < tower.size(); ++i) {
    const auto& p = tower[i];
    out.self_adjoint = out.self_adjoint && (p - p.adjoint()).is_zero();
    out.idempotent = out.idempotent && (p * p - p).is_zero();
    for (std::size_t j = i + 1; j < tower.size(); ++j) out.orthogonal = out.orthogonal && (p * tower[j]).is_zero();
    out.shift_exact = out.shift_exact && (u * p * u_star - tower[(i + 1) % tower.size()]).is_zero();
    total += p.trace();
  }
  out.trace_defect = Rational(1) - total.to_rational() / static_cast<std::int64_t>(n);
  return out;
}

}  // namespace uhf::exact
