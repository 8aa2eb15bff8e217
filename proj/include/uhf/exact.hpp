#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "uhf/linalg.hpp"

namespace uhf::exact {

/// Q(zeta_m) as polynomials modulo the m-th cyclotomic polynomial.
class CyclotomicField {
 public:
  explicit CyclotomicField(std::int64_t m);
  std::int64_t order() const { return m_; }
  std::size_t degree() const { return phi_.size() - 1; }
  const std::vector<std::int64_t>& modulus() const { return phi_; }

 private:
  std::int64_t m_;
  std::vector<std::int64_t> phi_;  // monic, low degree first
};

std::vector<std::int64_t> cyclotomic_polynomial(std::int64_t m);

class Cyclotomic {
 public:
  explicit Cyclotomic(std::shared_ptr<const CyclotomicField> field);
  static Cyclotomic root(std::shared_ptr<const CyclotomicField> field, std::int64_t e);  // zeta^e
  static Cyclotomic rational(std::shared_ptr<const CyclotomicField> field, Rational r);

  bool is_zero() const;
  Cyclotomic conj() const;
  Complex value() const;
  const std::shared_ptr<const CyclotomicField>& field() const { return field_; }

  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return (a - b).is_zero(); }

  /// Rational part when the element lies in Q; throws otherwise.
  Rational to_rational() const;

 private:
  void reduce(std::vector<Rational>& poly) const;
  std::shared_ptr<const CyclotomicField> field_;
  std::vector<Rational> c_;  // length = degree
};

/// Dense square matrix over a cyclotomic field.
class CyclotomicMatrix {
 public:
  CyclotomicMatrix(std::shared_ptr<const CyclotomicField> field, std::size_t n);
  std::size_t dim() const { return n_; }
  Cyclotomic& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Cyclotomic& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  bool is_zero() const;
  CyclotomicMatrix adjoint() const;
  Cyclotomic trace() const;
  Matrix to_complex() const;

  friend CyclotomicMatrix operator*(const CyclotomicMatrix& a, const CyclotomicMatrix& b);
  friend CyclotomicMatrix operator-(const CyclotomicMatrix& a, const CyclotomicMatrix& b);
  friend CyclotomicMatrix operator+(const CyclotomicMatrix& a, const CyclotomicMatrix& b);

 private:
  std::shared_ptr<const CyclotomicField> field_;
  std::size_t n_;
  std::vector<Cyclotomic> a_;
};

/// Exact-phase monomial unitary lifted into Q(zeta_m); m must be a multiple of
/// every phase denominator.
CyclotomicMatrix lift(const Unitary& u, const std::shared_ptr<const CyclotomicField>& field);

/// Least common multiple of the phase denominators of an exact unitary.
std::int64_t phase_conductor(const Unitary& u);

/// Result of rebuilding the eigen-tuple cyclic tower of a diagonal root-of-unity
/// unitary in exact arithmetic.
struct ExactTowerCheck {
  std::size_t length = 0;
  std::size_t rank = 0;  // d = smallest eigenvalue class
  bool self_adjoint = false;
  bool idempotent = false;
  bool orthogonal = false;   // p_i p_j == 0 exactly
  bool shift_exact = false;  // Ad U(p_i) == p_{i+1 mod k} exactly
  Rational trace_defect;     // 1 - tau(sum p_i)
  bool exact() const { return self_adjoint && idempotent && orthogonal && shift_exact && trace_defect == Rational(0); }
};

ExactTowerCheck exact_cyclic_tower(const Unitary& diagonal, std::int64_t k);

}  // namespace uhf::exact
